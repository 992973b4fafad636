#pragma once

#include <memory>
#include <vector>

#include "bpcm/change.hpp"
#include "bpcm/clock.hpp"
#include "bpcm/model.hpp"

namespace bpcm {

struct DiffRequest {
    ProcessModel old_model;
    ProcessModel new_model;
    Provenance provenance;
    std::shared_ptr<Clock> clock;  // null -> system UTC
};

// Computes the canonical change set transforming old_model into new_model.
// Matching is by element id. Records are emitted in canonical order: flow
// removals, node deletions, node additions, flow additions, node
// modifications, flow modifications, process-level changes; lexicographic by
// element id within each group, and within one element in the fixed field
// order implemented by the field_diff_* functions. All records share one
// timestamp drawn once from the clock. Record ids are deterministic for
// identical inputs under a fixed clock.
//
// Applying the result to old_model yields a model model_equals to new_model;
// every intermediate model during apply satisfies the dangling-flow
// invariant. A flow whose old endpoint is deleted (or changes its node kind)
// in the same diff is therefore emitted as a remove/add pair instead of
// field modifications.
//
// Throws InvalidModelError when either model or the provenance violates its
// invariants. diff(M, M) has zero records.
ChangeSet diff(const DiffRequest& request);

// Field-by-field comparison of user task details, one modification per
// differing field, in the order: assignee, due_date, description,
// candidate_users, candidate_groups, form_key. Equal details yield {}.
std::vector<UserTaskModification> field_diff_user_task(const UserTaskDetail& old_detail,
                                                       const UserTaskDetail& new_detail);

// Call-type/target pair first, then per-field-name injection comparison
// (ordered by field name), then the result variable. Equal details yield {}.
std::vector<JavaServiceTaskModification> field_diff_service_task(
    const JavaServiceTaskDetail& old_detail, const JavaServiceTaskDetail& new_detail);

}  // namespace bpcm
