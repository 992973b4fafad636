#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "bpcm/change.hpp"
#include "bpcm/clock.hpp"
#include "bpcm/model.hpp"

namespace bpcm {

// Applies every record in order and returns the resulting model. The input
// model is never mutated, and a failure leaves no partial result
// (all-or-nothing): the first failing record raises ConflictError carrying
// its index and element id. Every modification checks its stored OLD value
// against the current model, adds require the id to be absent, deletes
// require the element to equal its snapshot. After every single record the
// dangling-flow invariant still holds.
ProcessModel apply(const ChangeSet& set, const ProcessModel& model);

struct InvertOptions {
    std::shared_ptr<Clock> clock;  // null -> system UTC
    // Provenance for the inverse records. When absent, each inverse record
    // keeps the original agent with cause "revert of <set_id>".
    std::optional<Provenance> provenance;
};

// Builds the inverse set: record order reversed, adds and deletes swapped
// (snapshots preserved), every modification's old and new values swapped,
// base_version and result_version swapped. Fresh record ids and timestamps.
// Throws InvalidModelError when a record fails validate_record.
ChangeSet invert(const ChangeSet& set, const InvertOptions& options = {});

// Left fold of apply over the list. Consecutive sets must chain:
// each base_version equals the previous result_version, otherwise
// VersionChainError. Conflicts propagate with the failing set's id.
ProcessModel replay(const std::vector<ChangeSet>& sets, const ProcessModel& initial);

}  // namespace bpcm
