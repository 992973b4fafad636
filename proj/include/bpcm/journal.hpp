#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bpcm/bpmn_io.hpp"
#include "bpcm/change.hpp"
#include "bpcm/clock.hpp"
#include "bpcm/model.hpp"

namespace bpcm {

// One committed change set plus its position in the tamper-evidence chain.
// digest = SHA-256 of the canonical entry encoding (every field except
// "digest" itself); prev_digest links to the previous entry (the baseline
// file digest for the first entry). See docs/FORMATS.md.
struct JournalEntry {
    ChangeSet set;
    Timestamp committed_at;
    std::string prev_digest;
    std::string digest;
};

struct LogRow {
    std::string version;  // result version tag of the entry
    std::string set_id;
    std::string agent;  // from the first record; "-" for an empty set
    std::string cause;
    Timestamp committed_at;
    std::size_t record_count = 0;
};

struct TraceHit {
    std::string version;  // version tag the record produced
    std::string record_id;
    ChangeCategory category = ChangeCategory::TaskLevel;
    std::optional<NodeKind> task_kind;  // present for task-level hits
    Provenance provenance;
    Timestamp timestamp;
};

struct TraceResult {
    std::string element_id;
    std::vector<TraceHit> hits;  // version order
};

enum class FindingKind {
    UnauthorizedAgent,  // provenance agent outside the ACL
    ChainBroken,        // version tags or timestamps violate journal invariants
    ReplayMismatch,     // digest chain or cached head digest disagrees
};

std::string_view to_string(FindingKind kind);

struct AuditFinding {
    FindingKind kind = FindingKind::ChainBroken;
    std::string subject;  // record id, version tag or file
    std::string detail;
};

// Append-only journal of change sets persisted in one directory:
//
//   baseline.bpmn   canonical serialization of version v0
//   acl.txt         authorized agent names, one per line
//   entries.jsonl   one JSON entry per committed set (schema in FORMATS)
//   head.digest     cache: SHA-256 of the canonical head serialization
//   .lock           advisory lock taken for mutations
//
// Version tag of entry k (0-based) is "v{k+1}"; "v0" is the baseline.
// Commits never reject unauthorized agents; verify() reports them afterwards.
// No operation removes or rewrites an existing entry.
class Journal {
public:
    static Journal init(const std::filesystem::path& directory, const ProcessModel& baseline,
                        const std::set<std::string>& acl, const BpmnDialect& dialect = {});
    static Journal open(const std::filesystem::path& directory,
                        const BpmnDialect& dialect = {});

    const std::filesystem::path& directory() const noexcept { return directory_; }
    const ProcessModel& baseline() const noexcept { return baseline_; }
    const std::set<std::string>& acl() const noexcept { return acl_; }
    const std::vector<JournalEntry>& entries() const noexcept { return entries_; }

    std::string head_version() const;

    // Replay of all entries over the baseline, cached after the first call.
    // Throws (ConflictError, VersionChainError) when the stored entries no
    // longer apply; use verify() to diagnose such journals.
    const ProcessModel& head_model() const;

    // Appends the set on top of the current head. An empty base_version
    // adopts the head tag; any other value must match it exactly
    // (VersionMismatch). The set must apply cleanly (ConflictError).
    // Persists atomically before the in-memory state changes.
    void commit(const ChangeSet& set, std::shared_ptr<Clock> clock = nullptr);

    // Model at a version tag, reconstructed by replaying entries over the
    // baseline. The head may be served from cache; cached and recomputed
    // results are byte-identical after canonical serialization.
    ProcessModel version(const std::string& tag) const;

    std::vector<LogRow> log() const;

    // Every record in every entry whose payload references the element id
    // (its own element, or a flow endpoint), in version order.
    TraceResult trace(const std::string& element_id) const;

    // Audit pass over the loaded journal: ACL violations, version-tag or
    // timestamp ordering breaks, digest-chain breaks and a head-digest
    // replay comparison. Findings are data; verify never throws on them.
    std::vector<AuditFinding> verify() const;

    // Commits one compensating set that rolls the head back to `tag`.
    // History is never rewritten; the revert is an ordinary forward commit
    // whose resulting model equals version(tag).
    void revert_to(const std::string& tag, const Provenance& provenance,
                   std::shared_ptr<Clock> clock = nullptr);

private:
    Journal() = default;

    void persist_entry(const JournalEntry& entry, const ProcessModel& new_head);
    void reload_entries();
    std::string baseline_digest() const;

    std::filesystem::path directory_;
    BpmnDialect dialect_;
    ProcessModel baseline_;
    std::string baseline_bytes_;  // exact on-disk serialization of v0
    std::set<std::string> acl_;
    std::vector<JournalEntry> entries_;
    mutable std::optional<ProcessModel> head_;  // lazy cache of the replayed head
};

}  // namespace bpcm
