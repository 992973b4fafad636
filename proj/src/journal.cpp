#include "bpcm/journal.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fstream>
#include <sstream>

#include "bpcm/digest.hpp"
#include "bpcm/errors.hpp"
#include "bpcm/patch.hpp"
#include "bpcm/record_json.hpp"

namespace bpcm {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(FindingKind kind) {
    switch (kind) {
        case FindingKind::UnauthorizedAgent: return "UnauthorizedAgent";
        case FindingKind::ChainBroken: return "ChainBroken";
        case FindingKind::ReplayMismatch: return "ReplayMismatch";
    }
    return "Unknown";
}

namespace {

constexpr const char* kBaselineFile = "baseline.bpmn";
constexpr const char* kAclFile = "acl.txt";
constexpr const char* kEntriesFile = "entries.jsonl";
constexpr const char* kHeadDigestFile = "head.digest";
constexpr const char* kLockFile = ".lock";

// Exclusive advisory lock on the journal directory, held for mutations.
class DirectoryLock {
public:
    explicit DirectoryLock(const fs::path& directory) {
        fd_ = ::open((directory / kLockFile).c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
        if (fd_ < 0 || ::flock(fd_, LOCK_EX) != 0) {
            if (fd_ >= 0) {
                ::close(fd_);
            }
            throw JournalError(JournalErrorKind::Io,
                               "cannot lock journal directory " + directory.string());
        }
    }

    ~DirectoryLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }

    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    int fd_ = -1;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw JournalError(JournalErrorKind::Io, "cannot read " + path.string());
    }
    std::ostringstream out;
    out << in.rdbuf();
    return std::move(out).str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    const fs::path temp = path.string() + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw JournalError(JournalErrorKind::Io, "cannot write " + temp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw JournalError(JournalErrorKind::Io, "cannot write " + temp.string());
        }
    }
    std::error_code ec;
    fs::rename(temp, path, ec);
    if (ec) {
        throw JournalError(JournalErrorKind::Io,
                           "cannot replace " + path.string() + ": " + ec.message());
    }
}

std::string version_tag(std::size_t index) {
    return "v" + std::to_string(index);
}

std::optional<std::size_t> parse_version_tag(const std::string& tag) {
    if (tag.size() < 2 || tag[0] != 'v') {
        return std::nullopt;
    }
    std::size_t value = 0;
    for (std::size_t i = 1; i < tag.size(); ++i) {
        if (tag[i] < '0' || tag[i] > '9') {
            return std::nullopt;
        }
        value = value * 10 + static_cast<std::size_t>(tag[i] - '0');
    }
    return value;
}

// Canonical encoding hashed for the digest chain: the full entry object
// minus the "digest" member, compact dump with sorted keys.
json entry_to_json_without_digest(const JournalEntry& entry) {
    json out = change_set_to_json(entry.set);
    out["committed_at"] = entry.committed_at.to_string();
    out["prev_digest"] = entry.prev_digest;
    return out;
}

std::string entry_line(const JournalEntry& entry) {
    json out = entry_to_json_without_digest(entry);
    out["digest"] = entry.digest;
    return out.dump();
}

JournalEntry entry_from_line(const std::string& line, std::size_t line_number) {
    json value;
    try {
        value = json::parse(line);
    } catch (const json::parse_error& error) {
        throw JournalError(JournalErrorKind::CorruptJournal,
                           "entry line " + std::to_string(line_number) +
                               " is not valid JSON: " + error.what());
    }
    try {
        JournalEntry entry;
        entry.set = change_set_from_json(value);
        if (!value.contains("committed_at") || !value["committed_at"].is_string() ||
            !value.contains("prev_digest") || !value["prev_digest"].is_string() ||
            !value.contains("digest") || !value["digest"].is_string()) {
            throw CodecError("missing committed_at, prev_digest or digest");
        }
        const auto committed = Timestamp::parse(value["committed_at"].get<std::string>());
        if (!committed) {
            throw CodecError("committed_at is not an RFC 3339 UTC instant");
        }
        entry.committed_at = *committed;
        entry.prev_digest = value["prev_digest"].get<std::string>();
        entry.digest = value["digest"].get<std::string>();
        return entry;
    } catch (const CodecError& error) {
        throw JournalError(JournalErrorKind::CorruptJournal,
                           "entry line " + std::to_string(line_number) + ": " + error.what());
    }
}

std::string render_acl(const std::set<std::string>& acl) {
    std::string out;
    for (const auto& agent : acl) {
        out += agent;
        out += '\n';
    }
    return out;
}

std::set<std::string> parse_acl(const std::string& text) {
    std::set<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            out.insert(line);
        }
    }
    return out;
}

bool flow_references(const FlowChange& change, const std::string& element_id) {
    if (const auto* added = std::get_if<FlowAdded>(&change)) {
        return added->snapshot.source_ref == element_id ||
               added->snapshot.target_ref == element_id;
    }
    if (const auto* removed = std::get_if<FlowRemoved>(&change)) {
        return removed->snapshot.source_ref == element_id ||
               removed->snapshot.target_ref == element_id;
    }
    const auto& modified = std::get<FlowModified>(change);
    if (modified.attribute == FlowAttribute::SourceRef ||
        modified.attribute == FlowAttribute::TargetRef) {
        return modified.old_value == element_id || modified.new_value == element_id;
    }
    return false;
}

bool references(const ConstructChange& change, const std::string& element_id) {
    if (element_id_of(change) == element_id) {
        return true;
    }
    if (const auto* flow = std::get_if<SequenceFlowChange>(&change)) {
        return flow_references(flow->change, element_id);
    }
    return false;
}

}  // namespace

Journal Journal::init(const fs::path& directory, const ProcessModel& baseline,
                      const std::set<std::string>& acl, const BpmnDialect& dialect) {
    require_valid(baseline);
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) {
        throw JournalError(JournalErrorKind::Io,
                           "cannot create " + directory.string() + ": " + ec.message());
    }
    if (fs::exists(directory / kEntriesFile)) {
        throw JournalError(JournalErrorKind::Io,
                           directory.string() + " already contains a journal");
    }

    Journal journal;
    journal.directory_ = directory;
    journal.dialect_ = dialect;
    journal.baseline_ = normalized(baseline);
    journal.baseline_bytes_ = serialize_bpmn(journal.baseline_, dialect);
    journal.acl_ = acl;
    journal.head_ = journal.baseline_;

    DirectoryLock lock(directory);
    write_file_atomic(directory / kBaselineFile, journal.baseline_bytes_);
    write_file_atomic(directory / kAclFile, render_acl(acl));
    write_file_atomic(directory / kEntriesFile, "");
    write_file_atomic(directory / kHeadDigestFile,
                      sha256_hex(journal.baseline_bytes_) + "\n");
    return journal;
}

Journal Journal::open(const fs::path& directory, const BpmnDialect& dialect) {
    if (!fs::exists(directory / kEntriesFile) || !fs::exists(directory / kBaselineFile)) {
        throw JournalError(JournalErrorKind::Io,
                           directory.string() + " is not a journal directory");
    }
    Journal journal;
    journal.directory_ = directory;
    journal.dialect_ = dialect;
    journal.baseline_bytes_ = read_file(directory / kBaselineFile);
    journal.baseline_ = parse_bpmn(journal.baseline_bytes_, dialect);
    journal.acl_ = parse_acl(read_file(directory / kAclFile));
    journal.reload_entries();
    return journal;
}

void Journal::reload_entries() {
    entries_.clear();
    const std::string text = read_file(directory_ / kEntriesFile);
    std::istringstream in(text);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) {
            continue;
        }
        entries_.push_back(entry_from_line(line, line_number));
    }
}

std::string Journal::baseline_digest() const {
    return sha256_hex(baseline_bytes_);
}

std::string Journal::head_version() const {
    return version_tag(entries_.size());
}

const ProcessModel& Journal::head_model() const {
    if (!head_) {
        std::vector<ChangeSet> sets;
        sets.reserve(entries_.size());
        for (const auto& entry : entries_) {
            sets.push_back(entry.set);
        }
        head_ = replay(sets, baseline_);
    }
    return *head_;
}

void Journal::commit(const ChangeSet& set, std::shared_ptr<Clock> clock) {
    DirectoryLock lock(directory_);
    // Re-read under the lock; another process may have committed since open.
    reload_entries();
    head_.reset();

    const std::string head_tag = head_version();
    if (!set.base_version.empty() && set.base_version != head_tag) {
        throw JournalError(JournalErrorKind::VersionMismatch,
                           "set is based on '" + set.base_version + "' but the head is '" +
                               head_tag + "'");
    }

    // The journal owns record validity and record-id uniqueness; a no-op or
    // malformed record must never become history.
    std::set<std::string> known_ids;
    for (const auto& entry : entries_) {
        for (const auto& record : entry.set.records) {
            known_ids.insert(record.record_id);
        }
    }
    std::vector<std::string> problems;
    for (const auto& record : set.records) {
        for (const auto& violation : validate_record(record)) {
            problems.push_back("record '" + record.record_id + "': " +
                               std::string(to_string(violation.kind)) + " (" +
                               violation.detail + ")");
        }
        if (!known_ids.insert(record.record_id).second) {
            problems.push_back("record id '" + record.record_id +
                               "' already exists in the journal");
        }
    }
    if (!problems.empty()) {
        throw InvalidModelError(std::move(problems));
    }

    ChangeSet stored = set;
    stored.base_version = head_tag;
    stored.result_version = version_tag(entries_.size() + 1);

    const ProcessModel new_head = apply(stored, head_model());

    JournalEntry entry;
    entry.set = std::move(stored);
    const auto effective_clock = clock ? clock : system_clock();
    entry.committed_at = effective_clock->now();
    entry.prev_digest = entries_.empty() ? baseline_digest() : entries_.back().digest;
    entry.digest = sha256_hex(entry_to_json_without_digest(entry).dump());

    persist_entry(entry, new_head);
    entries_.push_back(std::move(entry));
    head_ = new_head;
}

void Journal::persist_entry(const JournalEntry& entry, const ProcessModel& new_head) {
    std::string content;
    for (const auto& existing : entries_) {
        content += entry_line(existing);
        content += '\n';
    }
    content += entry_line(entry);
    content += '\n';
    write_file_atomic(directory_ / kEntriesFile, content);
    write_file_atomic(directory_ / kHeadDigestFile,
                      sha256_hex(serialize_bpmn(new_head, dialect_)) + "\n");
}

ProcessModel Journal::version(const std::string& tag) const {
    const auto index = parse_version_tag(tag);
    if (!index || *index > entries_.size()) {
        throw JournalError(JournalErrorKind::UnknownVersion,
                           "no version '" + tag + "' (head is '" + head_version() + "')");
    }
    if (*index == entries_.size()) {
        return head_model();  // cache; equals the replay below by construction
    }
    std::vector<ChangeSet> sets;
    sets.reserve(*index);
    for (std::size_t i = 0; i < *index; ++i) {
        sets.push_back(entries_[i].set);
    }
    return replay(sets, baseline_);
}

std::vector<LogRow> Journal::log() const {
    std::vector<LogRow> rows;
    rows.reserve(entries_.size());
    for (const auto& entry : entries_) {
        LogRow row;
        row.version = entry.set.result_version;
        row.set_id = entry.set.set_id;
        row.committed_at = entry.committed_at;
        row.record_count = entry.set.records.size();
        if (entry.set.records.empty()) {
            row.agent = "-";
            row.cause = "-";
        } else {
            row.agent = entry.set.records.front().provenance.agent_name;
            row.cause = entry.set.records.front().provenance.cause;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

TraceResult Journal::trace(const std::string& element_id) const {
    TraceResult result;
    result.element_id = element_id;
    for (const auto& entry : entries_) {
        for (const auto& record : entry.set.records) {
            if (!references(record.change, element_id)) {
                continue;
            }
            TraceHit hit;
            hit.version = entry.set.result_version;
            hit.record_id = record.record_id;
            hit.category = category_of(record.change);
            if (const auto* task = std::get_if<TaskLevelChange>(&record.change)) {
                hit.task_kind = task->change.task_kind;
            }
            hit.provenance = record.provenance;
            hit.timestamp = record.timestamp;
            result.hits.push_back(std::move(hit));
        }
    }
    return result;
}

std::vector<AuditFinding> Journal::verify() const {
    std::vector<AuditFinding> findings;

    // Version chain and timestamp ordering.
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& entry = entries_[i];
        if (entry.set.base_version != version_tag(i) ||
            entry.set.result_version != version_tag(i + 1)) {
            findings.push_back(
                {FindingKind::ChainBroken, entry.set.set_id,
                 "entry " + std::to_string(i) + " has tags '" + entry.set.base_version +
                     "' -> '" + entry.set.result_version + "', expected '" + version_tag(i) +
                     "' -> '" + version_tag(i + 1) + "'"});
        }
        if (i > 0 && entry.committed_at < entries_[i - 1].committed_at) {
            findings.push_back({FindingKind::ChainBroken, entry.set.set_id,
                                "entry " + std::to_string(i) +
                                    " was committed before its predecessor"});
        }
    }

    // Digest chain.
    std::string previous = baseline_digest();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& entry = entries_[i];
        if (entry.prev_digest != previous) {
            findings.push_back({FindingKind::ReplayMismatch, entry.set.set_id,
                                "entry " + std::to_string(i) +
                                    " does not link to its predecessor's digest"});
        }
        const std::string recomputed =
            sha256_hex(entry_to_json_without_digest(entry).dump());
        if (entry.digest != recomputed) {
            findings.push_back({FindingKind::ReplayMismatch, entry.set.set_id,
                                "entry " + std::to_string(i) +
                                    " digest does not match its content"});
        }
        previous = entry.digest;
    }

    // ACL audit: recorded, never rejected, flagged here.
    for (const auto& entry : entries_) {
        for (const auto& record : entry.set.records) {
            if (acl_.count(record.provenance.agent_name) == 0) {
                findings.push_back({FindingKind::UnauthorizedAgent, record.record_id,
                                    "agent '" + record.provenance.agent_name +
                                        "' is not in the ACL"});
            }
        }
    }

    // Cached head digest vs. full replay.
    const fs::path head_path = directory_ / kHeadDigestFile;
    if (fs::exists(head_path)) {
        std::string stored = read_file(head_path);
        while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) {
            stored.pop_back();
        }
        try {
            std::vector<ChangeSet> sets;
            sets.reserve(entries_.size());
            for (const auto& entry : entries_) {
                sets.push_back(entry.set);
            }
            const ProcessModel replayed = replay(sets, baseline_);
            const std::string recomputed = sha256_hex(serialize_bpmn(replayed, dialect_));
            if (recomputed != stored) {
                findings.push_back({FindingKind::ReplayMismatch, kHeadDigestFile,
                                    "stored head digest does not match the replayed model"});
            }
        } catch (const Error& error) {
            findings.push_back({FindingKind::ReplayMismatch, kHeadDigestFile,
                                std::string("replay failed: ") + error.what()});
        }
    }

    return findings;
}

void Journal::revert_to(const std::string& tag, const Provenance& provenance,
                        std::shared_ptr<Clock> clock) {
    const auto index = parse_version_tag(tag);
    if (!index || *index > entries_.size()) {
        throw JournalError(JournalErrorKind::UnknownVersion,
                           "no version '" + tag + "' (head is '" + head_version() + "')");
    }
    if (*index == entries_.size()) {
        throw JournalError(JournalErrorKind::NothingToRevert,
                           "'" + tag + "' is already the head version");
    }

    const auto effective_clock = clock ? clock : system_clock();
    const Timestamp at = effective_clock->now();
    const auto fixed = std::make_shared<FixedClock>(at);

    ChangeSet compensating;
    {
        const std::string chain_tail =
            entries_.empty() ? baseline_digest() : entries_.back().digest;
        UlidGenerator ids(std::stoull(
            sha256_hex(at.to_string() + "\nrevert\n" + tag + "\n" + chain_tail).substr(0, 16),
            nullptr, 16));
        compensating.set_id = ids.next(at);
    }
    compensating.base_version = head_version();
    for (std::size_t i = entries_.size(); i > *index; --i) {
        InvertOptions options;
        options.clock = fixed;
        options.provenance = provenance;
        const ChangeSet inverse = invert(entries_[i - 1].set, options);
        compensating.records.insert(compensating.records.end(), inverse.records.begin(),
                                    inverse.records.end());
    }
    commit(compensating, effective_clock);
}

}  // namespace bpcm
