#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bpcm/diff.hpp"
#include "bpcm/errors.hpp"
#include "bpcm/journal.hpp"
#include "bpcm/patch.hpp"
#include "bpcm/record_json.hpp"
#include "support/fixtures.hpp"
#include "support/model_gen.hpp"

using namespace bpcm;
namespace fs = std::filesystem;

namespace {

const Timestamp kFixedInstant = *Timestamp::parse("2024-07-01T12:00:00Z");

std::shared_ptr<Clock> fixed_clock() {
    return std::make_shared<FixedClock>(kFixedInstant);
}

struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() /
               ("bpcm_test_" + name + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

ChangeSet diff_fixed(const ProcessModel& old_model, const ProcessModel& new_model,
                     const Provenance& provenance = test::test_provenance()) {
    DiffRequest request;
    request.old_model = old_model;
    request.new_model = new_model;
    request.provenance = provenance;
    request.clock = fixed_clock();
    return diff(request);
}

ProcessModel with_assignee(const ProcessModel& model, const std::string& assignee) {
    ProcessModel out = model;
    std::get<UserTaskDetail>(out.nodes.at("ut1").detail).assignee = assignee;
    return out;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

}  // namespace

TEST_CASE("init resolves v0 to the baseline and starts with an empty log") {
    TempDir dir("init");
    const ProcessModel fixture = test::create_quote_fixture();
    const Journal journal = Journal::init(dir.path, fixture, {"alice"});
    CHECK(model_equals(journal.version("v0"), fixture));
    CHECK(journal.head_version() == "v0");
    CHECK(journal.log().empty());
}

TEST_CASE("an empty ACL is valid and flags every commit") {
    TempDir dir("emptyacl");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {});
    journal.commit(diff_fixed(fixture, with_assignee(fixture, "bob")), fixed_clock());
    const auto findings = journal.verify();
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].kind == FindingKind::UnauthorizedAgent);
}

TEST_CASE("commit advances the head and applies the set") {
    TempDir dir("commit");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {"alice"});
    journal.commit(diff_fixed(fixture, with_assignee(fixture, "bob")), fixed_clock());

    CHECK(journal.head_version() == "v1");
    const ProcessModel v1 = journal.version("v1");
    CHECK(std::get<UserTaskDetail>(v1.nodes.at("ut1").detail).assignee == "bob");
}

TEST_CASE("commit rejects a set based on a version that is not the head") {
    TempDir dir("mismatch");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {"alice"});
    journal.commit(diff_fixed(fixture, with_assignee(fixture, "bob")), fixed_clock());

    ChangeSet stale = diff_fixed(fixture, with_assignee(fixture, "carol"));
    stale.base_version = "v0";
    try {
        journal.commit(stale, fixed_clock());
        FAIL("expected JournalError");
    } catch (const JournalError& error) {
        CHECK(error.kind() == JournalErrorKind::VersionMismatch);
    }
}

TEST_CASE("sequential commits are listed oldest first with their provenance") {
    TempDir dir("log");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {"alice"});
    const ProcessModel v1 = with_assignee(fixture, "bob");
    journal.commit(
        diff_fixed(fixture, v1, Provenance{"alice", "reassign workload", ""}), fixed_clock());
    journal.commit(diff_fixed(v1, with_assignee(fixture, "carol"),
                              Provenance{"alice", "second pass", ""}),
                   fixed_clock());

    const auto rows = journal.log();
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].version == "v1");
    CHECK(rows[0].cause == "reassign workload");
    CHECK(rows[1].version == "v2");
    CHECK(rows[1].cause == "second pass");
    CHECK(rows[0].committed_at <= rows[1].committed_at);
}

TEST_CASE("cached and recomputed head reads serialize identically") {
    TempDir dir("cache");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {"alice"});
    journal.commit(diff_fixed(fixture, with_assignee(fixture, "bob")), fixed_clock());

    const std::string cached = serialize_bpmn(journal.version("v1"));
    const Journal reopened = Journal::open(dir.path);
    const std::string recomputed = serialize_bpmn(reopened.version("v1"));
    CHECK(cached == recomputed);
}

TEST_CASE("unknown versions are reported") {
    TempDir dir("unknown");
    const Journal journal = Journal::init(dir.path, test::create_quote_fixture(), {"alice"});
    CHECK_THROWS_AS(journal.version("v9"), JournalError);
    CHECK_THROWS_AS(journal.version("abc"), JournalError);
}

TEST_CASE("trace lists record-level hits in version order") {
    TempDir dir("trace");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {"alice"});
    journal.commit(diff_fixed(fixture, with_assignee(fixture, "bob")), fixed_clock());

    const TraceResult hits = journal.trace("ut1");
    REQUIRE(hits.hits.size() == 1);
    CHECK(hits.hits[0].version == "v1");
    CHECK(hits.hits[0].category == ChangeCategory::TaskLevel);
    CHECK(hits.hits[0].task_kind == NodeKind::UserTask);
    CHECK(hits.hits[0].provenance.agent_name == "alice");

    CHECK(journal.trace("nonexistent").hits.empty());
}

TEST_CASE("trace of a deleted then re-added id lists the delete and the add") {
    TempDir dir("readd");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {"alice"});

    ProcessModel without = fixture;
    without.nodes.erase("st1");
    without.flows.erase("f2");
    without.flows.erase("f3");
    journal.commit(diff_fixed(fixture, without), fixed_clock());
    journal.commit(diff_fixed(without, fixture), fixed_clock());

    const TraceResult hits = journal.trace("st1");
    // Independent scan over the stored entry lines as the oracle.
    std::size_t scanned = 0;
    std::istringstream lines(slurp(dir.path / "entries.jsonl"));
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        const auto value = nlohmann::json::parse(line);
        for (const auto& record : value.at("records")) {
            const std::string dump = record.at("change").dump();
            if (dump.find("\"st1\"") != std::string::npos) {
                ++scanned;
            }
        }
    }
    CHECK(hits.hits.size() == scanned);

    bool saw_delete = false;
    bool saw_add = false;
    for (const auto& hit : hits.hits) {
        saw_delete = saw_delete || hit.version == "v1";
        saw_add = saw_add || hit.version == "v2";
    }
    CHECK(saw_delete);
    CHECK(saw_add);
}

TEST_CASE("verify is silent for a clean journal and names unauthorized agents") {
    TempDir dir("acl");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {"alice"});
    journal.commit(diff_fixed(fixture, with_assignee(fixture, "bob")), fixed_clock());
    CHECK(journal.verify().empty());

    journal.commit(diff_fixed(with_assignee(fixture, "bob"), with_assignee(fixture, "carol"),
                              Provenance{"mallory", "sneaky edit", ""}),
                   fixed_clock());
    const auto findings = journal.verify();
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].kind == FindingKind::UnauthorizedAgent);
    CHECK(findings[0].detail.find("mallory") != std::string::npos);
}

TEST_CASE("a hand-edited entry value triggers ReplayMismatch") {
    TempDir dir("tamper");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {"alice"});
    journal.commit(diff_fixed(fixture, with_assignee(fixture, "bob")), fixed_clock());

    const fs::path entries = dir.path / "entries.jsonl";
    std::string text = slurp(entries);
    const auto pos = text.find("\"old\":\"alice\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 13, "\"old\":\"alicx\"");
    std::ofstream(entries, std::ios::binary | std::ios::trunc) << text;

    const Journal reopened = Journal::open(dir.path);
    bool replay_mismatch = false;
    for (const auto& finding : reopened.verify()) {
        replay_mismatch = replay_mismatch || finding.kind == FindingKind::ReplayMismatch;
    }
    CHECK(replay_mismatch);
}

TEST_CASE("revert_to commits a compensating set and keeps history intact") {
    TempDir dir("revert");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {"alice"});
    const ProcessModel v1 = with_assignee(fixture, "bob");
    journal.commit(diff_fixed(fixture, v1), fixed_clock());
    journal.commit(diff_fixed(v1, with_assignee(fixture, "carol")), fixed_clock());

    journal.revert_to("v0", Provenance{"alice", "roll back bad edits", ""}, fixed_clock());
    CHECK(journal.head_version() == "v3");
    CHECK(serialize_bpmn(journal.version("v3")) == serialize_bpmn(journal.version("v0")));
    CHECK(journal.entries().size() == 3);

    CHECK_THROWS_AS(
        journal.revert_to("v3", Provenance{"alice", "again", ""}, fixed_clock()),
        JournalError);
}

TEST_CASE("reverting an unauthorized commit does not erase its audit trail") {
    TempDir dir("audittrail");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {"alice"});
    journal.commit(diff_fixed(fixture, with_assignee(fixture, "bob"),
                              Provenance{"mallory", "sneaky edit", ""}),
                   fixed_clock());
    journal.revert_to("v0", Provenance{"alice", "undo unauthorized change", ""},
                      fixed_clock());

    bool still_flagged = false;
    for (const auto& finding : journal.verify()) {
        still_flagged = still_flagged ||
                        (finding.kind == FindingKind::UnauthorizedAgent &&
                         finding.detail.find("mallory") != std::string::npos);
    }
    CHECK(still_flagged);
    CHECK(model_equals(journal.version(journal.head_version()), fixture));
}

TEST_CASE("deleting caches and replaying the journal reproduces the head") {
    TempDir dir("recovery");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {"alice"});
    ProcessModel current = fixture;
    test::Engine rng(31337);
    for (int i = 0; i < 8; ++i) {
        const ProcessModel next = test::mutate(rng, current, 1 + test::below(rng, 4));
        journal.commit(diff_fixed(current, next), fixed_clock());
        current = next;
    }
    const std::string head_before = serialize_bpmn(journal.version(journal.head_version()));

    fs::remove(dir.path / "head.digest");
    const Journal recovered = Journal::open(dir.path);
    CHECK(serialize_bpmn(recovered.version(recovered.head_version())) == head_before);
    CHECK(recovered.verify().empty());
}

TEST_CASE("the entries file only ever grows") {
    TempDir dir("appendonly");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {"alice"});
    const fs::path entries = dir.path / "entries.jsonl";

    std::uintmax_t previous = fs::file_size(entries);
    ProcessModel current = fixture;
    test::Engine rng(11);
    for (int i = 0; i < 5; ++i) {
        const ProcessModel next = test::mutate(rng, current, 2);
        journal.commit(diff_fixed(current, next), fixed_clock());
        current = next;
        const std::uintmax_t size = fs::file_size(entries);
        CHECK(size >= previous);
        previous = size;
    }
    journal.revert_to("v0", Provenance{"alice", "rollback", ""}, fixed_clock());
    CHECK(fs::file_size(entries) >= previous);
}

TEST_CASE("stored entries carry contiguous version tags") {
    TempDir dir("tags");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {"alice"});
    const ProcessModel v1 = with_assignee(fixture, "bob");
    journal.commit(diff_fixed(fixture, v1), fixed_clock());
    journal.commit(diff_fixed(v1, with_assignee(fixture, "carol")), fixed_clock());

    REQUIRE(journal.entries().size() == 2);
    CHECK(journal.entries()[0].set.base_version == "v0");
    CHECK(journal.entries()[0].set.result_version == "v1");
    CHECK(journal.entries()[1].set.base_version == "v1");
    CHECK(journal.entries()[1].set.result_version == "v2");
}

TEST_CASE("a conflicting set does not change the journal") {
    TempDir dir("conflict");
    const ProcessModel fixture = test::create_quote_fixture();
    Journal journal = Journal::init(dir.path, fixture, {"alice"});
    const ChangeSet stale =
        diff_fixed(with_assignee(fixture, "zed"), with_assignee(fixture, "bob"));
    CHECK_THROWS_AS(journal.commit(stale, fixed_clock()), ConflictError);
    CHECK(journal.head_version() == "v0");
    CHECK(journal.entries().empty());
    CHECK(journal.verify().empty());
}
