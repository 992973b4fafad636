#include <doctest.h>

#include "bpcm/diff.hpp"
#include "bpcm/errors.hpp"
#include "bpcm/patch.hpp"
#include "bpcm/record_json.hpp"
#include "support/fixtures.hpp"
#include "support/model_gen.hpp"

using namespace bpcm;

namespace {

const Timestamp kFixedInstant = *Timestamp::parse("2024-07-01T12:00:00Z");

ChangeSet diff_fixed(const ProcessModel& old_model, const ProcessModel& new_model) {
    DiffRequest request;
    request.old_model = old_model;
    request.new_model = new_model;
    request.provenance = test::test_provenance();
    request.clock = std::make_shared<FixedClock>(kFixedInstant);
    return diff(request);
}

// Canonical group index of a record, for the ordering property.
int group_of(const ConstructChange& change) {
    if (const auto* flow = std::get_if<SequenceFlowChange>(&change)) {
        if (std::holds_alternative<FlowRemoved>(flow->change)) return 0;
        if (std::holds_alternative<FlowAdded>(flow->change)) return 3;
        return 5;
    }
    if (std::holds_alternative<DeclarationChange>(change)) return 6;
    if (const auto* task = std::get_if<TaskLevelChange>(&change)) {
        if (std::holds_alternative<DeleteNode>(task->change.op)) return 1;
        if (std::holds_alternative<AddNode>(task->change.op)) return 2;
        return 4;
    }
    return std::visit(
        [&](const auto& alternative) -> int {
            using T = std::decay_t<decltype(alternative)>;
            if constexpr (std::is_same_v<T, TaskLevelChange> ||
                          std::is_same_v<T, SequenceFlowChange> ||
                          std::is_same_v<T, DeclarationChange>) {
                return -1;
            } else {
                const GenericChange& generic = alternative.change;
                if (std::holds_alternative<GenericRemoved>(generic.op)) return 1;
                if (std::holds_alternative<GenericAdded>(generic.op)) return 2;
                return 4;
            }
        },
        change);
}

}  // namespace

TEST_CASE("diff of a model with itself is empty") {
    const ProcessModel fixture = test::create_quote_fixture();
    CHECK(diff_fixed(fixture, fixture).records.empty());

    test::Engine rng(7);
    for (int i = 0; i < 25; ++i) {
        const ProcessModel model = test::random_model(rng, 20);
        CHECK(diff_fixed(model, model).records.empty());
    }
}

TEST_CASE("an assignee replacement yields exactly one typed record") {
    const ProcessModel fixture = test::create_quote_fixture();
    ProcessModel changed = fixture;
    std::get<UserTaskDetail>(changed.nodes.at("ut1").detail).assignee = "bob";

    const ChangeSet set = diff_fixed(fixture, changed);
    REQUIRE(set.records.size() == 1);
    const auto& task = std::get<TaskLevelChange>(set.records[0].change).change;
    CHECK(task.task_kind == NodeKind::UserTask);
    CHECK(task.element_id == "ut1");
    const auto& modification =
        std::get<ModifyUserTask>(task.op).modification;
    const auto& assignee = std::get<AssigneeChange>(modification);
    CHECK(assignee.old_value == "alice");
    CHECK(assignee.new_value == "bob");
}

TEST_CASE("a target shift with the same call kind is one CallTypeChange") {
    const ProcessModel fixture = test::create_quote_fixture();
    ProcessModel changed = fixture;
    std::get<JavaServiceTaskDetail>(changed.nodes.at("st1").detail).target =
        "com.acme.RegisterDemandV2";

    const ChangeSet set = diff_fixed(fixture, changed);
    REQUIRE(set.records.size() == 1);
    const auto& task = std::get<TaskLevelChange>(set.records[0].change).change;
    const auto& call = std::get<CallTypeChange>(
        std::get<ModifyJavaServiceTask>(task.op).modification);
    CHECK(call.old_call == CallType::JavaClass);
    CHECK(call.old_target == "com.acme.RegisterDemand");
    CHECK(call.new_call == CallType::JavaClass);
    CHECK(call.new_target == "com.acme.RegisterDemandV2");
}

TEST_CASE("deleting a node with its flows keeps the canonical order") {
    const ProcessModel fixture = test::create_quote_fixture();
    ProcessModel changed = fixture;
    changed.nodes.erase("st1");
    changed.flows.erase("f2");
    changed.flows.erase("f3");
    changed.flows.emplace("f2p",
                          SequenceFlow{"f2p", std::nullopt, "ut1", "end1", std::nullopt});

    const ChangeSet set = diff_fixed(fixture, changed);
    REQUIRE(set.records.size() == 4);
    CHECK(std::get<FlowRemoved>(
              std::get<SequenceFlowChange>(set.records[0].change).change).snapshot.id == "f2");
    CHECK(std::get<FlowRemoved>(
              std::get<SequenceFlowChange>(set.records[1].change).change).snapshot.id == "f3");
    const auto& deleted = std::get<TaskLevelChange>(set.records[2].change).change;
    CHECK(deleted.element_id == "st1");
    CHECK(std::holds_alternative<DeleteNode>(deleted.op));
    CHECK(std::get<FlowAdded>(
              std::get<SequenceFlowChange>(set.records[3].change).change).snapshot.id == "f2p");

    CHECK(model_equals(apply(set, fixture), changed));
}

TEST_CASE("field_diff_user_task walks fields in the documented order") {
    UserTaskDetail base;
    base.assignee = "alice";
    base.description = "Quote entry";

    SUBCASE("setting an absent due date") {
        UserTaskDetail changed = base;
        changed.due_date = "2024-07-01";
        const auto modifications = field_diff_user_task(base, changed);
        REQUIRE(modifications.size() == 1);
        const auto& due = std::get<DueDateChange>(modifications[0]);
        CHECK_FALSE(due.old_value.has_value());
        CHECK(due.new_value == "2024-07-01");
    }

    SUBCASE("identical details yield nothing") {
        CHECK(field_diff_user_task(base, base).empty());
    }

    SUBCASE("assignee and description change in fixed order") {
        UserTaskDetail changed = base;
        changed.assignee = "bob";
        changed.description = "Capture quotation";
        const auto modifications = field_diff_user_task(base, changed);
        REQUIRE(modifications.size() == 2);
        CHECK(std::holds_alternative<AssigneeChange>(modifications[0]));
        CHECK(std::holds_alternative<DescriptionChange>(modifications[1]));
    }
}

TEST_CASE("single and double field perturbations produce one record per field") {
    UserTaskDetail base;
    base.assignee = "alice";
    base.candidate_users = {"carol"};
    base.candidate_groups = {"sales"};
    base.due_date = "2024-06-01";
    base.description = "Quote entry";
    base.form_key = "form:quote";

    const auto perturb = [&](int field) {
        UserTaskDetail out = base;
        switch (field) {
            case 0: out.assignee = "bob"; break;
            case 1: out.due_date = "2024-09-01"; break;
            case 2: out.description = "changed"; break;
            case 3: out.candidate_users = {"dave"}; break;
            case 4: out.candidate_groups = {"ops"}; break;
            default: out.form_key = "form:other"; break;
        }
        return out;
    };
    const auto field_index = [](const UserTaskModification& modification) {
        if (std::holds_alternative<AssigneeChange>(modification)) return 0;
        if (std::holds_alternative<DueDateChange>(modification)) return 1;
        if (std::holds_alternative<DescriptionChange>(modification)) return 2;
        if (std::holds_alternative<CandidateUsersChange>(modification)) return 3;
        if (std::holds_alternative<CandidateGroupsChange>(modification)) return 4;
        return 5;
    };

    for (int i = 0; i < 6; ++i) {
        const auto single = field_diff_user_task(base, perturb(i));
        REQUIRE(single.size() == 1);
        CHECK(field_index(single[0]) == i);
        for (int j = i + 1; j < 6; ++j) {
            UserTaskDetail both = perturb(i);
            switch (j) {
                case 1: both.due_date = "2024-09-01"; break;
                case 2: both.description = "changed"; break;
                case 3: both.candidate_users = {"dave"}; break;
                case 4: both.candidate_groups = {"ops"}; break;
                default: both.form_key = "form:other"; break;
            }
            const auto pair = field_diff_user_task(base, both);
            REQUIRE(pair.size() == 2);
            CHECK(field_index(pair[0]) == i);
            CHECK(field_index(pair[1]) == j);
        }
    }
}

TEST_CASE("field_diff_service_task compares injections per field name") {
    JavaServiceTaskDetail base;
    base.call_type = CallType::JavaClass;
    base.target = "com.acme.Service";
    base.field_injections.push_back({"endpoint", ValueKind::StringValue, "http://a"});

    SUBCASE("a removed injection") {
        JavaServiceTaskDetail changed = base;
        changed.field_injections.clear();
        const auto modifications = field_diff_service_task(base, changed);
        REQUIRE(modifications.size() == 1);
        const auto& removed = std::get<FieldInjectionRemoved>(modifications[0]);
        CHECK(removed.injection ==
              FieldInjection{"endpoint", ValueKind::StringValue, "http://a"});
    }

    SUBCASE("a call kind change to a delegate expression") {
        JavaServiceTaskDetail changed = base;
        changed.call_type = CallType::DelegateExpression;
        changed.target = "${registerDemandDelegate}";
        const auto modifications = field_diff_service_task(base, changed);
        REQUIRE(modifications.size() == 1);
        const auto& call = std::get<CallTypeChange>(modifications[0]);
        CHECK(call.old_call == CallType::JavaClass);
        CHECK(call.new_call == CallType::DelegateExpression);
        CHECK(call.new_target == "${registerDemandDelegate}");
    }

    SUBCASE("identical details yield nothing") {
        CHECK(field_diff_service_task(base, base).empty());
    }

    SUBCASE("same-name injections with different values are one modification") {
        JavaServiceTaskDetail changed = base;
        changed.field_injections[0] = {"endpoint", ValueKind::ExpressionValue, "${url}"};
        const auto modifications = field_diff_service_task(base, changed);
        REQUIRE(modifications.size() == 1);
        const auto& modified = std::get<FieldInjectionModified>(modifications[0]);
        CHECK(modified.old_kind == ValueKind::StringValue);
        CHECK(modified.new_kind == ValueKind::ExpressionValue);
    }

    SUBCASE("injection records are ordered by field name") {
        JavaServiceTaskDetail changed = base;
        changed.field_injections.push_back({"aaa", ValueKind::StringValue, "1"});
        changed.field_injections.push_back({"zzz", ValueKind::StringValue, "2"});
        changed.result_variable = "out";
        const auto modifications = field_diff_service_task(base, changed);
        REQUIRE(modifications.size() == 3);
        CHECK(std::get<FieldInjectionAdded>(modifications[0]).injection.field_name == "aaa");
        CHECK(std::get<FieldInjectionAdded>(modifications[1]).injection.field_name == "zzz");
        CHECK(std::holds_alternative<ResultVariableChange>(modifications[2]));
    }
}

TEST_CASE("diff output is deterministic under a fixed clock") {
    const ProcessModel fixture = test::create_quote_fixture();
    test::Engine rng(99);
    const ProcessModel target = test::mutate(rng, fixture, 5);
    const std::string once = change_set_to_line(diff_fixed(fixture, target));
    const std::string twice = change_set_to_line(diff_fixed(fixture, target));
    CHECK(once == twice);
}

TEST_CASE("all records in one diff share one timestamp") {
    const ProcessModel fixture = test::create_quote_fixture();
    test::Engine rng(3);
    const ProcessModel target = test::mutate(rng, fixture, 6);
    const ChangeSet set = diff_fixed(fixture, target);
    for (const auto& record : set.records) {
        CHECK(record.timestamp == kFixedInstant);
    }
}

TEST_CASE("diff rejects invalid models and empty provenance") {
    const ProcessModel fixture = test::create_quote_fixture();
    ProcessModel broken = fixture;
    broken.flows.at("f1").target_ref = "ghost";
    DiffRequest request;
    request.old_model = broken;
    request.new_model = fixture;
    request.provenance = test::test_provenance();
    CHECK_THROWS_AS(diff(request), InvalidModelError);

    request.old_model = fixture;
    request.provenance.agent_name = "";
    CHECK_THROWS_AS(diff(request), InvalidModelError);
}

TEST_CASE("records appear in canonical group order on generated pairs") {
    test::Engine rng(1234);
    for (int i = 0; i < 60; ++i) {
        const ProcessModel old_model = test::random_model(rng, 15);
        const ProcessModel new_model = test::mutate(rng, old_model, 1 + test::below(rng, 8));
        const ChangeSet set = diff_fixed(old_model, new_model);
        int previous = -1;
        for (const auto& record : set.records) {
            const int group = group_of(record.change);
            REQUIRE(group >= previous);
            previous = group;
            REQUIRE(validate_record(record).empty());
        }
        CHECK(model_equals(apply(set, old_model), new_model));
    }
}

TEST_CASE("a kind change under the same id becomes delete plus add") {
    const ProcessModel fixture = test::create_quote_fixture();
    ProcessModel changed = fixture;
    FlowNode& node = changed.nodes.at("ut1");
    node.kind = NodeKind::ManualTask;
    node.detail = GenericDetail{};

    const ChangeSet set = diff_fixed(fixture, changed);
    // Flows f1 and f2 touch ut1, so they are removed and re-added around the
    // delete/add pair to keep every intermediate model consistent.
    REQUIRE(set.records.size() == 6);
    CHECK(std::holds_alternative<FlowRemoved>(
        std::get<SequenceFlowChange>(set.records[0].change).change));
    CHECK(std::holds_alternative<FlowRemoved>(
        std::get<SequenceFlowChange>(set.records[1].change).change));
    CHECK(std::holds_alternative<DeleteNode>(
        std::get<TaskLevelChange>(set.records[2].change).change.op));
    CHECK(std::holds_alternative<AddNode>(
        std::get<TaskLevelChange>(set.records[3].change).change.op));
    CHECK(model_equals(apply(set, fixture), changed));
}

TEST_CASE("no record of a diff can be dropped without breaking apply") {
    test::Engine rng(777);
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
        const ProcessModel old_model = test::random_model(rng, 8);
        const ProcessModel new_model = test::mutate(rng, old_model, 1 + test::below(rng, 4));
        const ChangeSet set = diff_fixed(old_model, new_model);
        if (set.records.empty() || set.records.size() > 12) {
            continue;
        }
        ++checked;
        for (std::size_t drop = 0; drop < set.records.size(); ++drop) {
            ChangeSet pruned = set;
            pruned.records.erase(pruned.records.begin() + static_cast<std::ptrdiff_t>(drop));
            bool still_correct = false;
            try {
                still_correct = model_equals(apply(pruned, old_model), new_model);
            } catch (const ConflictError&) {
                still_correct = false;
            }
            REQUIRE_FALSE(still_correct);
        }
    }
    CHECK(checked > 10);
}

TEST_CASE("a flow retargeted away from a deleted node is split into remove/add") {
    const ProcessModel fixture = test::create_quote_fixture();
    // st1 goes away and f2 survives by pointing at end1 instead.
    ProcessModel changed = fixture;
    changed.nodes.erase("st1");
    changed.flows.erase("f3");
    changed.flows.at("f2").target_ref = "end1";

    const ChangeSet set = diff_fixed(fixture, changed);
    bool f2_removed = false;
    bool f2_added = false;
    for (const auto& record : set.records) {
        if (const auto* flow = std::get_if<SequenceFlowChange>(&record.change)) {
            if (const auto* removed = std::get_if<FlowRemoved>(&flow->change)) {
                f2_removed = f2_removed || removed->snapshot.id == "f2";
            }
            if (const auto* added = std::get_if<FlowAdded>(&flow->change)) {
                f2_added = f2_added || added->snapshot.id == "f2";
            }
            CHECK_FALSE(std::holds_alternative<FlowModified>(flow->change));
        }
    }
    CHECK(f2_removed);
    CHECK(f2_added);
    CHECK(model_equals(apply(set, fixture), changed));
}

TEST_CASE("a flow retargeted to a freshly added node stays a modification") {
    const ProcessModel fixture = test::create_quote_fixture();
    ProcessModel changed = fixture;
    changed.nodes.emplace("review1", FlowNode{"review1", std::string("Review Quote"),
                                              NodeKind::ManualTask, GenericDetail{}});
    changed.flows.at("f3").target_ref = "review1";

    const ChangeSet set = diff_fixed(fixture, changed);
    bool f3_modified = false;
    for (const auto& record : set.records) {
        if (const auto* flow = std::get_if<SequenceFlowChange>(&record.change)) {
            if (const auto* modified = std::get_if<FlowModified>(&flow->change)) {
                f3_modified = f3_modified || (modified->flow_id == "f3" &&
                                              modified->attribute == FlowAttribute::TargetRef);
            }
        }
    }
    CHECK(f3_modified);
    CHECK(model_equals(apply(set, fixture), changed));
}

TEST_CASE("process-level changes are declaration records") {
    const ProcessModel fixture = test::create_quote_fixture();
    ProcessModel changed = fixture;
    changed.process_name = "Create Quote v2";
    const ChangeSet set = diff_fixed(fixture, changed);
    REQUIRE(set.records.size() == 1);
    const auto& declaration = std::get<DeclarationChange>(set.records[0].change);
    CHECK(declaration.change.element_id == "createQuote");
    const auto& modified = std::get<GenericModified>(declaration.change.op);
    CHECK(modified.attribute == "name");
    CHECK(modified.old_value == "Create Quote");
    CHECK(modified.new_value == "Create Quote v2");
    CHECK(model_equals(apply(set, fixture), changed));
}
