#include <doctest.h>

#include "bpcm/change.hpp"
#include "support/fixtures.hpp"

using namespace bpcm;

namespace {

ChangeRecord make_record(ConstructChange change) {
    return ChangeRecord{"01TESTRECORD", Timestamp{1719835200}, test::test_provenance(),
                        std::move(change)};
}

}  // namespace

TEST_CASE("classify maps node kinds onto the nine categories") {
    CHECK(classify(NodeKind::UserTask) == ChangeCategory::TaskLevel);
    CHECK(classify(NodeKind::ExclusiveGateway) == ChangeCategory::Gateways);
    CHECK(classify(NodeKind::StartEvent) == ChangeCategory::Event);
    CHECK(classify(NodeKind::DataObject) == ChangeCategory::DataObject);

    int task_kinds = 0;
    for (const NodeKind kind : kAllNodeKinds) {
        const ChangeCategory category = classify(kind);
        if (is_task_kind(kind)) {
            ++task_kinds;
            CHECK(category == ChangeCategory::TaskLevel);
        } else {
            CHECK(category != ChangeCategory::TaskLevel);
        }
    }
    CHECK(task_kinds == 11);
}

TEST_CASE("validate_record flags an empty agent name") {
    ChangeRecord record = make_record(TaskLevelChange{
        TaskChange{NodeKind::UserTask, "ut1",
                   ModifyUserTask{AssigneeChange{std::string("alice"), std::string("bob")}}}});
    record.provenance.agent_name = "";
    const auto violations = validate_record(record);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == ViolationKind::EmptyAgentName);
}

TEST_CASE("validate_record flags an empty cause") {
    ChangeRecord record = make_record(TaskLevelChange{
        TaskChange{NodeKind::UserTask, "ut1",
                   ModifyUserTask{AssigneeChange{std::string("alice"), std::string("bob")}}}});
    record.provenance.cause = "";
    const auto violations = validate_record(record);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == ViolationKind::EmptyCause);
}

TEST_CASE("a no-op modification is a violation") {
    const ChangeRecord record = make_record(TaskLevelChange{TaskChange{
        NodeKind::UserTask, "ut1",
        ModifyUserTask{AssigneeChange{std::string("alice"), std::string("alice")}}}});
    const auto violations = validate_record(record);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == ViolationKind::NoOpModification);
}

TEST_CASE("a well-formed assignee change validates cleanly") {
    const ChangeRecord record = make_record(TaskLevelChange{
        TaskChange{NodeKind::UserTask, "ut1",
                   ModifyUserTask{AssigneeChange{std::string("alice"), std::string("bob")}}}});
    CHECK(validate_record(record).empty());
}

TEST_CASE("modification payloads must match the task kind") {
    const ChangeRecord wrong_kind = make_record(TaskLevelChange{
        TaskChange{NodeKind::JavaServiceTask, "st1",
                   ModifyUserTask{AssigneeChange{std::string("a"), std::string("b")}}}});
    bool found = false;
    for (const auto& violation : validate_record(wrong_kind)) {
        found = found || violation.kind == ViolationKind::KindPayloadMismatch;
    }
    CHECK(found);
}

TEST_CASE("snapshots must agree with the change's element and kind") {
    FlowNode snapshot{"other", std::nullopt, NodeKind::UserTask, UserTaskDetail{}};
    const ChangeRecord record = make_record(
        TaskLevelChange{TaskChange{NodeKind::UserTask, "ut1", AddNode{snapshot}}});
    bool found = false;
    for (const auto& violation : validate_record(record)) {
        found = found || violation.kind == ViolationKind::InvalidSnapshot;
    }
    CHECK(found);
}

TEST_CASE("call type changes must change the invocation") {
    const ChangeRecord noop = make_record(TaskLevelChange{TaskChange{
        NodeKind::JavaServiceTask, "st1",
        ModifyJavaServiceTask{CallTypeChange{CallType::JavaClass, "A", CallType::JavaClass,
                                             "A"}}}});
    REQUIRE(validate_record(noop).size() == 1);
    CHECK(validate_record(noop)[0].kind == ViolationKind::NoOpModification);

    // A target-only shift with the same call kind is a valid change.
    const ChangeRecord shift = make_record(TaskLevelChange{TaskChange{
        NodeKind::JavaServiceTask, "st1",
        ModifyJavaServiceTask{CallTypeChange{CallType::JavaClass, "A", CallType::JavaClass,
                                             "B"}}}});
    CHECK(validate_record(shift).empty());
}

TEST_CASE("every category and variant is constructible and classified once") {
    const FlowNode event_node{"ev", std::nullopt, NodeKind::StartEvent, GenericDetail{}};
    const GenericChange node_change{"ev", GenericAdded{event_node}};
    const GenericChange process_change{"p1",
                                       GenericModified{"name", std::string("a"),
                                                       std::string("b")}};
    const SequenceFlow flow{"f", std::nullopt, "a", "b", std::nullopt};

    const std::vector<ConstructChange> one_per_category = {
        DeclarationChange{process_change},
        ProcessInitializationChange{process_change},
        SequenceFlowChange{FlowAdded{flow}},
        TaskLevelChange{TaskChange{NodeKind::UserTask, "t",
                                   AddNode{FlowNode{"t", std::nullopt, NodeKind::UserTask,
                                                    UserTaskDetail{}}}}},
        CustomExtensionChange{process_change},
        DataObjectChange{GenericChange{
            "d", GenericAdded{FlowNode{"d", std::nullopt, NodeKind::DataObject,
                                       GenericDetail{}}}}},
        GatewaysChange{GenericChange{
            "g", GenericAdded{FlowNode{"g", std::nullopt, NodeKind::ExclusiveGateway,
                                       GenericDetail{}}}}},
        TransactionConcurrencyChange{process_change},
        EventChange{node_change},
    };
    REQUIRE(one_per_category.size() == 9);
    for (std::size_t i = 0; i < one_per_category.size(); ++i) {
        CHECK(category_of(one_per_category[i]) == kAllChangeCategories[i]);
    }
}

TEST_CASE("element ids are recoverable from every change shape") {
    const SequenceFlow flow{"f9", std::nullopt, "a", "b", std::nullopt};
    CHECK(element_id_of(SequenceFlowChange{FlowAdded{flow}}) == "f9");
    CHECK(element_id_of(SequenceFlowChange{FlowModified{
              "f9", FlowAttribute::Name, std::nullopt, std::string("x")}}) == "f9");
    CHECK(element_id_of(TaskLevelChange{TaskChange{
              NodeKind::UserTask, "ut1",
              RenameNode{std::nullopt, std::string("x")}}}) == "ut1");
    CHECK(element_id_of(DeclarationChange{GenericChange{
              "p1", GenericModified{"name", std::nullopt, std::string("x")}}}) == "p1");
}
