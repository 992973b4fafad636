#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bpcm {

// Supported BPMN 2.0 node kinds: three event shapes, the eleven task kinds,
// two gateways and data objects. Exactly one XML element form per kind (see
// docs/FORMATS.md).
enum class NodeKind {
    StartEvent,
    EndEvent,
    IntermediateEvent,
    UserTask,
    JavaServiceTask,
    WebServiceTask,
    ScriptTask,
    EmailTask,
    JavaReceiveTask,
    BusinessRuleTask,
    MuleTask,
    ManualTask,
    ShellTask,
    CamelTask,
    ExclusiveGateway,
    ParallelGateway,
    DataObject,
};

inline constexpr NodeKind kAllNodeKinds[] = {
    NodeKind::StartEvent,      NodeKind::EndEvent,       NodeKind::IntermediateEvent,
    NodeKind::UserTask,        NodeKind::JavaServiceTask, NodeKind::WebServiceTask,
    NodeKind::ScriptTask,      NodeKind::EmailTask,       NodeKind::JavaReceiveTask,
    NodeKind::BusinessRuleTask, NodeKind::MuleTask,       NodeKind::ManualTask,
    NodeKind::ShellTask,       NodeKind::CamelTask,       NodeKind::ExclusiveGateway,
    NodeKind::ParallelGateway, NodeKind::DataObject,
};

bool is_task_kind(NodeKind kind);
bool is_event_kind(NodeKind kind);
bool is_gateway_kind(NodeKind kind);

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view text);

// How a Java service task is wired to its implementation.
enum class CallType {
    JavaClass,
    DelegateExpression,
    Expression,
};

std::string_view to_string(CallType call);
std::optional<CallType> call_type_from_string(std::string_view text);

enum class ValueKind {
    StringValue,
    ExpressionValue,
};

std::string_view to_string(ValueKind kind);
std::optional<ValueKind> value_kind_from_string(std::string_view text);

// Named input value injected into a service task implementation.
struct FieldInjection {
    std::string field_name;
    ValueKind value_kind = ValueKind::StringValue;
    std::string value;

    friend bool operator==(const FieldInjection&, const FieldInjection&) = default;
};

struct UserTaskDetail {
    std::optional<std::string> assignee;
    std::set<std::string> candidate_users;
    std::set<std::string> candidate_groups;
    std::optional<std::string> due_date;     // ISO-8601 date or duration text
    std::optional<std::string> description;  // documentation body, verbatim
    std::optional<std::string> form_key;

    friend bool operator==(const UserTaskDetail&, const UserTaskDetail&) = default;
};

struct JavaServiceTaskDetail {
    CallType call_type = CallType::JavaClass;
    std::string target;  // class name, delegate expression or expression text
    std::vector<FieldInjection> field_injections;  // kept sorted by field_name
    std::optional<std::string> result_variable;

    friend bool operator==(const JavaServiceTaskDetail&, const JavaServiceTaskDetail&) = default;
};

// Attribute bag for node kinds whose internals are not modelled field by
// field. Keys never include "id" or "name" (those live on the FlowNode).
struct GenericDetail {
    std::map<std::string, std::string> attributes;

    friend bool operator==(const GenericDetail&, const GenericDetail&) = default;
};

using NodeDetail = std::variant<UserTaskDetail, JavaServiceTaskDetail, GenericDetail>;

struct FlowNode {
    std::string id;
    std::optional<std::string> name;
    NodeKind kind = NodeKind::StartEvent;
    NodeDetail detail = GenericDetail{};

    friend bool operator==(const FlowNode&, const FlowNode&) = default;
};

// True when the payload variant is the one required for the kind:
// UserTaskDetail for user tasks, JavaServiceTaskDetail for Java service
// tasks, GenericDetail for everything else.
bool detail_matches_kind(NodeKind kind, const NodeDetail& detail);

// Default-constructed detail payload of the right variant for a kind.
NodeDetail default_detail_for(NodeKind kind);

struct SequenceFlow {
    std::string id;
    std::optional<std::string> name;
    std::string source_ref;
    std::string target_ref;
    std::optional<std::string> condition_expression;

    friend bool operator==(const SequenceFlow&, const SequenceFlow&) = default;
};

// Canonical in-memory form of one BPMN process. Nodes and flows are keyed by
// id; node and flow ids share one id space.
struct ProcessModel {
    std::string process_id;
    std::optional<std::string> process_name;
    std::map<std::string, FlowNode> nodes;
    std::map<std::string, SequenceFlow> flows;

    friend bool operator==(const ProcessModel&, const ProcessModel&) = default;
};

// Sorts field-injection lists by field name. All library entry points accept
// models in any injection order and compare/serialize the normalized form.
FlowNode normalized(FlowNode node);
ProcessModel normalized(ProcessModel model);

// Field-by-field equality after canonical normalization.
bool model_equals(const ProcessModel& a, const ProcessModel& b);
bool node_equals(const FlowNode& a, const FlowNode& b);

// Every invariant violation as a human-readable message; empty means valid.
std::vector<std::string> validate_model(const ProcessModel& model);

// Throws InvalidModelError if validate_model reports anything.
void require_valid(const ProcessModel& model);

}  // namespace bpcm
