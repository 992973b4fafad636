#include "bpcm/model.hpp"

#include <algorithm>

#include "bpcm/errors.hpp"

namespace bpcm {

bool is_task_kind(NodeKind kind) {
    switch (kind) {
        case NodeKind::UserTask:
        case NodeKind::JavaServiceTask:
        case NodeKind::WebServiceTask:
        case NodeKind::ScriptTask:
        case NodeKind::EmailTask:
        case NodeKind::JavaReceiveTask:
        case NodeKind::BusinessRuleTask:
        case NodeKind::MuleTask:
        case NodeKind::ManualTask:
        case NodeKind::ShellTask:
        case NodeKind::CamelTask:
            return true;
        default:
            return false;
    }
}

bool is_event_kind(NodeKind kind) {
    return kind == NodeKind::StartEvent || kind == NodeKind::EndEvent ||
           kind == NodeKind::IntermediateEvent;
}

bool is_gateway_kind(NodeKind kind) {
    return kind == NodeKind::ExclusiveGateway || kind == NodeKind::ParallelGateway;
}

std::string_view to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::StartEvent: return "startEvent";
        case NodeKind::EndEvent: return "endEvent";
        case NodeKind::IntermediateEvent: return "intermediateEvent";
        case NodeKind::UserTask: return "userTask";
        case NodeKind::JavaServiceTask: return "javaServiceTask";
        case NodeKind::WebServiceTask: return "webServiceTask";
        case NodeKind::ScriptTask: return "scriptTask";
        case NodeKind::EmailTask: return "emailTask";
        case NodeKind::JavaReceiveTask: return "javaReceiveTask";
        case NodeKind::BusinessRuleTask: return "businessRuleTask";
        case NodeKind::MuleTask: return "muleTask";
        case NodeKind::ManualTask: return "manualTask";
        case NodeKind::ShellTask: return "shellTask";
        case NodeKind::CamelTask: return "camelTask";
        case NodeKind::ExclusiveGateway: return "exclusiveGateway";
        case NodeKind::ParallelGateway: return "parallelGateway";
        case NodeKind::DataObject: return "dataObject";
    }
    return "unknown";
}

std::optional<NodeKind> node_kind_from_string(std::string_view text) {
    for (const NodeKind kind : kAllNodeKinds) {
        if (to_string(kind) == text) {
            return kind;
        }
    }
    return std::nullopt;
}

std::string_view to_string(CallType call) {
    switch (call) {
        case CallType::JavaClass: return "javaClass";
        case CallType::DelegateExpression: return "delegateExpression";
        case CallType::Expression: return "expression";
    }
    return "unknown";
}

std::optional<CallType> call_type_from_string(std::string_view text) {
    if (text == "javaClass") return CallType::JavaClass;
    if (text == "delegateExpression") return CallType::DelegateExpression;
    if (text == "expression") return CallType::Expression;
    return std::nullopt;
}

std::string_view to_string(ValueKind kind) {
    switch (kind) {
        case ValueKind::StringValue: return "string";
        case ValueKind::ExpressionValue: return "expression";
    }
    return "unknown";
}

std::optional<ValueKind> value_kind_from_string(std::string_view text) {
    if (text == "string") return ValueKind::StringValue;
    if (text == "expression") return ValueKind::ExpressionValue;
    return std::nullopt;
}

bool detail_matches_kind(NodeKind kind, const NodeDetail& detail) {
    switch (kind) {
        case NodeKind::UserTask:
            return std::holds_alternative<UserTaskDetail>(detail);
        case NodeKind::JavaServiceTask:
            return std::holds_alternative<JavaServiceTaskDetail>(detail);
        default:
            return std::holds_alternative<GenericDetail>(detail);
    }
}

NodeDetail default_detail_for(NodeKind kind) {
    switch (kind) {
        case NodeKind::UserTask: return UserTaskDetail{};
        case NodeKind::JavaServiceTask: return JavaServiceTaskDetail{};
        default: return GenericDetail{};
    }
}

FlowNode normalized(FlowNode node) {
    if (auto* service = std::get_if<JavaServiceTaskDetail>(&node.detail)) {
        std::sort(service->field_injections.begin(), service->field_injections.end(),
                  [](const FieldInjection& a, const FieldInjection& b) {
                      return a.field_name < b.field_name;
                  });
    }
    return node;
}

ProcessModel normalized(ProcessModel model) {
    for (auto& [id, node] : model.nodes) {
        node = normalized(std::move(node));
    }
    return model;
}

bool node_equals(const FlowNode& a, const FlowNode& b) {
    return normalized(a) == normalized(b);
}

bool model_equals(const ProcessModel& a, const ProcessModel& b) {
    return normalized(a) == normalized(b);
}

namespace {

void validate_node(const std::string& key, const FlowNode& node,
                   std::vector<std::string>& out) {
    if (node.id.empty()) {
        out.push_back("node with empty id");
        return;
    }
    if (node.id != key) {
        out.push_back("node map key '" + key + "' differs from node id '" + node.id + "'");
    }
    if (!detail_matches_kind(node.kind, node.detail)) {
        out.push_back("node '" + node.id + "' detail payload does not match kind '" +
                      std::string(to_string(node.kind)) + "'");
        return;
    }
    if (const auto* user = std::get_if<UserTaskDetail>(&node.detail)) {
        for (const auto& candidate : user->candidate_users) {
            if (candidate.empty()) {
                out.push_back("node '" + node.id + "' has an empty candidate user");
            }
        }
        for (const auto& candidate : user->candidate_groups) {
            if (candidate.empty()) {
                out.push_back("node '" + node.id + "' has an empty candidate group");
            }
        }
    } else if (const auto* service = std::get_if<JavaServiceTaskDetail>(&node.detail)) {
        if (service->target.empty()) {
            out.push_back("node '" + node.id + "' has an empty service target");
        }
        std::set<std::string> names;
        for (const auto& injection : service->field_injections) {
            if (injection.field_name.empty()) {
                out.push_back("node '" + node.id + "' has a field injection with empty name");
            } else if (!names.insert(injection.field_name).second) {
                out.push_back("node '" + node.id + "' has duplicate field injection '" +
                              injection.field_name + "'");
            }
        }
    } else if (const auto* generic = std::get_if<GenericDetail>(&node.detail)) {
        for (const auto& [attr, value] : generic->attributes) {
            if (attr.empty() || attr == "id" || attr == "name") {
                out.push_back("node '" + node.id + "' has reserved or empty attribute key '" +
                              attr + "'");
            }
        }
    }
}

}  // namespace

std::vector<std::string> validate_model(const ProcessModel& model) {
    std::vector<std::string> out;
    if (model.process_id.empty()) {
        out.push_back("process has an empty id");
    }
    for (const auto& [key, node] : model.nodes) {
        validate_node(key, node, out);
    }
    for (const auto& [key, flow] : model.flows) {
        if (flow.id.empty()) {
            out.push_back("flow with empty id");
            continue;
        }
        if (flow.id != key) {
            out.push_back("flow map key '" + key + "' differs from flow id '" + flow.id + "'");
        }
        if (model.nodes.count(flow.id) != 0) {
            out.push_back("id '" + flow.id + "' is used by both a node and a flow");
        }
        if (flow.source_ref.empty()) {
            out.push_back("flow '" + flow.id + "' has an empty sourceRef");
        } else if (model.nodes.count(flow.source_ref) == 0) {
            out.push_back("flow '" + flow.id + "' references missing source '" +
                          flow.source_ref + "'");
        }
        if (flow.target_ref.empty()) {
            out.push_back("flow '" + flow.id + "' has an empty targetRef");
        } else if (model.nodes.count(flow.target_ref) == 0) {
            out.push_back("flow '" + flow.id + "' references missing target '" +
                          flow.target_ref + "'");
        }
    }
    return out;
}

void require_valid(const ProcessModel& model) {
    auto violations = validate_model(model);
    if (!violations.empty()) {
        throw InvalidModelError(std::move(violations));
    }
}

}  // namespace bpcm
