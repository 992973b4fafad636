#include "bpcm/change.hpp"

#include <sstream>

namespace bpcm {

std::string_view to_string(FlowAttribute attribute) {
    switch (attribute) {
        case FlowAttribute::Name: return "name";
        case FlowAttribute::SourceRef: return "source_ref";
        case FlowAttribute::TargetRef: return "target_ref";
        case FlowAttribute::ConditionExpression: return "condition_expression";
    }
    return "unknown";
}

std::optional<FlowAttribute> flow_attribute_from_string(std::string_view text) {
    if (text == "name") return FlowAttribute::Name;
    if (text == "source_ref") return FlowAttribute::SourceRef;
    if (text == "target_ref") return FlowAttribute::TargetRef;
    if (text == "condition_expression") return FlowAttribute::ConditionExpression;
    return std::nullopt;
}

std::string_view to_string(ChangeCategory category) {
    switch (category) {
        case ChangeCategory::Declaration: return "declaration";
        case ChangeCategory::ProcessInitialization: return "process_initialization";
        case ChangeCategory::SequenceFlow: return "sequence_flow";
        case ChangeCategory::TaskLevel: return "task_level";
        case ChangeCategory::CustomExtension: return "custom_extension";
        case ChangeCategory::DataObject: return "data_object";
        case ChangeCategory::Gateways: return "gateways";
        case ChangeCategory::TransactionConcurrency: return "transaction_concurrency";
        case ChangeCategory::Event: return "event";
    }
    return "unknown";
}

std::optional<ChangeCategory> change_category_from_string(std::string_view text) {
    for (const ChangeCategory category : kAllChangeCategories) {
        if (to_string(category) == text) {
            return category;
        }
    }
    return std::nullopt;
}

ChangeCategory classify(NodeKind kind) {
    if (is_task_kind(kind)) {
        return ChangeCategory::TaskLevel;
    }
    if (is_gateway_kind(kind)) {
        return ChangeCategory::Gateways;
    }
    if (is_event_kind(kind)) {
        return ChangeCategory::Event;
    }
    return ChangeCategory::DataObject;
}

ChangeCategory category_of(const ConstructChange& change) {
    return std::visit(
        [](const auto& alternative) {
            using T = std::decay_t<decltype(alternative)>;
            if constexpr (std::is_same_v<T, DeclarationChange>) {
                return ChangeCategory::Declaration;
            } else if constexpr (std::is_same_v<T, ProcessInitializationChange>) {
                return ChangeCategory::ProcessInitialization;
            } else if constexpr (std::is_same_v<T, SequenceFlowChange>) {
                return ChangeCategory::SequenceFlow;
            } else if constexpr (std::is_same_v<T, TaskLevelChange>) {
                return ChangeCategory::TaskLevel;
            } else if constexpr (std::is_same_v<T, CustomExtensionChange>) {
                return ChangeCategory::CustomExtension;
            } else if constexpr (std::is_same_v<T, DataObjectChange>) {
                return ChangeCategory::DataObject;
            } else if constexpr (std::is_same_v<T, GatewaysChange>) {
                return ChangeCategory::Gateways;
            } else if constexpr (std::is_same_v<T, TransactionConcurrencyChange>) {
                return ChangeCategory::TransactionConcurrency;
            } else {
                static_assert(std::is_same_v<T, EventChange>);
                return ChangeCategory::Event;
            }
        },
        change);
}

const std::string& element_id_of(const ConstructChange& change) {
    if (const auto* task = std::get_if<TaskLevelChange>(&change)) {
        return task->change.element_id;
    }
    if (const auto* flow = std::get_if<SequenceFlowChange>(&change)) {
        return std::visit(
            [](const auto& alternative) -> const std::string& {
                using T = std::decay_t<decltype(alternative)>;
                if constexpr (std::is_same_v<T, FlowModified>) {
                    return alternative.flow_id;
                } else {
                    return alternative.snapshot.id;
                }
            },
            flow->change);
    }
    return std::visit(
        [&change](const auto& alternative) -> const std::string& {
            using T = std::decay_t<decltype(alternative)>;
            if constexpr (std::is_same_v<T, TaskLevelChange> ||
                          std::is_same_v<T, SequenceFlowChange>) {
                return element_id_of(change);  // unreachable, handled above
            } else {
                return alternative.change.element_id;
            }
        },
        change);
}

namespace {

void add(std::vector<Violation>& out, ViolationKind kind, std::string detail) {
    out.push_back(Violation{kind, std::move(detail)});
}

void check_user_task_modification(const UserTaskModification& modification,
                                  std::vector<Violation>& out) {
    std::visit(
        [&](const auto& change) {
            if (change.old_value == change.new_value) {
                add(out, ViolationKind::NoOpModification,
                    "user task modification has equal old and new values");
            }
        },
        modification);
}

void check_service_task_modification(const JavaServiceTaskModification& modification,
                                     std::vector<Violation>& out) {
    if (const auto* call = std::get_if<CallTypeChange>(&modification)) {
        if (call->old_call == call->new_call && call->old_target == call->new_target) {
            add(out, ViolationKind::NoOpModification,
                "call type change has equal old and new invocation");
        }
        if (call->old_target.empty() || call->new_target.empty()) {
            add(out, ViolationKind::InvalidSnapshot, "call type change has an empty target");
        }
    } else if (const auto* added = std::get_if<FieldInjectionAdded>(&modification)) {
        if (added->injection.field_name.empty()) {
            add(out, ViolationKind::EmptyFieldName, "added field injection has no name");
        }
    } else if (const auto* removed = std::get_if<FieldInjectionRemoved>(&modification)) {
        if (removed->injection.field_name.empty()) {
            add(out, ViolationKind::EmptyFieldName, "removed field injection has no name");
        }
    } else if (const auto* modified = std::get_if<FieldInjectionModified>(&modification)) {
        if (modified->field_name.empty()) {
            add(out, ViolationKind::EmptyFieldName, "modified field injection has no name");
        }
        if (modified->old_kind == modified->new_kind &&
            modified->old_value == modified->new_value) {
            add(out, ViolationKind::NoOpModification,
                "field injection modification has equal old and new values");
        }
    } else if (const auto* result = std::get_if<ResultVariableChange>(&modification)) {
        if (result->old_value == result->new_value) {
            add(out, ViolationKind::NoOpModification,
                "result variable change has equal old and new values");
        }
    }
}

void check_snapshot(const TaskChange& task, const FlowNode& snapshot,
                    std::vector<Violation>& out);

void check_task_change(const TaskChange& task, std::vector<Violation>& out) {
    if (task.element_id.empty()) {
        add(out, ViolationKind::EmptyElementId, "task change has no element id");
    }
    if (!is_task_kind(task.task_kind)) {
        add(out, ViolationKind::KindPayloadMismatch,
            "task change kind '" + std::string(to_string(task.task_kind)) +
                "' is not a task kind");
    }

    if (const auto* added = std::get_if<AddNode>(&task.op)) {
        check_snapshot(task, added->snapshot, out);
    } else if (const auto* deleted = std::get_if<DeleteNode>(&task.op)) {
        check_snapshot(task, deleted->snapshot, out);
    } else if (const auto* rename = std::get_if<RenameNode>(&task.op)) {
        if (rename->old_name == rename->new_name) {
            add(out, ViolationKind::NoOpModification, "rename has equal old and new names");
        }
    } else if (const auto* user = std::get_if<ModifyUserTask>(&task.op)) {
        if (task.task_kind != NodeKind::UserTask) {
            add(out, ViolationKind::KindPayloadMismatch,
                "user task modification on task kind '" +
                    std::string(to_string(task.task_kind)) + "'");
        }
        check_user_task_modification(user->modification, out);
    } else if (const auto* service = std::get_if<ModifyJavaServiceTask>(&task.op)) {
        if (task.task_kind != NodeKind::JavaServiceTask) {
            add(out, ViolationKind::KindPayloadMismatch,
                "java service task modification on task kind '" +
                    std::string(to_string(task.task_kind)) + "'");
        }
        check_service_task_modification(service->modification, out);
    } else if (const auto* generic = std::get_if<ModifyGenericAttr>(&task.op)) {
        if (task.task_kind == NodeKind::UserTask ||
            task.task_kind == NodeKind::JavaServiceTask) {
            add(out, ViolationKind::KindPayloadMismatch,
                "generic attribute modification on a structured task kind");
        }
        if (generic->attribute.empty() || generic->attribute == "id" ||
            generic->attribute == "name") {
            add(out, ViolationKind::KindPayloadMismatch,
                "generic task modification targets reserved attribute '" +
                    generic->attribute + "'");
        }
        if (generic->old_value == generic->new_value) {
            add(out, ViolationKind::NoOpModification,
                "generic modification has equal old and new values");
        }
    }
}

void check_flow_change(const FlowChange& change, std::vector<Violation>& out) {
    if (const auto* added = std::get_if<FlowAdded>(&change)) {
        if (added->snapshot.id.empty() || added->snapshot.source_ref.empty() ||
            added->snapshot.target_ref.empty()) {
            add(out, ViolationKind::InvalidSnapshot,
                "flow snapshot needs id, sourceRef and targetRef");
        }
    } else if (const auto* removed = std::get_if<FlowRemoved>(&change)) {
        if (removed->snapshot.id.empty() || removed->snapshot.source_ref.empty() ||
            removed->snapshot.target_ref.empty()) {
            add(out, ViolationKind::InvalidSnapshot,
                "flow snapshot needs id, sourceRef and targetRef");
        }
    } else if (const auto* modified = std::get_if<FlowModified>(&change)) {
        if (modified->flow_id.empty()) {
            add(out, ViolationKind::EmptyElementId, "flow modification has no flow id");
        }
        if (modified->old_value == modified->new_value) {
            add(out, ViolationKind::NoOpModification,
                "flow modification has equal old and new values");
        }
        if ((modified->attribute == FlowAttribute::SourceRef ||
             modified->attribute == FlowAttribute::TargetRef) &&
            (!modified->old_value || !modified->new_value || modified->old_value->empty() ||
             modified->new_value->empty())) {
            add(out, ViolationKind::InvalidSnapshot,
                "flow endpoint modification needs non-empty old and new references");
        }
    }
}

void check_generic_change(const GenericChange& change, ChangeCategory category,
                          std::vector<Violation>& out) {
    if (change.element_id.empty()) {
        add(out, ViolationKind::EmptyElementId, "generic change has no element id");
    }
    const bool node_level = category == ChangeCategory::Event ||
                            category == ChangeCategory::Gateways ||
                            category == ChangeCategory::DataObject;
    if (const auto* added = std::get_if<GenericAdded>(&change.op)) {
        if (!node_level) {
            add(out, ViolationKind::KindPayloadMismatch,
                "snapshot op under a process-level category");
        } else if (added->snapshot.id != change.element_id ||
                   classify(added->snapshot.kind) != category ||
                   !detail_matches_kind(added->snapshot.kind, added->snapshot.detail)) {
            add(out, ViolationKind::InvalidSnapshot,
                "node snapshot does not match the change's element or category");
        }
    } else if (const auto* removed = std::get_if<GenericRemoved>(&change.op)) {
        if (!node_level) {
            add(out, ViolationKind::KindPayloadMismatch,
                "snapshot op under a process-level category");
        } else if (removed->snapshot.id != change.element_id ||
                   classify(removed->snapshot.kind) != category ||
                   !detail_matches_kind(removed->snapshot.kind, removed->snapshot.detail)) {
            add(out, ViolationKind::InvalidSnapshot,
                "node snapshot does not match the change's element or category");
        }
    } else if (const auto* modified = std::get_if<GenericModified>(&change.op)) {
        if (modified->attribute.empty()) {
            add(out, ViolationKind::KindPayloadMismatch,
                "generic modification has an empty attribute");
        }
        if (node_level && modified->attribute == "id") {
            add(out, ViolationKind::KindPayloadMismatch,
                "node-level generic modification cannot target 'id'");
        }
        if (modified->old_value == modified->new_value) {
            add(out, ViolationKind::NoOpModification,
                "generic modification has equal old and new values");
        }
    }
}

void check_snapshot(const TaskChange& task, const FlowNode& snapshot,
                    std::vector<Violation>& out) {
    if (snapshot.id != task.element_id) {
        add(out, ViolationKind::InvalidSnapshot,
            "snapshot id '" + snapshot.id + "' differs from element id '" + task.element_id +
                "'");
    }
    if (snapshot.kind != task.task_kind) {
        add(out, ViolationKind::InvalidSnapshot,
            "snapshot kind differs from the task change kind");
    }
    if (!detail_matches_kind(snapshot.kind, snapshot.detail)) {
        add(out, ViolationKind::InvalidSnapshot, "snapshot detail does not match its kind");
    }
}

}  // namespace

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::EmptyRecordId: return "EmptyRecordId";
        case ViolationKind::EmptyAgentName: return "EmptyAgentName";
        case ViolationKind::EmptyCause: return "EmptyCause";
        case ViolationKind::EmptyElementId: return "EmptyElementId";
        case ViolationKind::EmptyFieldName: return "EmptyFieldName";
        case ViolationKind::NoOpModification: return "NoOpModification";
        case ViolationKind::KindPayloadMismatch: return "KindPayloadMismatch";
        case ViolationKind::InvalidSnapshot: return "InvalidSnapshot";
    }
    return "Unknown";
}

std::vector<Violation> validate_record(const ChangeRecord& record) {
    std::vector<Violation> out;
    if (record.record_id.empty()) {
        add(out, ViolationKind::EmptyRecordId, "record has no id");
    }
    if (record.provenance.agent_name.empty()) {
        add(out, ViolationKind::EmptyAgentName, "provenance has no agent name");
    }
    if (record.provenance.cause.empty()) {
        add(out, ViolationKind::EmptyCause, "provenance has no cause");
    }

    if (const auto* task = std::get_if<TaskLevelChange>(&record.change)) {
        check_task_change(task->change, out);
    } else if (const auto* flow = std::get_if<SequenceFlowChange>(&record.change)) {
        check_flow_change(flow->change, out);
    } else {
        const ChangeCategory category = category_of(record.change);
        std::visit(
            [&](const auto& alternative) {
                using T = std::decay_t<decltype(alternative)>;
                if constexpr (!std::is_same_v<T, TaskLevelChange> &&
                              !std::is_same_v<T, SequenceFlowChange>) {
                    check_generic_change(alternative.change, category, out);
                }
            },
            record.change);
    }
    return out;
}

}  // namespace bpcm
