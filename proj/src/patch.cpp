#include "bpcm/patch.hpp"

#include <algorithm>
#include <cassert>

#include "bpcm/digest.hpp"
#include "bpcm/errors.hpp"
#include "bpcm/record_json.hpp"

namespace bpcm {

namespace {

// Internal conflict carrier; apply() turns it into a ConflictError with the
// record index and set id attached.
struct Conflict {
    ConflictKind kind;
    std::string element_id;
    std::string expected;
    std::string found;
};

[[noreturn]] void conflict(ConflictKind kind, const std::string& element_id,
                           std::string expected, std::string found) {
    throw Conflict{kind, element_id, std::move(expected), std::move(found)};
}

std::string describe(const std::optional<std::string>& value) {
    return value ? '"' + *value + '"' : std::string("<absent>");
}

std::string describe(const std::set<std::string>& values) {
    std::string out = "[";
    for (const auto& value : values) {
        if (out.size() > 1) {
            out += ",";
        }
        out += value;
    }
    return out + "]";
}

std::string describe(const FlowNode& node) {
    return node_to_json(node).dump();
}

std::string describe(const SequenceFlow& flow) {
    return flow_to_json(flow).dump();
}

void check_old(const std::optional<std::string>& expected,
               const std::optional<std::string>& current, const std::string& element_id) {
    if (expected != current) {
        conflict(ConflictKind::ValueMismatch, element_id, describe(expected),
                 describe(current));
    }
}

void check_old(const std::set<std::string>& expected, const std::set<std::string>& current,
               const std::string& element_id) {
    if (expected != current) {
        conflict(ConflictKind::ValueMismatch, element_id, describe(expected),
                 describe(current));
    }
}

FlowNode& require_node(ProcessModel& model, const std::string& id) {
    const auto it = model.nodes.find(id);
    if (it == model.nodes.end()) {
        conflict(ConflictKind::MissingElement, id, "an existing node", "<absent>");
    }
    return it->second;
}

void require_id_free(const ProcessModel& model, const std::string& id) {
    if (model.nodes.count(id) != 0 || model.flows.count(id) != 0) {
        conflict(ConflictKind::DuplicateAdd, id, "id to be unused", "an existing element");
    }
}

void require_unreferenced(const ProcessModel& model, const std::string& id) {
    for (const auto& [flow_id, flow] : model.flows) {
        if (flow.source_ref == id || flow.target_ref == id) {
            conflict(ConflictKind::DanglingReference, id,
                     "no flow referencing the deleted node",
                     "flow '" + flow_id + "' still references it");
        }
    }
}

std::string injection_text(const FieldInjection& injection);

void apply_attribute_change(GenericDetail& detail, const std::string& attribute,
                            const std::optional<std::string>& old_value,
                            const std::optional<std::string>& new_value,
                            const std::string& id);

void apply_user_modification(UserTaskDetail& detail, const UserTaskModification& modification,
                             const std::string& id) {
    if (const auto* change = std::get_if<AssigneeChange>(&modification)) {
        check_old(change->old_value, detail.assignee, id);
        detail.assignee = change->new_value;
    } else if (const auto* change = std::get_if<DueDateChange>(&modification)) {
        check_old(change->old_value, detail.due_date, id);
        detail.due_date = change->new_value;
    } else if (const auto* change = std::get_if<DescriptionChange>(&modification)) {
        check_old(change->old_value, detail.description, id);
        detail.description = change->new_value;
    } else if (const auto* change = std::get_if<CandidateUsersChange>(&modification)) {
        check_old(change->old_value, detail.candidate_users, id);
        detail.candidate_users = change->new_value;
    } else if (const auto* change = std::get_if<CandidateGroupsChange>(&modification)) {
        check_old(change->old_value, detail.candidate_groups, id);
        detail.candidate_groups = change->new_value;
    } else {
        const auto& form_key = std::get<FormKeyChange>(modification);
        check_old(form_key.old_value, detail.form_key, id);
        detail.form_key = form_key.new_value;
    }
}

void apply_service_modification(JavaServiceTaskDetail& detail,
                                const JavaServiceTaskModification& modification,
                                const std::string& id) {
    if (const auto* change = std::get_if<CallTypeChange>(&modification)) {
        if (detail.call_type != change->old_call || detail.target != change->old_target) {
            conflict(ConflictKind::ValueMismatch, id,
                     std::string(to_string(change->old_call)) + " '" + change->old_target + "'",
                     std::string(to_string(detail.call_type)) + " '" + detail.target + "'");
        }
        detail.call_type = change->new_call;
        detail.target = change->new_target;
        return;
    }

    const auto find_injection = [&](const std::string& name) {
        return std::find_if(detail.field_injections.begin(), detail.field_injections.end(),
                            [&](const FieldInjection& injection) {
                                return injection.field_name == name;
                            });
    };

    if (const auto* change = std::get_if<FieldInjectionAdded>(&modification)) {
        if (find_injection(change->injection.field_name) != detail.field_injections.end()) {
            conflict(ConflictKind::DuplicateAdd, id,
                     "no injection named '" + change->injection.field_name + "'",
                     "an existing injection");
        }
        detail.field_injections.push_back(change->injection);
        std::sort(detail.field_injections.begin(), detail.field_injections.end(),
                  [](const FieldInjection& a, const FieldInjection& b) {
                      return a.field_name < b.field_name;
                  });
    } else if (const auto* change = std::get_if<FieldInjectionRemoved>(&modification)) {
        const auto it = find_injection(change->injection.field_name);
        if (it == detail.field_injections.end()) {
            conflict(ConflictKind::MissingElement, id,
                     "injection named '" + change->injection.field_name + "'", "<absent>");
        }
        if (*it != change->injection) {
            conflict(ConflictKind::ValueMismatch, id,
                     injection_text(change->injection), injection_text(*it));
        }
        detail.field_injections.erase(it);
    } else if (const auto* change = std::get_if<FieldInjectionModified>(&modification)) {
        const auto it = find_injection(change->field_name);
        if (it == detail.field_injections.end()) {
            conflict(ConflictKind::MissingElement, id,
                     "injection named '" + change->field_name + "'", "<absent>");
        }
        if (it->value_kind != change->old_kind || it->value != change->old_value) {
            conflict(ConflictKind::ValueMismatch, id,
                     injection_text({change->field_name, change->old_kind, change->old_value}),
                     injection_text(*it));
        }
        it->value_kind = change->new_kind;
        it->value = change->new_value;
    } else {
        const auto& result = std::get<ResultVariableChange>(modification);
        check_old(result.old_value, detail.result_variable, id);
        detail.result_variable = result.new_value;
    }
}

std::string injection_text(const FieldInjection& injection) {
    return "(" + injection.field_name + ", " + std::string(to_string(injection.value_kind)) +
           ", '" + injection.value + "')";
}

void apply_task_change(ProcessModel& model, const TaskChange& task) {
    const std::string& id = task.element_id;
    if (const auto* add = std::get_if<AddNode>(&task.op)) {
        require_id_free(model, id);
        if (add->snapshot.id != id || add->snapshot.kind != task.task_kind ||
            !detail_matches_kind(add->snapshot.kind, add->snapshot.detail)) {
            conflict(ConflictKind::KindMismatch, id, "snapshot matching the task change",
                     describe(add->snapshot));
        }
        model.nodes.emplace(id, normalized(add->snapshot));
        return;
    }
    if (const auto* del = std::get_if<DeleteNode>(&task.op)) {
        FlowNode& node = require_node(model, id);
        if (!node_equals(node, del->snapshot)) {
            conflict(ConflictKind::ValueMismatch, id, describe(del->snapshot), describe(node));
        }
        require_unreferenced(model, id);
        model.nodes.erase(id);
        return;
    }

    FlowNode& node = require_node(model, id);
    if (node.kind != task.task_kind) {
        conflict(ConflictKind::KindMismatch, id, std::string(to_string(task.task_kind)),
                 std::string(to_string(node.kind)));
    }
    if (const auto* rename = std::get_if<RenameNode>(&task.op)) {
        check_old(rename->old_name, node.name, id);
        node.name = rename->new_name;
    } else if (const auto* user = std::get_if<ModifyUserTask>(&task.op)) {
        auto* detail = std::get_if<UserTaskDetail>(&node.detail);
        if (detail == nullptr) {
            conflict(ConflictKind::KindMismatch, id, "a user task detail payload",
                     "another payload");
        }
        apply_user_modification(*detail, user->modification, id);
    } else if (const auto* service = std::get_if<ModifyJavaServiceTask>(&task.op)) {
        auto* detail = std::get_if<JavaServiceTaskDetail>(&node.detail);
        if (detail == nullptr) {
            conflict(ConflictKind::KindMismatch, id, "a java service task detail payload",
                     "another payload");
        }
        apply_service_modification(*detail, service->modification, id);
    } else {
        const auto& generic_attr = std::get<ModifyGenericAttr>(task.op);
        auto* detail = std::get_if<GenericDetail>(&node.detail);
        if (detail == nullptr) {
            conflict(ConflictKind::KindMismatch, id, "a generic detail payload",
                     "a structured payload");
        }
        apply_attribute_change(*detail, generic_attr.attribute, generic_attr.old_value,
                               generic_attr.new_value, id);
    }
}

void apply_attribute_change(GenericDetail& detail, const std::string& attribute,
                            const std::optional<std::string>& old_value,
                            const std::optional<std::string>& new_value,
                            const std::string& id) {
    const auto it = detail.attributes.find(attribute);
    std::optional<std::string> current;
    if (it != detail.attributes.end()) {
        current = it->second;
    }
    if (current != old_value) {
        conflict(ConflictKind::ValueMismatch, id, describe(old_value), describe(current));
    }
    if (new_value) {
        detail.attributes[attribute] = *new_value;
    } else if (it != detail.attributes.end()) {
        detail.attributes.erase(it);
    }
}

void apply_generic_change(ProcessModel& model, const GenericChange& change,
                          ChangeCategory category) {
    const std::string& id = change.element_id;
    if (const auto* added = std::get_if<GenericAdded>(&change.op)) {
        require_id_free(model, id);
        if (added->snapshot.id != id || classify(added->snapshot.kind) != category ||
            !detail_matches_kind(added->snapshot.kind, added->snapshot.detail)) {
            conflict(ConflictKind::KindMismatch, id, "snapshot matching the change category",
                     describe(added->snapshot));
        }
        model.nodes.emplace(id, normalized(added->snapshot));
        return;
    }
    if (const auto* removed = std::get_if<GenericRemoved>(&change.op)) {
        FlowNode& node = require_node(model, id);
        if (!node_equals(node, removed->snapshot)) {
            conflict(ConflictKind::ValueMismatch, id, describe(removed->snapshot),
                     describe(node));
        }
        require_unreferenced(model, id);
        model.nodes.erase(id);
        return;
    }

    const auto& modified = std::get<GenericModified>(change.op);
    FlowNode& node = require_node(model, id);
    if (classify(node.kind) != category) {
        conflict(ConflictKind::KindMismatch, id, std::string(to_string(category)),
                 std::string(to_string(classify(node.kind))));
    }
    if (modified.attribute == "name") {
        check_old(modified.old_value, node.name, id);
        node.name = modified.new_value;
        return;
    }
    auto* detail = std::get_if<GenericDetail>(&node.detail);
    if (detail == nullptr) {
        conflict(ConflictKind::KindMismatch, id, "a generic detail payload",
                 "a structured payload");
    }
    apply_attribute_change(*detail, modified.attribute, modified.old_value,
                           modified.new_value, id);
}

void apply_declaration_change(ProcessModel& model, const GenericChange& change) {
    const std::string& id = change.element_id;
    if (id != model.process_id) {
        conflict(ConflictKind::MissingElement, id, "the process id '" + model.process_id + "'",
                 "'" + id + "'");
    }
    const auto* modified = std::get_if<GenericModified>(&change.op);
    if (modified == nullptr) {
        conflict(ConflictKind::NotApplicable, id,
                 "a process-level attribute modification", "a snapshot op");
    }
    if (modified->attribute == "id") {
        check_old(modified->old_value, std::optional<std::string>(model.process_id), id);
        if (!modified->new_value || modified->new_value->empty()) {
            conflict(ConflictKind::NotApplicable, id, "a non-empty new process id",
                     describe(modified->new_value));
        }
        model.process_id = *modified->new_value;
    } else if (modified->attribute == "name") {
        check_old(modified->old_value, model.process_name, id);
        model.process_name = modified->new_value;
    } else {
        conflict(ConflictKind::NotApplicable, id, "attribute 'id' or 'name'",
                 "'" + modified->attribute + "'");
    }
}

void apply_flow_change(ProcessModel& model, const FlowChange& change) {
    if (const auto* added = std::get_if<FlowAdded>(&change)) {
        const SequenceFlow& snapshot = added->snapshot;
        require_id_free(model, snapshot.id);
        if (model.nodes.count(snapshot.source_ref) == 0 ||
            model.nodes.count(snapshot.target_ref) == 0) {
            conflict(ConflictKind::DanglingReference, snapshot.id,
                     "both flow endpoints to exist",
                     snapshot.source_ref + " -> " + snapshot.target_ref);
        }
        model.flows.emplace(snapshot.id, snapshot);
        return;
    }
    if (const auto* removed = std::get_if<FlowRemoved>(&change)) {
        const auto it = model.flows.find(removed->snapshot.id);
        if (it == model.flows.end()) {
            conflict(ConflictKind::MissingElement, removed->snapshot.id, "an existing flow",
                     "<absent>");
        }
        if (it->second != removed->snapshot) {
            conflict(ConflictKind::ValueMismatch, removed->snapshot.id,
                     describe(removed->snapshot), describe(it->second));
        }
        model.flows.erase(it);
        return;
    }

    const auto& modified = std::get<FlowModified>(change);
    const auto it = model.flows.find(modified.flow_id);
    if (it == model.flows.end()) {
        conflict(ConflictKind::MissingElement, modified.flow_id, "an existing flow",
                 "<absent>");
    }
    SequenceFlow& flow = it->second;
    switch (modified.attribute) {
        case FlowAttribute::Name:
            check_old(modified.old_value, flow.name, modified.flow_id);
            flow.name = modified.new_value;
            break;
        case FlowAttribute::SourceRef:
            check_old(modified.old_value, std::optional<std::string>(flow.source_ref),
                      modified.flow_id);
            if (!modified.new_value || model.nodes.count(*modified.new_value) == 0) {
                conflict(ConflictKind::DanglingReference, modified.flow_id,
                         "an existing node as new source", describe(modified.new_value));
            }
            flow.source_ref = *modified.new_value;
            break;
        case FlowAttribute::TargetRef:
            check_old(modified.old_value, std::optional<std::string>(flow.target_ref),
                      modified.flow_id);
            if (!modified.new_value || model.nodes.count(*modified.new_value) == 0) {
                conflict(ConflictKind::DanglingReference, modified.flow_id,
                         "an existing node as new target", describe(modified.new_value));
            }
            flow.target_ref = *modified.new_value;
            break;
        case FlowAttribute::ConditionExpression:
            check_old(modified.old_value, flow.condition_expression, modified.flow_id);
            flow.condition_expression = modified.new_value;
            break;
    }
}

void apply_change(ProcessModel& model, const ConstructChange& change) {
    if (const auto* task = std::get_if<TaskLevelChange>(&change)) {
        apply_task_change(model, task->change);
    } else if (const auto* flow = std::get_if<SequenceFlowChange>(&change)) {
        apply_flow_change(model, flow->change);
    } else if (const auto* declaration = std::get_if<DeclarationChange>(&change)) {
        apply_declaration_change(model, declaration->change);
    } else if (const auto* event = std::get_if<EventChange>(&change)) {
        apply_generic_change(model, event->change, ChangeCategory::Event);
    } else if (const auto* gateway = std::get_if<GatewaysChange>(&change)) {
        apply_generic_change(model, gateway->change, ChangeCategory::Gateways);
    } else if (const auto* data = std::get_if<DataObjectChange>(&change)) {
        apply_generic_change(model, data->change, ChangeCategory::DataObject);
    } else {
        // ProcessInitialization, CustomExtension and TransactionConcurrency
        // are representable and exportable, but the paper defines no model
        // payload for them; there is nothing they could change here.
        conflict(ConflictKind::NotApplicable, element_id_of(change),
                 "a category with model semantics",
                 std::string(to_string(category_of(change))));
    }
}

#ifndef NDEBUG
bool dangling_free(const ProcessModel& model) {
    for (const auto& [id, flow] : model.flows) {
        if (model.nodes.count(flow.source_ref) == 0 ||
            model.nodes.count(flow.target_ref) == 0) {
            return false;
        }
    }
    return true;
}
#endif

}  // namespace

ProcessModel apply(const ChangeSet& set, const ProcessModel& model) {
    require_valid(model);
    ProcessModel working = normalized(model);
    for (std::size_t index = 0; index < set.records.size(); ++index) {
        try {
            apply_change(working, set.records[index].change);
        } catch (const Conflict& failure) {
            throw ConflictError(failure.kind, index, failure.element_id, failure.expected,
                                failure.found, set.set_id);
        }
        assert(dangling_free(working));
    }
    return working;
}

namespace {

UserTaskModification invert_user_modification(const UserTaskModification& modification) {
    return std::visit(
        [](const auto& change) -> UserTaskModification {
            auto inverse = change;
            inverse.old_value = change.new_value;
            inverse.new_value = change.old_value;
            return inverse;
        },
        modification);
}

JavaServiceTaskModification invert_service_modification(
    const JavaServiceTaskModification& modification) {
    if (const auto* change = std::get_if<CallTypeChange>(&modification)) {
        return CallTypeChange{change->new_call, change->new_target, change->old_call,
                              change->old_target};
    }
    if (const auto* change = std::get_if<FieldInjectionAdded>(&modification)) {
        return FieldInjectionRemoved{change->injection};
    }
    if (const auto* change = std::get_if<FieldInjectionRemoved>(&modification)) {
        return FieldInjectionAdded{change->injection};
    }
    if (const auto* change = std::get_if<FieldInjectionModified>(&modification)) {
        return FieldInjectionModified{change->field_name, change->new_kind, change->new_value,
                                      change->old_kind, change->old_value};
    }
    const auto& change = std::get<ResultVariableChange>(modification);
    return ResultVariableChange{change.new_value, change.old_value};
}

TaskOp invert_task_op(const TaskOp& op) {
    if (const auto* add = std::get_if<AddNode>(&op)) {
        return DeleteNode{add->snapshot};
    }
    if (const auto* del = std::get_if<DeleteNode>(&op)) {
        return AddNode{del->snapshot};
    }
    if (const auto* rename = std::get_if<RenameNode>(&op)) {
        return RenameNode{rename->new_name, rename->old_name};
    }
    if (const auto* user = std::get_if<ModifyUserTask>(&op)) {
        return ModifyUserTask{invert_user_modification(user->modification)};
    }
    if (const auto* service = std::get_if<ModifyJavaServiceTask>(&op)) {
        return ModifyJavaServiceTask{invert_service_modification(service->modification)};
    }
    const auto& generic = std::get<ModifyGenericAttr>(op);
    return ModifyGenericAttr{generic.attribute, generic.new_value, generic.old_value};
}

GenericChange invert_generic(const GenericChange& change) {
    GenericChange out;
    out.element_id = change.element_id;
    if (const auto* added = std::get_if<GenericAdded>(&change.op)) {
        out.op = GenericRemoved{added->snapshot};
    } else if (const auto* removed = std::get_if<GenericRemoved>(&change.op)) {
        out.op = GenericAdded{removed->snapshot};
    } else {
        const auto& modified = std::get<GenericModified>(change.op);
        out.op = GenericModified{modified.attribute, modified.new_value, modified.old_value};
    }
    return out;
}

FlowChange invert_flow(const FlowChange& change) {
    if (const auto* added = std::get_if<FlowAdded>(&change)) {
        return FlowRemoved{added->snapshot};
    }
    if (const auto* removed = std::get_if<FlowRemoved>(&change)) {
        return FlowAdded{removed->snapshot};
    }
    const auto& modified = std::get<FlowModified>(change);
    return FlowModified{modified.flow_id, modified.attribute, modified.new_value,
                        modified.old_value};
}

ConstructChange invert_change(const ConstructChange& change) {
    if (const auto* task = std::get_if<TaskLevelChange>(&change)) {
        return TaskLevelChange{TaskChange{task->change.task_kind, task->change.element_id,
                                          invert_task_op(task->change.op)}};
    }
    if (const auto* flow = std::get_if<SequenceFlowChange>(&change)) {
        return SequenceFlowChange{invert_flow(flow->change)};
    }
    if (const auto* declaration = std::get_if<DeclarationChange>(&change)) {
        GenericChange inverse = invert_generic(declaration->change);
        // An inverted process-id change is addressed by the id it renames from.
        if (const auto* modified = std::get_if<GenericModified>(&inverse.op)) {
            if (modified->attribute == "id" && modified->old_value) {
                inverse.element_id = *modified->old_value;
            }
        }
        return DeclarationChange{std::move(inverse)};
    }
    return std::visit(
        [](const auto& alternative) -> ConstructChange {
            using T = std::decay_t<decltype(alternative)>;
            if constexpr (std::is_same_v<T, TaskLevelChange> ||
                          std::is_same_v<T, SequenceFlowChange> ||
                          std::is_same_v<T, DeclarationChange>) {
                throw Error("unreachable");
            } else {
                return T{invert_generic(alternative.change)};
            }
        },
        change);
}

}  // namespace

ChangeSet invert(const ChangeSet& set, const InvertOptions& options) {
    std::vector<std::string> problems;
    for (const auto& record : set.records) {
        for (const auto& violation : validate_record(record)) {
            problems.push_back("record '" + record.record_id +
                               "': " + std::string(to_string(violation.kind)) + " (" +
                               violation.detail + ")");
        }
    }
    if (!problems.empty()) {
        throw InvalidModelError(std::move(problems));
    }

    const auto clock = options.clock ? options.clock : system_clock();
    const Timestamp at = clock->now();
    UlidGenerator ids(std::stoull(
        sha256_hex(at.to_string() + "\ninvert\n" + set.set_id).substr(0, 16), nullptr, 16));

    ChangeSet inverse;
    inverse.set_id = ids.next(at);
    inverse.base_version = set.result_version;
    inverse.result_version = set.base_version;
    inverse.records.reserve(set.records.size());
    for (auto it = set.records.rbegin(); it != set.records.rend(); ++it) {
        Provenance provenance = options.provenance
                                    ? *options.provenance
                                    : Provenance{it->provenance.agent_name,
                                                 "revert of " + set.set_id, ""};
        inverse.records.push_back(ChangeRecord{ids.next(at), at, std::move(provenance),
                                               invert_change(it->change)});
    }
    return inverse;
}

ProcessModel replay(const std::vector<ChangeSet>& sets, const ProcessModel& initial) {
    ProcessModel current = normalized(initial);
    const std::string* previous_result = nullptr;
    for (const auto& set : sets) {
        if (previous_result != nullptr && set.base_version != *previous_result) {
            throw VersionChainError(*previous_result, set.base_version);
        }
        current = apply(set, current);
        previous_result = &set.result_version;
    }
    return current;
}

}  // namespace bpcm
