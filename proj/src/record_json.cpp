#include "bpcm/record_json.hpp"

#include "bpcm/errors.hpp"

namespace bpcm {

using nlohmann::json;

namespace {

json optional_to_json(const std::optional<std::string>& value) {
    if (!value) {
        return nullptr;
    }
    return *value;
}

std::optional<std::string> optional_from_json(const json& value, const char* where) {
    if (value.is_null()) {
        return std::nullopt;
    }
    if (!value.is_string()) {
        throw CodecError(std::string("expected string or null at ") + where);
    }
    return value.get<std::string>();
}

const json& member(const json& value, const char* key) {
    const auto it = value.find(key);
    if (it == value.end()) {
        throw CodecError(std::string("missing key '") + key + "'");
    }
    return *it;
}

std::string string_member(const json& value, const char* key) {
    const json& field = member(value, key);
    if (!field.is_string()) {
        throw CodecError(std::string("key '") + key + "' is not a string");
    }
    return field.get<std::string>();
}

json set_to_json(const std::set<std::string>& values) {
    json out = json::array();
    for (const auto& value : values) {
        out.push_back(value);
    }
    return out;
}

std::set<std::string> set_from_json(const json& value, const char* where) {
    if (!value.is_array()) {
        throw CodecError(std::string("expected array at ") + where);
    }
    std::set<std::string> out;
    for (const auto& item : value) {
        if (!item.is_string()) {
            throw CodecError(std::string("expected string items at ") + where);
        }
        out.insert(item.get<std::string>());
    }
    return out;
}

json injection_to_json(const FieldInjection& injection) {
    return json{{"name", injection.field_name},
                {"value_kind", std::string(to_string(injection.value_kind))},
                {"value", injection.value}};
}

FieldInjection injection_from_json(const json& value) {
    FieldInjection out;
    out.field_name = string_member(value, "name");
    const auto kind = value_kind_from_string(string_member(value, "value_kind"));
    if (!kind) {
        throw CodecError("unknown field injection value kind");
    }
    out.value_kind = *kind;
    out.value = string_member(value, "value");
    return out;
}

NodeKind node_kind_member(const json& value, const char* key) {
    const auto kind = node_kind_from_string(string_member(value, key));
    if (!kind) {
        throw CodecError("unknown node kind");
    }
    return *kind;
}

CallType call_type_member(const json& value, const char* key) {
    const auto call = call_type_from_string(string_member(value, key));
    if (!call) {
        throw CodecError("unknown call type");
    }
    return *call;
}

ValueKind value_kind_member(const json& value, const char* key) {
    const auto kind = value_kind_from_string(string_member(value, key));
    if (!kind) {
        throw CodecError("unknown value kind");
    }
    return *kind;
}

}  // namespace

json node_to_json(const FlowNode& input) {
    const FlowNode node = normalized(input);
    json detail;
    if (const auto* user = std::get_if<UserTaskDetail>(&node.detail)) {
        detail = json{{"assignee", optional_to_json(user->assignee)},
                      {"candidate_users", set_to_json(user->candidate_users)},
                      {"candidate_groups", set_to_json(user->candidate_groups)},
                      {"due_date", optional_to_json(user->due_date)},
                      {"description", optional_to_json(user->description)},
                      {"form_key", optional_to_json(user->form_key)}};
    } else if (const auto* service = std::get_if<JavaServiceTaskDetail>(&node.detail)) {
        json injections = json::array();
        for (const auto& injection : service->field_injections) {
            injections.push_back(injection_to_json(injection));
        }
        detail = json{{"call_type", std::string(to_string(service->call_type))},
                      {"target", service->target},
                      {"field_injections", std::move(injections)},
                      {"result_variable", optional_to_json(service->result_variable)}};
    } else {
        const auto& generic = std::get<GenericDetail>(node.detail);
        detail = json{{"attributes", json(generic.attributes)}};
    }
    return json{{"id", node.id},
                {"name", optional_to_json(node.name)},
                {"kind", std::string(to_string(node.kind))},
                {"detail", std::move(detail)}};
}

FlowNode node_from_json(const json& value) {
    FlowNode node;
    node.id = string_member(value, "id");
    node.name = optional_from_json(member(value, "name"), "node.name");
    node.kind = node_kind_member(value, "kind");
    const json& detail = member(value, "detail");
    if (node.kind == NodeKind::UserTask) {
        UserTaskDetail user;
        user.assignee = optional_from_json(member(detail, "assignee"), "assignee");
        user.candidate_users = set_from_json(member(detail, "candidate_users"),
                                             "candidate_users");
        user.candidate_groups = set_from_json(member(detail, "candidate_groups"),
                                              "candidate_groups");
        user.due_date = optional_from_json(member(detail, "due_date"), "due_date");
        user.description = optional_from_json(member(detail, "description"), "description");
        user.form_key = optional_from_json(member(detail, "form_key"), "form_key");
        node.detail = std::move(user);
    } else if (node.kind == NodeKind::JavaServiceTask) {
        JavaServiceTaskDetail service;
        service.call_type = call_type_member(detail, "call_type");
        service.target = string_member(detail, "target");
        const json& injections = member(detail, "field_injections");
        if (!injections.is_array()) {
            throw CodecError("field_injections is not an array");
        }
        for (const auto& item : injections) {
            service.field_injections.push_back(injection_from_json(item));
        }
        service.result_variable =
            optional_from_json(member(detail, "result_variable"), "result_variable");
        node.detail = std::move(service);
    } else {
        GenericDetail generic;
        const json& attributes = member(detail, "attributes");
        if (!attributes.is_object()) {
            throw CodecError("attributes is not an object");
        }
        for (const auto& [key, attr_value] : attributes.items()) {
            if (!attr_value.is_string()) {
                throw CodecError("attribute '" + key + "' is not a string");
            }
            generic.attributes.emplace(key, attr_value.get<std::string>());
        }
        node.detail = std::move(generic);
    }
    return normalized(std::move(node));
}

json flow_to_json(const SequenceFlow& flow) {
    return json{{"id", flow.id},
                {"name", optional_to_json(flow.name)},
                {"source_ref", flow.source_ref},
                {"target_ref", flow.target_ref},
                {"condition_expression", optional_to_json(flow.condition_expression)}};
}

SequenceFlow flow_from_json(const json& value) {
    SequenceFlow flow;
    flow.id = string_member(value, "id");
    flow.name = optional_from_json(member(value, "name"), "flow.name");
    flow.source_ref = string_member(value, "source_ref");
    flow.target_ref = string_member(value, "target_ref");
    flow.condition_expression =
        optional_from_json(member(value, "condition_expression"), "condition_expression");
    return flow;
}

namespace {

json user_modification_to_json(const UserTaskModification& modification) {
    json out;
    if (const auto* change = std::get_if<AssigneeChange>(&modification)) {
        out = json{{"field", "assignee"},
                   {"old", optional_to_json(change->old_value)},
                   {"new", optional_to_json(change->new_value)}};
    } else if (const auto* change = std::get_if<DueDateChange>(&modification)) {
        out = json{{"field", "due_date"},
                   {"old", optional_to_json(change->old_value)},
                   {"new", optional_to_json(change->new_value)}};
    } else if (const auto* change = std::get_if<DescriptionChange>(&modification)) {
        out = json{{"field", "description"},
                   {"old", optional_to_json(change->old_value)},
                   {"new", optional_to_json(change->new_value)}};
    } else if (const auto* change = std::get_if<CandidateUsersChange>(&modification)) {
        out = json{{"field", "candidate_users"},
                   {"old", set_to_json(change->old_value)},
                   {"new", set_to_json(change->new_value)}};
    } else if (const auto* change = std::get_if<CandidateGroupsChange>(&modification)) {
        out = json{{"field", "candidate_groups"},
                   {"old", set_to_json(change->old_value)},
                   {"new", set_to_json(change->new_value)}};
    } else {
        const auto& form_key = std::get<FormKeyChange>(modification);
        out = json{{"field", "form_key"},
                   {"old", optional_to_json(form_key.old_value)},
                   {"new", optional_to_json(form_key.new_value)}};
    }
    return out;
}

UserTaskModification user_modification_from_json(const json& value) {
    const std::string field = string_member(value, "field");
    const json& old_value = member(value, "old");
    const json& new_value = member(value, "new");
    if (field == "candidate_users") {
        return CandidateUsersChange{set_from_json(old_value, "old"),
                                    set_from_json(new_value, "new")};
    }
    if (field == "candidate_groups") {
        return CandidateGroupsChange{set_from_json(old_value, "old"),
                                     set_from_json(new_value, "new")};
    }
    const auto old_text = optional_from_json(old_value, "old");
    const auto new_text = optional_from_json(new_value, "new");
    if (field == "assignee") return AssigneeChange{old_text, new_text};
    if (field == "due_date") return DueDateChange{old_text, new_text};
    if (field == "description") return DescriptionChange{old_text, new_text};
    if (field == "form_key") return FormKeyChange{old_text, new_text};
    throw CodecError("unknown user task field '" + field + "'");
}

json service_modification_to_json(const JavaServiceTaskModification& modification) {
    if (const auto* change = std::get_if<CallTypeChange>(&modification)) {
        return json{{"kind", "call_type"},
                    {"old_call", std::string(to_string(change->old_call))},
                    {"old_target", change->old_target},
                    {"new_call", std::string(to_string(change->new_call))},
                    {"new_target", change->new_target}};
    }
    if (const auto* change = std::get_if<FieldInjectionAdded>(&modification)) {
        return json{{"kind", "injection_added"},
                    {"injection", injection_to_json(change->injection)}};
    }
    if (const auto* change = std::get_if<FieldInjectionRemoved>(&modification)) {
        return json{{"kind", "injection_removed"},
                    {"injection", injection_to_json(change->injection)}};
    }
    if (const auto* change = std::get_if<FieldInjectionModified>(&modification)) {
        return json{{"kind", "injection_modified"},
                    {"name", change->field_name},
                    {"old_kind", std::string(to_string(change->old_kind))},
                    {"old_value", change->old_value},
                    {"new_kind", std::string(to_string(change->new_kind))},
                    {"new_value", change->new_value}};
    }
    const auto& change = std::get<ResultVariableChange>(modification);
    return json{{"kind", "result_variable"},
                {"old", optional_to_json(change.old_value)},
                {"new", optional_to_json(change.new_value)}};
}

JavaServiceTaskModification service_modification_from_json(const json& value) {
    const std::string kind = string_member(value, "kind");
    if (kind == "call_type") {
        return CallTypeChange{call_type_member(value, "old_call"),
                              string_member(value, "old_target"),
                              call_type_member(value, "new_call"),
                              string_member(value, "new_target")};
    }
    if (kind == "injection_added") {
        return FieldInjectionAdded{injection_from_json(member(value, "injection"))};
    }
    if (kind == "injection_removed") {
        return FieldInjectionRemoved{injection_from_json(member(value, "injection"))};
    }
    if (kind == "injection_modified") {
        return FieldInjectionModified{string_member(value, "name"),
                                      value_kind_member(value, "old_kind"),
                                      string_member(value, "old_value"),
                                      value_kind_member(value, "new_kind"),
                                      string_member(value, "new_value")};
    }
    if (kind == "result_variable") {
        return ResultVariableChange{optional_from_json(member(value, "old"), "old"),
                                    optional_from_json(member(value, "new"), "new")};
    }
    throw CodecError("unknown service task modification kind '" + kind + "'");
}

json task_op_to_json(const TaskOp& op) {
    if (const auto* add = std::get_if<AddNode>(&op)) {
        return json{{"op", "add"}, {"snapshot", node_to_json(add->snapshot)}};
    }
    if (const auto* del = std::get_if<DeleteNode>(&op)) {
        return json{{"op", "delete"}, {"snapshot", node_to_json(del->snapshot)}};
    }
    if (const auto* rename = std::get_if<RenameNode>(&op)) {
        return json{{"op", "rename"},
                    {"old", optional_to_json(rename->old_name)},
                    {"new", optional_to_json(rename->new_name)}};
    }
    if (const auto* user = std::get_if<ModifyUserTask>(&op)) {
        json out = user_modification_to_json(user->modification);
        out["op"] = "modify_user_task";
        return out;
    }
    if (const auto* service = std::get_if<ModifyJavaServiceTask>(&op)) {
        json out = service_modification_to_json(service->modification);
        out["op"] = "modify_service_task";
        return out;
    }
    const auto& generic = std::get<ModifyGenericAttr>(op);
    return json{{"op", "modify_attribute"},
                {"attribute", generic.attribute},
                {"old", optional_to_json(generic.old_value)},
                {"new", optional_to_json(generic.new_value)}};
}

TaskOp task_op_from_json(const json& value) {
    const std::string op = string_member(value, "op");
    if (op == "add") {
        return AddNode{node_from_json(member(value, "snapshot"))};
    }
    if (op == "delete") {
        return DeleteNode{node_from_json(member(value, "snapshot"))};
    }
    if (op == "rename") {
        return RenameNode{optional_from_json(member(value, "old"), "old"),
                          optional_from_json(member(value, "new"), "new")};
    }
    if (op == "modify_user_task") {
        return ModifyUserTask{user_modification_from_json(value)};
    }
    if (op == "modify_service_task") {
        return ModifyJavaServiceTask{service_modification_from_json(value)};
    }
    if (op == "modify_attribute") {
        return ModifyGenericAttr{string_member(value, "attribute"),
                                 optional_from_json(member(value, "old"), "old"),
                                 optional_from_json(member(value, "new"), "new")};
    }
    throw CodecError("unknown task op '" + op + "'");
}

json flow_change_to_json(const FlowChange& change) {
    if (const auto* added = std::get_if<FlowAdded>(&change)) {
        return json{{"op", "added"}, {"snapshot", flow_to_json(added->snapshot)}};
    }
    if (const auto* removed = std::get_if<FlowRemoved>(&change)) {
        return json{{"op", "removed"}, {"snapshot", flow_to_json(removed->snapshot)}};
    }
    const auto& modified = std::get<FlowModified>(change);
    return json{{"op", "modified"},
                {"flow_id", modified.flow_id},
                {"attribute", std::string(to_string(modified.attribute))},
                {"old", optional_to_json(modified.old_value)},
                {"new", optional_to_json(modified.new_value)}};
}

FlowChange flow_change_from_json(const json& value) {
    const std::string op = string_member(value, "op");
    if (op == "added") {
        return FlowAdded{flow_from_json(member(value, "snapshot"))};
    }
    if (op == "removed") {
        return FlowRemoved{flow_from_json(member(value, "snapshot"))};
    }
    if (op == "modified") {
        const auto attribute = flow_attribute_from_string(string_member(value, "attribute"));
        if (!attribute) {
            throw CodecError("unknown flow attribute");
        }
        return FlowModified{string_member(value, "flow_id"), *attribute,
                            optional_from_json(member(value, "old"), "old"),
                            optional_from_json(member(value, "new"), "new")};
    }
    throw CodecError("unknown flow change op '" + op + "'");
}

json generic_change_to_json(const GenericChange& change) {
    json out{{"element_id", change.element_id}};
    if (const auto* added = std::get_if<GenericAdded>(&change.op)) {
        out["op"] = "added";
        out["snapshot"] = node_to_json(added->snapshot);
    } else if (const auto* removed = std::get_if<GenericRemoved>(&change.op)) {
        out["op"] = "removed";
        out["snapshot"] = node_to_json(removed->snapshot);
    } else {
        const auto& modified = std::get<GenericModified>(change.op);
        out["op"] = "modified";
        out["attribute"] = modified.attribute;
        out["old"] = optional_to_json(modified.old_value);
        out["new"] = optional_to_json(modified.new_value);
    }
    return out;
}

GenericChange generic_change_from_json(const json& value) {
    GenericChange change;
    change.element_id = string_member(value, "element_id");
    const std::string op = string_member(value, "op");
    if (op == "added") {
        change.op = GenericAdded{node_from_json(member(value, "snapshot"))};
    } else if (op == "removed") {
        change.op = GenericRemoved{node_from_json(member(value, "snapshot"))};
    } else if (op == "modified") {
        change.op = GenericModified{string_member(value, "attribute"),
                                    optional_from_json(member(value, "old"), "old"),
                                    optional_from_json(member(value, "new"), "new")};
    } else {
        throw CodecError("unknown generic change op '" + op + "'");
    }
    return change;
}

}  // namespace

json change_to_json(const ConstructChange& change) {
    const ChangeCategory category = category_of(change);
    json out;
    if (const auto* task = std::get_if<TaskLevelChange>(&change)) {
        out = task_op_to_json(task->change.op);
        out["task_kind"] = std::string(to_string(task->change.task_kind));
        out["element_id"] = task->change.element_id;
    } else if (const auto* flow = std::get_if<SequenceFlowChange>(&change)) {
        out = flow_change_to_json(flow->change);
    } else {
        out = std::visit(
            [](const auto& alternative) -> json {
                using T = std::decay_t<decltype(alternative)>;
                if constexpr (std::is_same_v<T, TaskLevelChange> ||
                              std::is_same_v<T, SequenceFlowChange>) {
                    return json();  // unreachable, handled above
                } else {
                    return generic_change_to_json(alternative.change);
                }
            },
            change);
    }
    out["category"] = std::string(to_string(category));
    return out;
}

ConstructChange change_from_json(const json& value) {
    const auto category = change_category_from_string(string_member(value, "category"));
    if (!category) {
        throw CodecError("unknown change category");
    }
    switch (*category) {
        case ChangeCategory::TaskLevel: {
            TaskChange task;
            task.task_kind = node_kind_member(value, "task_kind");
            task.element_id = string_member(value, "element_id");
            task.op = task_op_from_json(value);
            return TaskLevelChange{std::move(task)};
        }
        case ChangeCategory::SequenceFlow:
            return SequenceFlowChange{flow_change_from_json(value)};
        case ChangeCategory::Declaration:
            return DeclarationChange{generic_change_from_json(value)};
        case ChangeCategory::ProcessInitialization:
            return ProcessInitializationChange{generic_change_from_json(value)};
        case ChangeCategory::CustomExtension:
            return CustomExtensionChange{generic_change_from_json(value)};
        case ChangeCategory::DataObject:
            return DataObjectChange{generic_change_from_json(value)};
        case ChangeCategory::Gateways:
            return GatewaysChange{generic_change_from_json(value)};
        case ChangeCategory::TransactionConcurrency:
            return TransactionConcurrencyChange{generic_change_from_json(value)};
        case ChangeCategory::Event:
            return EventChange{generic_change_from_json(value)};
    }
    throw CodecError("unknown change category");
}

json record_to_json(const ChangeRecord& record) {
    return json{{"record_id", record.record_id},
                {"timestamp", record.timestamp.to_string()},
                {"provenance", json{{"agent", record.provenance.agent_name},
                                    {"cause", record.provenance.cause},
                                    {"description", record.provenance.description}}},
                {"change", change_to_json(record.change)}};
}

ChangeRecord record_from_json(const json& value) {
    ChangeRecord record;
    record.record_id = string_member(value, "record_id");
    const auto timestamp = Timestamp::parse(string_member(value, "timestamp"));
    if (!timestamp) {
        throw CodecError("timestamp is not an RFC 3339 UTC instant");
    }
    record.timestamp = *timestamp;
    const json& provenance = member(value, "provenance");
    record.provenance.agent_name = string_member(provenance, "agent");
    record.provenance.cause = string_member(provenance, "cause");
    record.provenance.description = string_member(provenance, "description");
    record.change = change_from_json(member(value, "change"));
    return record;
}

json change_set_to_json(const ChangeSet& set) {
    json records = json::array();
    for (const auto& record : set.records) {
        records.push_back(record_to_json(record));
    }
    return json{{"set_id", set.set_id},
                {"base_version", set.base_version},
                {"result_version", set.result_version},
                {"records", std::move(records)}};
}

ChangeSet change_set_from_json(const json& value) {
    ChangeSet set;
    set.set_id = string_member(value, "set_id");
    set.base_version = string_member(value, "base_version");
    set.result_version = string_member(value, "result_version");
    const json& records = member(value, "records");
    if (!records.is_array()) {
        throw CodecError("records is not an array");
    }
    for (const auto& record : records) {
        set.records.push_back(record_from_json(record));
    }
    return set;
}

std::string change_set_to_line(const ChangeSet& set) {
    return change_set_to_json(set).dump();
}

ChangeSet change_set_from_text(std::string_view text) {
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error& error) {
        throw CodecError(std::string("change set is not valid JSON: ") + error.what());
    }
    return change_set_from_json(value);
}

}  // namespace bpcm
