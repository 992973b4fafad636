#include "bpcm/ontology.hpp"

#include <map>

#include "bpcm/errors.hpp"
#include "bpcm/record_json.hpp"

namespace bpcm {

namespace {

constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
constexpr std::string_view kRdfsSubClassOf = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
constexpr std::string_view kOwlClass = "http://www.w3.org/2002/07/owl#Class";
constexpr std::string_view kXsdDateTime = "http://www.w3.org/2001/XMLSchema#dateTime";

std::string ns(std::string_view local) {
    return std::string(kOntologyNs) + std::string(local);
}

std::string property(std::string_view local) {
    return ns(local);
}

// Class local names follow the figure labels of the source ontology,
// underscored. (parent, child) edges drive both the declarations and the
// subclass triples; declaration order is the order below.
struct ClassEdge {
    std::string_view name;
    std::string_view parent;  // empty for the three roots
};

constexpr ClassEdge kClasses[] = {
    {"BPMN_Construct_Change", ""},
    {"Provenance_Specs", ""},
    {"Timestamp", ""},
    {"AgentName", "Provenance_Specs"},
    {"Cause", "Provenance_Specs"},
    {"Description", "Provenance_Specs"},
    {"Declaration_Change", "BPMN_Construct_Change"},
    {"Process_Initialization_Change", "BPMN_Construct_Change"},
    {"Sequence_Flow_Change", "BPMN_Construct_Change"},
    {"TaskLevel_Change", "BPMN_Construct_Change"},
    {"Custom_Extension_Change", "BPMN_Construct_Change"},
    {"Data_Object_Change", "BPMN_Construct_Change"},
    {"Gateways_Change", "BPMN_Construct_Change"},
    {"Transaction_Concurrency_Change", "BPMN_Construct_Change"},
    {"Event_Change", "BPMN_Construct_Change"},
    {"UserTask_Change", "TaskLevel_Change"},
    {"Java_Service_Task_Change", "TaskLevel_Change"},
    {"Web_Service_Task_Change", "TaskLevel_Change"},
    {"Script_Task_Change", "TaskLevel_Change"},
    {"Email_Task_Change", "TaskLevel_Change"},
    {"Java_Receive_Task_Change", "TaskLevel_Change"},
    {"Business_Rule_Task_Change", "TaskLevel_Change"},
    {"Mule_Task_Change", "TaskLevel_Change"},
    {"Manual_Task_Change", "TaskLevel_Change"},
    {"Shell_Task_Change", "TaskLevel_Change"},
    {"Camel_Task_Change", "TaskLevel_Change"},
    {"Addition_in_UserTask", "UserTask_Change"},
    {"Deletion_in_UserTask", "UserTask_Change"},
    {"Rename_in_UserTask", "UserTask_Change"},
    {"Modification_in_UserTask", "UserTask_Change"},
    {"Addition_in_JavaServiceTask", "Java_Service_Task_Change"},
    {"Deletion_in_JavaServiceTask", "Java_Service_Task_Change"},
    {"Rename_in_JavaServiceTask", "Java_Service_Task_Change"},
    {"CallType_Change", "Java_Service_Task_Change"},
    {"Field_Injection_Change", "Java_Service_Task_Change"},
    {"ResultVariable_Change", "Java_Service_Task_Change"},
    {"CallType_JavaClass", "CallType_Change"},
    {"CallType_DelegateExpression", "CallType_Change"},
    {"CallType_Expression", "CallType_Change"},
};

std::string_view task_kind_class(NodeKind kind) {
    switch (kind) {
        case NodeKind::UserTask: return "UserTask_Change";
        case NodeKind::JavaServiceTask: return "Java_Service_Task_Change";
        case NodeKind::WebServiceTask: return "Web_Service_Task_Change";
        case NodeKind::ScriptTask: return "Script_Task_Change";
        case NodeKind::EmailTask: return "Email_Task_Change";
        case NodeKind::JavaReceiveTask: return "Java_Receive_Task_Change";
        case NodeKind::BusinessRuleTask: return "Business_Rule_Task_Change";
        case NodeKind::MuleTask: return "Mule_Task_Change";
        case NodeKind::ManualTask: return "Manual_Task_Change";
        case NodeKind::ShellTask: return "Shell_Task_Change";
        case NodeKind::CamelTask: return "Camel_Task_Change";
        default: break;
    }
    throw Error("not a task kind");
}

std::string_view category_class(ChangeCategory category) {
    switch (category) {
        case ChangeCategory::Declaration: return "Declaration_Change";
        case ChangeCategory::ProcessInitialization: return "Process_Initialization_Change";
        case ChangeCategory::SequenceFlow: return "Sequence_Flow_Change";
        case ChangeCategory::TaskLevel: return "TaskLevel_Change";
        case ChangeCategory::CustomExtension: return "Custom_Extension_Change";
        case ChangeCategory::DataObject: return "Data_Object_Change";
        case ChangeCategory::Gateways: return "Gateways_Change";
        case ChangeCategory::TransactionConcurrency:
            return "Transaction_Concurrency_Change";
        case ChangeCategory::Event: return "Event_Change";
    }
    throw Error("unknown category");
}

std::string_view call_type_class(CallType call) {
    switch (call) {
        case CallType::JavaClass: return "CallType_JavaClass";
        case CallType::DelegateExpression: return "CallType_DelegateExpression";
        case CallType::Expression: return "CallType_Expression";
    }
    throw Error("unknown call type");
}

std::string_view user_task_op_class(const TaskOp& op) {
    if (std::holds_alternative<AddNode>(op)) return "Addition_in_UserTask";
    if (std::holds_alternative<DeleteNode>(op)) return "Deletion_in_UserTask";
    if (std::holds_alternative<RenameNode>(op)) return "Rename_in_UserTask";
    if (std::holds_alternative<ModifyUserTask>(op)) return "Modification_in_UserTask";
    return "UserTask_Change";
}

std::string_view java_task_op_class(const TaskOp& op) {
    if (std::holds_alternative<AddNode>(op)) return "Addition_in_JavaServiceTask";
    if (std::holds_alternative<DeleteNode>(op)) return "Deletion_in_JavaServiceTask";
    if (std::holds_alternative<RenameNode>(op)) return "Rename_in_JavaServiceTask";
    if (const auto* modify = std::get_if<ModifyJavaServiceTask>(&op)) {
        if (const auto* call = std::get_if<CallTypeChange>(&modify->modification)) {
            return call_type_class(call->new_call);
        }
        if (std::holds_alternative<ResultVariableChange>(modify->modification)) {
            return "ResultVariable_Change";
        }
        return "Field_Injection_Change";
    }
    return "Java_Service_Task_Change";
}

std::string user_modification_field(const UserTaskModification& modification) {
    if (std::holds_alternative<AssigneeChange>(modification)) return "assignee";
    if (std::holds_alternative<DueDateChange>(modification)) return "due_date";
    if (std::holds_alternative<DescriptionChange>(modification)) return "description";
    if (std::holds_alternative<CandidateUsersChange>(modification)) return "candidate_users";
    if (std::holds_alternative<CandidateGroupsChange>(modification)) {
        return "candidate_groups";
    }
    return "form_key";
}

std::string service_modification_kind(const JavaServiceTaskModification& modification) {
    if (std::holds_alternative<CallTypeChange>(modification)) return "call_type";
    if (std::holds_alternative<FieldInjectionAdded>(modification)) return "injection_added";
    if (std::holds_alternative<FieldInjectionRemoved>(modification)) {
        return "injection_removed";
    }
    if (std::holds_alternative<FieldInjectionModified>(modification)) {
        return "injection_modified";
    }
    return "result_variable";
}

// The documented discriminator literal for hasChangeKind; pins the exact
// payload variant so records can be parsed back from their triples.
std::string change_kind_of(const ConstructChange& change) {
    if (const auto* task = std::get_if<TaskLevelChange>(&change)) {
        const TaskOp& op = task->change.op;
        if (std::holds_alternative<AddNode>(op)) return "task.add";
        if (std::holds_alternative<DeleteNode>(op)) return "task.delete";
        if (std::holds_alternative<RenameNode>(op)) return "task.rename";
        if (const auto* user = std::get_if<ModifyUserTask>(&op)) {
            return "task.modify_user_task." +
                   user_modification_field(user->modification);
        }
        if (const auto* service = std::get_if<ModifyJavaServiceTask>(&op)) {
            return "task.modify_service_task." +
                   service_modification_kind(service->modification);
        }
        return "task.modify_attribute";
    }
    if (const auto* flow = std::get_if<SequenceFlowChange>(&change)) {
        if (std::holds_alternative<FlowAdded>(flow->change)) return "flow.added";
        if (std::holds_alternative<FlowRemoved>(flow->change)) return "flow.removed";
        return "flow.modified";
    }
    return std::visit(
        [](const auto& alternative) -> std::string {
            using T = std::decay_t<decltype(alternative)>;
            if constexpr (std::is_same_v<T, TaskLevelChange> ||
                          std::is_same_v<T, SequenceFlowChange>) {
                return "";  // unreachable, handled above
            } else {
                const GenericChange& generic = alternative.change;
                if (std::holds_alternative<GenericAdded>(generic.op)) return "generic.added";
                if (std::holds_alternative<GenericRemoved>(generic.op)) {
                    return "generic.removed";
                }
                return "generic.modified";
            }
        },
        change);
}

}  // namespace

std::string to_ntriples_line(const OntologyTriple& triple) {
    std::string out = "<" + triple.subject + "> <" + triple.predicate + "> ";
    if (!triple.object_is_literal) {
        out += "<" + triple.object + ">";
    } else {
        out += '"';
        for (const char c : triple.object) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\r': out += "\\r"; break;
                case '\t': out += "\\t"; break;
                case '\b': out += "\\b"; break;
                case '\f': out += "\\f"; break;
                default: out += c; break;
            }
        }
        out += '"';
        if (!triple.datatype.empty()) {
            out += "^^<" + triple.datatype + ">";
        }
    }
    out += " .";
    return out;
}

std::string class_iri_of(const ChangeRecord& record) {
    if (const auto* task = std::get_if<TaskLevelChange>(&record.change)) {
        const TaskChange& change = task->change;
        if (change.task_kind == NodeKind::UserTask) {
            return ns(user_task_op_class(change.op));
        }
        if (change.task_kind == NodeKind::JavaServiceTask) {
            return ns(java_task_op_class(change.op));
        }
        return ns(task_kind_class(change.task_kind));
    }
    return ns(category_class(category_of(record.change)));
}

std::vector<OntologyTriple> export_schema() {
    std::vector<OntologyTriple> out;
    for (const ClassEdge& edge : kClasses) {
        out.push_back({ns(edge.name), std::string(kRdfType), std::string(kOwlClass), false, ""});
    }
    for (const ClassEdge& edge : kClasses) {
        if (!edge.parent.empty()) {
            out.push_back(
                {ns(edge.name), std::string(kRdfsSubClassOf), ns(edge.parent), false, ""});
        }
    }
    return out;
}

namespace {

class RecordExporter {
public:
    explicit RecordExporter(const ChangeRecord& record)
        : record_(record), subject_(ns("Record_" + record.record_id)) {}

    std::vector<OntologyTriple> run() {
        iri(kRdfType, class_iri_of(record_));
        literal("hasChangeKind", change_kind_of(record_.change));
        literal("hasElementId", element_id_of(record_.change));
        emit_payload();
        literal("hasAgentName", record_.provenance.agent_name);
        literal("hasCause", record_.provenance.cause);
        literal("hasDescription", record_.provenance.description);
        triples_.push_back({subject_, property("hasTimestamp"),
                            record_.timestamp.to_string(), true,
                            std::string(kXsdDateTime)});
        return std::move(triples_);
    }

private:
    const ChangeRecord& record_;
    std::string subject_;
    std::vector<OntologyTriple> triples_;

    void iri(std::string_view predicate, std::string object) {
        triples_.push_back(
            {subject_, std::string(predicate), std::move(object), false, ""});
    }

    void literal(std::string_view name, std::string value) {
        triples_.push_back({subject_, property(name), std::move(value), true, ""});
    }

    void optional_literal(std::string_view name, const std::optional<std::string>& value) {
        if (value) {
            literal(name, *value);
        }
    }

    void set_literal(std::string_view name, const std::set<std::string>& values) {
        nlohmann::json array = nlohmann::json::array();
        for (const auto& value : values) {
            array.push_back(value);
        }
        literal(name, array.dump());
    }

    void emit_payload() {
        if (const auto* task = std::get_if<TaskLevelChange>(&record_.change)) {
            literal("hasTaskKind", std::string(to_string(task->change.task_kind)));
            emit_task_op(task->change.op);
        } else if (const auto* flow = std::get_if<SequenceFlowChange>(&record_.change)) {
            emit_flow_change(flow->change);
        } else {
            std::visit(
                [&](const auto& alternative) {
                    using T = std::decay_t<decltype(alternative)>;
                    if constexpr (!std::is_same_v<T, TaskLevelChange> &&
                                  !std::is_same_v<T, SequenceFlowChange>) {
                        emit_generic_change(alternative.change);
                    }
                },
                record_.change);
        }
    }

    void emit_task_op(const TaskOp& op) {
        if (const auto* add = std::get_if<AddNode>(&op)) {
            literal("hasSnapshot", node_to_json(add->snapshot).dump());
        } else if (const auto* del = std::get_if<DeleteNode>(&op)) {
            literal("hasSnapshot", node_to_json(del->snapshot).dump());
        } else if (const auto* rename = std::get_if<RenameNode>(&op)) {
            optional_literal("hasOldValue", rename->old_name);
            optional_literal("hasNewValue", rename->new_name);
        } else if (const auto* user = std::get_if<ModifyUserTask>(&op)) {
            emit_user_modification(user->modification);
        } else if (const auto* service = std::get_if<ModifyJavaServiceTask>(&op)) {
            emit_service_modification(service->modification);
        } else {
            const auto& generic = std::get<ModifyGenericAttr>(op);
            literal("hasAttribute", generic.attribute);
            optional_literal("hasOldValue", generic.old_value);
            optional_literal("hasNewValue", generic.new_value);
        }
    }

    void emit_user_modification(const UserTaskModification& modification) {
        if (const auto* users = std::get_if<CandidateUsersChange>(&modification)) {
            set_literal("hasOldValue", users->old_value);
            set_literal("hasNewValue", users->new_value);
        } else if (const auto* groups = std::get_if<CandidateGroupsChange>(&modification)) {
            set_literal("hasOldValue", groups->old_value);
            set_literal("hasNewValue", groups->new_value);
        } else {
            std::visit(
                [&](const auto& change) {
                    using T = std::decay_t<decltype(change)>;
                    if constexpr (!std::is_same_v<T, CandidateUsersChange> &&
                                  !std::is_same_v<T, CandidateGroupsChange>) {
                        optional_literal("hasOldValue", change.old_value);
                        optional_literal("hasNewValue", change.new_value);
                    }
                },
                modification);
        }
    }

    void emit_service_modification(const JavaServiceTaskModification& modification) {
        if (const auto* call = std::get_if<CallTypeChange>(&modification)) {
            literal("hasOldCallType", std::string(to_string(call->old_call)));
            literal("hasNewCallType", std::string(to_string(call->new_call)));
            literal("hasOldValue", call->old_target);
            literal("hasNewValue", call->new_target);
        } else if (const auto* added = std::get_if<FieldInjectionAdded>(&modification)) {
            literal("hasFieldName", added->injection.field_name);
            literal("hasValueKind", std::string(to_string(added->injection.value_kind)));
            literal("hasNewValue", added->injection.value);
        } else if (const auto* removed = std::get_if<FieldInjectionRemoved>(&modification)) {
            literal("hasFieldName", removed->injection.field_name);
            literal("hasValueKind", std::string(to_string(removed->injection.value_kind)));
            literal("hasOldValue", removed->injection.value);
        } else if (const auto* modified = std::get_if<FieldInjectionModified>(&modification)) {
            literal("hasFieldName", modified->field_name);
            literal("hasOldValueKind", std::string(to_string(modified->old_kind)));
            literal("hasOldValue", modified->old_value);
            literal("hasNewValueKind", std::string(to_string(modified->new_kind)));
            literal("hasNewValue", modified->new_value);
        } else {
            const auto& result = std::get<ResultVariableChange>(modification);
            optional_literal("hasOldValue", result.old_value);
            optional_literal("hasNewValue", result.new_value);
        }
    }

    void emit_flow_change(const FlowChange& change) {
        if (const auto* added = std::get_if<FlowAdded>(&change)) {
            literal("hasSnapshot", flow_to_json(added->snapshot).dump());
        } else if (const auto* removed = std::get_if<FlowRemoved>(&change)) {
            literal("hasSnapshot", flow_to_json(removed->snapshot).dump());
        } else {
            const auto& modified = std::get<FlowModified>(change);
            literal("hasAttribute", std::string(to_string(modified.attribute)));
            optional_literal("hasOldValue", modified.old_value);
            optional_literal("hasNewValue", modified.new_value);
        }
    }

    void emit_generic_change(const GenericChange& change) {
        if (const auto* added = std::get_if<GenericAdded>(&change.op)) {
            literal("hasSnapshot", node_to_json(added->snapshot).dump());
        } else if (const auto* removed = std::get_if<GenericRemoved>(&change.op)) {
            literal("hasSnapshot", node_to_json(removed->snapshot).dump());
        } else {
            const auto& modified = std::get<GenericModified>(change.op);
            literal("hasAttribute", modified.attribute);
            optional_literal("hasOldValue", modified.old_value);
            optional_literal("hasNewValue", modified.new_value);
        }
    }
};

}  // namespace

std::vector<OntologyTriple> export_record(const ChangeRecord& record) {
    return RecordExporter(record).run();
}

std::string export_journal(const Journal& journal) {
    for (const auto& finding : journal.verify()) {
        if (finding.kind == FindingKind::ChainBroken ||
            finding.kind == FindingKind::ReplayMismatch) {
            throw JournalError(JournalErrorKind::CorruptJournal,
                               std::string(to_string(finding.kind)) + " on " +
                                   finding.subject + ": " + finding.detail);
        }
    }
    std::string out;
    for (const auto& triple : export_schema()) {
        out += to_ntriples_line(triple);
        out += '\n';
    }
    for (const auto& entry : journal.entries()) {
        for (const auto& record : entry.set.records) {
            for (const auto& triple : export_record(record)) {
                out += to_ntriples_line(triple);
                out += '\n';
            }
        }
    }
    return out;
}

// --- Inverse parse -----------------------------------------------------------

namespace {

class TripleReader {
public:
    explicit TripleReader(const std::vector<OntologyTriple>& triples) {
        if (triples.empty()) {
            throw CodecError("no triples to parse");
        }
        subject_ = triples.front().subject;
        for (const auto& triple : triples) {
            if (triple.subject != subject_) {
                throw CodecError("triples do not share one subject");
            }
            values_.emplace(triple.predicate, &triple);
        }
    }

    const std::string& subject() const { return subject_; }

    std::string require(std::string_view name) const {
        const auto found = find(name);
        if (!found) {
            throw CodecError("missing property " + std::string(name));
        }
        return *found;
    }

    std::optional<std::string> find(std::string_view name) const {
        const auto it = values_.find(property(name));
        if (it == values_.end()) {
            return std::nullopt;
        }
        return it->second->object;
    }

    std::optional<std::string> type_iri() const {
        const auto it = values_.find(std::string(kRdfType));
        if (it == values_.end()) {
            return std::nullopt;
        }
        return it->second->object;
    }

private:
    std::string subject_;
    std::map<std::string, const OntologyTriple*> values_;
};

std::set<std::string> set_from_literal(const std::string& text) {
    const auto value = nlohmann::json::parse(text, nullptr, false);
    if (value.is_discarded() || !value.is_array()) {
        throw CodecError("expected a JSON array literal");
    }
    std::set<std::string> out;
    for (const auto& item : value) {
        if (!item.is_string()) {
            throw CodecError("expected string items in array literal");
        }
        out.insert(item.get<std::string>());
    }
    return out;
}

CallType call_type_from_literal(const std::string& text) {
    const auto call = call_type_from_string(text);
    if (!call) {
        throw CodecError("unknown call type literal '" + text + "'");
    }
    return *call;
}

ValueKind value_kind_from_literal(const std::string& text) {
    const auto kind = value_kind_from_string(text);
    if (!kind) {
        throw CodecError("unknown value kind literal '" + text + "'");
    }
    return *kind;
}

FlowNode node_from_literal(const std::string& text) {
    const auto value = nlohmann::json::parse(text, nullptr, false);
    if (value.is_discarded()) {
        throw CodecError("snapshot literal is not valid JSON");
    }
    return node_from_json(value);
}

SequenceFlow flow_from_literal(const std::string& text) {
    const auto value = nlohmann::json::parse(text, nullptr, false);
    if (value.is_discarded()) {
        throw CodecError("snapshot literal is not valid JSON");
    }
    return flow_from_json(value);
}

UserTaskModification parse_user_modification(const std::string& field,
                                             const TripleReader& reader) {
    if (field == "candidate_users") {
        return CandidateUsersChange{set_from_literal(reader.require("hasOldValue")),
                                    set_from_literal(reader.require("hasNewValue"))};
    }
    if (field == "candidate_groups") {
        return CandidateGroupsChange{set_from_literal(reader.require("hasOldValue")),
                                     set_from_literal(reader.require("hasNewValue"))};
    }
    const auto old_value = reader.find("hasOldValue");
    const auto new_value = reader.find("hasNewValue");
    if (field == "assignee") return AssigneeChange{old_value, new_value};
    if (field == "due_date") return DueDateChange{old_value, new_value};
    if (field == "description") return DescriptionChange{old_value, new_value};
    if (field == "form_key") return FormKeyChange{old_value, new_value};
    throw CodecError("unknown user task field '" + field + "'");
}

JavaServiceTaskModification parse_service_modification(const std::string& kind,
                                                       const TripleReader& reader) {
    if (kind == "call_type") {
        return CallTypeChange{call_type_from_literal(reader.require("hasOldCallType")),
                              reader.require("hasOldValue"),
                              call_type_from_literal(reader.require("hasNewCallType")),
                              reader.require("hasNewValue")};
    }
    if (kind == "injection_added") {
        return FieldInjectionAdded{
            FieldInjection{reader.require("hasFieldName"),
                           value_kind_from_literal(reader.require("hasValueKind")),
                           reader.require("hasNewValue")}};
    }
    if (kind == "injection_removed") {
        return FieldInjectionRemoved{
            FieldInjection{reader.require("hasFieldName"),
                           value_kind_from_literal(reader.require("hasValueKind")),
                           reader.require("hasOldValue")}};
    }
    if (kind == "injection_modified") {
        return FieldInjectionModified{
            reader.require("hasFieldName"),
            value_kind_from_literal(reader.require("hasOldValueKind")),
            reader.require("hasOldValue"),
            value_kind_from_literal(reader.require("hasNewValueKind")),
            reader.require("hasNewValue")};
    }
    if (kind == "result_variable") {
        return ResultVariableChange{reader.find("hasOldValue"), reader.find("hasNewValue")};
    }
    throw CodecError("unknown service task modification kind '" + kind + "'");
}

TaskOp parse_task_op(const std::string& change_kind, const TripleReader& reader) {
    if (change_kind == "task.add") {
        return AddNode{node_from_literal(reader.require("hasSnapshot"))};
    }
    if (change_kind == "task.delete") {
        return DeleteNode{node_from_literal(reader.require("hasSnapshot"))};
    }
    if (change_kind == "task.rename") {
        return RenameNode{reader.find("hasOldValue"), reader.find("hasNewValue")};
    }
    if (change_kind == "task.modify_attribute") {
        return ModifyGenericAttr{reader.require("hasAttribute"), reader.find("hasOldValue"),
                                 reader.find("hasNewValue")};
    }
    constexpr std::string_view kUserPrefix = "task.modify_user_task.";
    if (change_kind.rfind(kUserPrefix, 0) == 0) {
        return ModifyUserTask{
            parse_user_modification(change_kind.substr(kUserPrefix.size()), reader)};
    }
    constexpr std::string_view kServicePrefix = "task.modify_service_task.";
    if (change_kind.rfind(kServicePrefix, 0) == 0) {
        return ModifyJavaServiceTask{
            parse_service_modification(change_kind.substr(kServicePrefix.size()), reader)};
    }
    throw CodecError("unknown change kind '" + change_kind + "'");
}

FlowChange parse_flow_change(const std::string& change_kind, const TripleReader& reader) {
    if (change_kind == "flow.added") {
        return FlowAdded{flow_from_literal(reader.require("hasSnapshot"))};
    }
    if (change_kind == "flow.removed") {
        return FlowRemoved{flow_from_literal(reader.require("hasSnapshot"))};
    }
    const auto attribute = flow_attribute_from_string(reader.require("hasAttribute"));
    if (!attribute) {
        throw CodecError("unknown flow attribute literal");
    }
    return FlowModified{reader.require("hasElementId"), *attribute,
                        reader.find("hasOldValue"), reader.find("hasNewValue")};
}

GenericChange parse_generic_change(const std::string& change_kind,
                                   const TripleReader& reader) {
    GenericChange change;
    change.element_id = reader.require("hasElementId");
    if (change_kind == "generic.added") {
        change.op = GenericAdded{node_from_literal(reader.require("hasSnapshot"))};
    } else if (change_kind == "generic.removed") {
        change.op = GenericRemoved{node_from_literal(reader.require("hasSnapshot"))};
    } else if (change_kind == "generic.modified") {
        change.op = GenericModified{reader.require("hasAttribute"),
                                    reader.find("hasOldValue"), reader.find("hasNewValue")};
    } else {
        throw CodecError("unknown change kind '" + change_kind + "'");
    }
    return change;
}

ChangeCategory category_from_class(const std::string& class_iri) {
    for (const ChangeCategory category : kAllChangeCategories) {
        if (class_iri == ns(category_class(category))) {
            return category;
        }
    }
    // Task-level records are typed with op- or kind-specific subclasses.
    return ChangeCategory::TaskLevel;
}

}  // namespace

ChangeRecord record_from_triples(const std::vector<OntologyTriple>& triples) {
    const TripleReader reader(triples);

    ChangeRecord record;
    const std::string prefix = ns("Record_");
    if (reader.subject().rfind(prefix, 0) != 0) {
        throw CodecError("subject is not a record individual");
    }
    record.record_id = reader.subject().substr(prefix.size());

    const auto timestamp = Timestamp::parse(reader.require("hasTimestamp"));
    if (!timestamp) {
        throw CodecError("hasTimestamp is not an RFC 3339 UTC instant");
    }
    record.timestamp = *timestamp;
    record.provenance.agent_name = reader.require("hasAgentName");
    record.provenance.cause = reader.require("hasCause");
    record.provenance.description = reader.require("hasDescription");

    const auto type = reader.type_iri();
    if (!type) {
        throw CodecError("record individual has no type triple");
    }
    const std::string change_kind = reader.require("hasChangeKind");
    const ChangeCategory category = category_from_class(*type);

    if (category == ChangeCategory::TaskLevel) {
        TaskChange task;
        const auto kind = node_kind_from_string(reader.require("hasTaskKind"));
        if (!kind || !is_task_kind(*kind)) {
            throw CodecError("hasTaskKind is not a task kind");
        }
        task.task_kind = *kind;
        task.element_id = reader.require("hasElementId");
        task.op = parse_task_op(change_kind, reader);
        record.change = TaskLevelChange{std::move(task)};
        return record;
    }
    if (category == ChangeCategory::SequenceFlow) {
        record.change = SequenceFlowChange{parse_flow_change(change_kind, reader)};
        return record;
    }

    GenericChange generic = parse_generic_change(change_kind, reader);
    switch (category) {
        case ChangeCategory::Declaration:
            record.change = DeclarationChange{std::move(generic)};
            break;
        case ChangeCategory::ProcessInitialization:
            record.change = ProcessInitializationChange{std::move(generic)};
            break;
        case ChangeCategory::CustomExtension:
            record.change = CustomExtensionChange{std::move(generic)};
            break;
        case ChangeCategory::DataObject:
            record.change = DataObjectChange{std::move(generic)};
            break;
        case ChangeCategory::Gateways:
            record.change = GatewaysChange{std::move(generic)};
            break;
        case ChangeCategory::TransactionConcurrency:
            record.change = TransactionConcurrencyChange{std::move(generic)};
            break;
        case ChangeCategory::Event:
            record.change = EventChange{std::move(generic)};
            break;
        default:
            throw CodecError("unexpected category");
    }
    return record;
}

}  // namespace bpcm
