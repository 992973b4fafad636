#include "bpcm/diff.hpp"

#include <algorithm>
#include <set>

#include "bpcm/bpmn_io.hpp"
#include "bpcm/digest.hpp"
#include "bpcm/errors.hpp"

namespace bpcm {

std::vector<UserTaskModification> field_diff_user_task(const UserTaskDetail& old_detail,
                                                       const UserTaskDetail& new_detail) {
    std::vector<UserTaskModification> out;
    if (old_detail.assignee != new_detail.assignee) {
        out.push_back(AssigneeChange{old_detail.assignee, new_detail.assignee});
    }
    if (old_detail.due_date != new_detail.due_date) {
        out.push_back(DueDateChange{old_detail.due_date, new_detail.due_date});
    }
    if (old_detail.description != new_detail.description) {
        out.push_back(DescriptionChange{old_detail.description, new_detail.description});
    }
    if (old_detail.candidate_users != new_detail.candidate_users) {
        out.push_back(
            CandidateUsersChange{old_detail.candidate_users, new_detail.candidate_users});
    }
    if (old_detail.candidate_groups != new_detail.candidate_groups) {
        out.push_back(
            CandidateGroupsChange{old_detail.candidate_groups, new_detail.candidate_groups});
    }
    if (old_detail.form_key != new_detail.form_key) {
        out.push_back(FormKeyChange{old_detail.form_key, new_detail.form_key});
    }
    return out;
}

std::vector<JavaServiceTaskModification> field_diff_service_task(
    const JavaServiceTaskDetail& old_detail, const JavaServiceTaskDetail& new_detail) {
    std::vector<JavaServiceTaskModification> out;
    if (old_detail.call_type != new_detail.call_type ||
        old_detail.target != new_detail.target) {
        out.push_back(CallTypeChange{old_detail.call_type, old_detail.target,
                                     new_detail.call_type, new_detail.target});
    }

    std::map<std::string, const FieldInjection*> old_fields;
    std::map<std::string, const FieldInjection*> new_fields;
    for (const auto& injection : old_detail.field_injections) {
        old_fields[injection.field_name] = &injection;
    }
    for (const auto& injection : new_detail.field_injections) {
        new_fields[injection.field_name] = &injection;
    }
    std::set<std::string> names;
    for (const auto& [name, unused] : old_fields) {
        names.insert(name);
    }
    for (const auto& [name, unused] : new_fields) {
        names.insert(name);
    }
    for (const auto& name : names) {
        const auto old_it = old_fields.find(name);
        const auto new_it = new_fields.find(name);
        if (old_it == old_fields.end()) {
            out.push_back(FieldInjectionAdded{*new_it->second});
        } else if (new_it == new_fields.end()) {
            out.push_back(FieldInjectionRemoved{*old_it->second});
        } else if (*old_it->second != *new_it->second) {
            out.push_back(FieldInjectionModified{name, old_it->second->value_kind,
                                                 old_it->second->value,
                                                 new_it->second->value_kind,
                                                 new_it->second->value});
        }
    }

    if (old_detail.result_variable != new_detail.result_variable) {
        out.push_back(
            ResultVariableChange{old_detail.result_variable, new_detail.result_variable});
    }
    return out;
}

namespace {

ConstructChange wrap_generic(ChangeCategory category, GenericChange change) {
    switch (category) {
        case ChangeCategory::Declaration: return DeclarationChange{std::move(change)};
        case ChangeCategory::ProcessInitialization:
            return ProcessInitializationChange{std::move(change)};
        case ChangeCategory::CustomExtension: return CustomExtensionChange{std::move(change)};
        case ChangeCategory::DataObject: return DataObjectChange{std::move(change)};
        case ChangeCategory::Gateways: return GatewaysChange{std::move(change)};
        case ChangeCategory::TransactionConcurrency:
            return TransactionConcurrencyChange{std::move(change)};
        case ChangeCategory::Event: return EventChange{std::move(change)};
        default: break;
    }
    throw Error("category has no generic payload");
}

ConstructChange node_added(const FlowNode& node) {
    if (is_task_kind(node.kind)) {
        return TaskLevelChange{TaskChange{node.kind, node.id, AddNode{node}}};
    }
    return wrap_generic(classify(node.kind), GenericChange{node.id, GenericAdded{node}});
}

ConstructChange node_removed(const FlowNode& node) {
    if (is_task_kind(node.kind)) {
        return TaskLevelChange{TaskChange{node.kind, node.id, DeleteNode{node}}};
    }
    return wrap_generic(classify(node.kind), GenericChange{node.id, GenericRemoved{node}});
}

class DiffBuilder {
public:
    DiffBuilder(const ProcessModel& old_model, const ProcessModel& new_model, Timestamp at,
                const Provenance& provenance, UlidGenerator& ids)
        : old_(old_model), new_(new_model), at_(at), provenance_(provenance), ids_(ids) {}

    std::vector<ChangeRecord> build() {
        collect_node_sets();
        collect_flow_sets();
        emit_flow_removals();
        emit_node_deletions();
        emit_node_additions();
        emit_flow_additions();
        emit_node_modifications();
        emit_flow_modifications();
        emit_process_changes();
        return std::move(records_);
    }

private:
    const ProcessModel& old_;
    const ProcessModel& new_;
    Timestamp at_;
    const Provenance& provenance_;
    UlidGenerator& ids_;
    std::vector<ChangeRecord> records_;

    std::set<std::string> deleted_nodes_;   // gone or kind-changed
    std::set<std::string> added_nodes_;     // new or kind-changed
    std::set<std::string> modified_nodes_;  // common ids, same kind
    std::set<std::string> removed_flows_;   // gone or forced remove/add
    std::set<std::string> added_flows_;
    std::set<std::string> modified_flows_;  // common ids, field-level diff

    void emit(ConstructChange change) {
        records_.push_back(ChangeRecord{ids_.next(at_), at_, provenance_, std::move(change)});
    }

    void collect_node_sets() {
        for (const auto& [id, node] : old_.nodes) {
            const auto other = new_.nodes.find(id);
            if (other == new_.nodes.end()) {
                deleted_nodes_.insert(id);
            } else if (other->second.kind != node.kind) {
                // A kind change is not expressible as a modification.
                deleted_nodes_.insert(id);
                added_nodes_.insert(id);
            } else {
                modified_nodes_.insert(id);
            }
        }
        for (const auto& [id, node] : new_.nodes) {
            if (old_.nodes.count(id) == 0) {
                added_nodes_.insert(id);
            }
        }
    }

    void collect_flow_sets() {
        for (const auto& [id, flow] : old_.flows) {
            const auto other = new_.flows.find(id);
            if (other == new_.flows.end()) {
                removed_flows_.insert(id);
                continue;
            }
            // A surviving flow whose old endpoint is being deleted must be
            // removed first and re-added after the node churn, or the
            // deletion would leave it dangling mid-apply.
            if (deleted_nodes_.count(flow.source_ref) != 0 ||
                deleted_nodes_.count(flow.target_ref) != 0) {
                removed_flows_.insert(id);
                added_flows_.insert(id);
            } else if (flow != other->second) {
                modified_flows_.insert(id);
            }
        }
        for (const auto& [id, flow] : new_.flows) {
            if (old_.flows.count(id) == 0) {
                added_flows_.insert(id);
            }
        }
    }

    void emit_flow_removals() {
        for (const auto& id : removed_flows_) {
            emit(SequenceFlowChange{FlowRemoved{old_.flows.at(id)}});
        }
    }

    void emit_node_deletions() {
        for (const auto& id : deleted_nodes_) {
            emit(node_removed(old_.nodes.at(id)));
        }
    }

    void emit_node_additions() {
        for (const auto& id : added_nodes_) {
            emit(node_added(new_.nodes.at(id)));
        }
    }

    void emit_flow_additions() {
        for (const auto& id : added_flows_) {
            emit(SequenceFlowChange{FlowAdded{new_.flows.at(id)}});
        }
    }

    void emit_node_modifications() {
        for (const auto& id : modified_nodes_) {
            const FlowNode& old_node = old_.nodes.at(id);
            const FlowNode& new_node = new_.nodes.at(id);
            if (is_task_kind(old_node.kind)) {
                emit_task_modifications(old_node, new_node);
            } else {
                emit_generic_modifications(old_node, new_node);
            }
        }
    }

    void emit_task_modifications(const FlowNode& old_node, const FlowNode& new_node) {
        const NodeKind kind = old_node.kind;
        const auto task = [&](TaskOp op) {
            emit(TaskLevelChange{TaskChange{kind, old_node.id, std::move(op)}});
        };
        if (old_node.name != new_node.name) {
            task(RenameNode{old_node.name, new_node.name});
        }
        if (kind == NodeKind::UserTask) {
            const auto& old_detail = std::get<UserTaskDetail>(old_node.detail);
            const auto& new_detail = std::get<UserTaskDetail>(new_node.detail);
            for (auto& modification : field_diff_user_task(old_detail, new_detail)) {
                task(ModifyUserTask{std::move(modification)});
            }
        } else if (kind == NodeKind::JavaServiceTask) {
            const auto& old_detail = std::get<JavaServiceTaskDetail>(old_node.detail);
            const auto& new_detail = std::get<JavaServiceTaskDetail>(new_node.detail);
            for (auto& modification : field_diff_service_task(old_detail, new_detail)) {
                task(ModifyJavaServiceTask{std::move(modification)});
            }
        } else {
            const auto& old_detail = std::get<GenericDetail>(old_node.detail);
            const auto& new_detail = std::get<GenericDetail>(new_node.detail);
            for (auto& [attribute, values] : attribute_diff(old_detail, new_detail)) {
                task(ModifyGenericAttr{attribute, values.first, values.second});
            }
        }
    }

    void emit_generic_modifications(const FlowNode& old_node, const FlowNode& new_node) {
        const ChangeCategory category = classify(old_node.kind);
        const auto generic = [&](GenericModified op) {
            emit(wrap_generic(category, GenericChange{old_node.id, std::move(op)}));
        };
        if (old_node.name != new_node.name) {
            generic(GenericModified{"name", old_node.name, new_node.name});
        }
        const auto& old_detail = std::get<GenericDetail>(old_node.detail);
        const auto& new_detail = std::get<GenericDetail>(new_node.detail);
        for (auto& [attribute, values] : attribute_diff(old_detail, new_detail)) {
            generic(GenericModified{attribute, values.first, values.second});
        }
    }

    using OptionalPair = std::pair<std::optional<std::string>, std::optional<std::string>>;

    static std::vector<std::pair<std::string, OptionalPair>> attribute_diff(
        const GenericDetail& old_detail, const GenericDetail& new_detail) {
        std::vector<std::pair<std::string, OptionalPair>> out;
        std::set<std::string> keys;
        for (const auto& [key, value] : old_detail.attributes) {
            keys.insert(key);
        }
        for (const auto& [key, value] : new_detail.attributes) {
            keys.insert(key);
        }
        for (const auto& key : keys) {
            const auto old_it = old_detail.attributes.find(key);
            const auto new_it = new_detail.attributes.find(key);
            std::optional<std::string> old_value;
            std::optional<std::string> new_value;
            if (old_it != old_detail.attributes.end()) {
                old_value = old_it->second;
            }
            if (new_it != new_detail.attributes.end()) {
                new_value = new_it->second;
            }
            if (old_value != new_value) {
                out.push_back({key, {std::move(old_value), std::move(new_value)}});
            }
        }
        return out;
    }

    void emit_flow_modifications() {
        for (const auto& id : modified_flows_) {
            const SequenceFlow& old_flow = old_.flows.at(id);
            const SequenceFlow& new_flow = new_.flows.at(id);
            const auto flow = [&](FlowAttribute attribute, std::optional<std::string> old_value,
                                  std::optional<std::string> new_value) {
                emit(SequenceFlowChange{FlowModified{id, attribute, std::move(old_value),
                                                     std::move(new_value)}});
            };
            if (old_flow.name != new_flow.name) {
                flow(FlowAttribute::Name, old_flow.name, new_flow.name);
            }
            if (old_flow.source_ref != new_flow.source_ref) {
                flow(FlowAttribute::SourceRef, old_flow.source_ref, new_flow.source_ref);
            }
            if (old_flow.target_ref != new_flow.target_ref) {
                flow(FlowAttribute::TargetRef, old_flow.target_ref, new_flow.target_ref);
            }
            if (old_flow.condition_expression != new_flow.condition_expression) {
                flow(FlowAttribute::ConditionExpression, old_flow.condition_expression,
                     new_flow.condition_expression);
            }
        }
    }

    void emit_process_changes() {
        if (old_.process_id != new_.process_id) {
            emit(DeclarationChange{GenericChange{
                old_.process_id,
                GenericModified{"id", old_.process_id, new_.process_id}}});
        }
        if (old_.process_name != new_.process_name) {
            // After an id change the process is already addressed by its new id.
            emit(DeclarationChange{GenericChange{
                new_.process_id,
                GenericModified{"name", old_.process_name, new_.process_name}}});
        }
    }
};

std::uint64_t seed_for(const Timestamp& at, const ProcessModel& old_model,
                       const ProcessModel& new_model, const Provenance& provenance) {
    const std::string digest =
        sha256_hex(at.to_string() + '\n' + serialize_bpmn(old_model) +
                   serialize_bpmn(new_model) + provenance.agent_name + '\n' +
                   provenance.cause + '\n' + provenance.description);
    return std::stoull(digest.substr(0, 16), nullptr, 16);
}

}  // namespace

ChangeSet diff(const DiffRequest& request) {
    require_valid(request.old_model);
    require_valid(request.new_model);
    if (request.provenance.agent_name.empty() || request.provenance.cause.empty()) {
        throw InvalidModelError({"diff provenance needs an agent name and a cause"});
    }

    const ProcessModel old_model = normalized(request.old_model);
    const ProcessModel new_model = normalized(request.new_model);
    const auto clock = request.clock ? request.clock : system_clock();
    const Timestamp at = clock->now();

    UlidGenerator ids(seed_for(at, old_model, new_model, request.provenance));
    ChangeSet set;
    set.set_id = ids.next(at);
    set.records = DiffBuilder(old_model, new_model, at, request.provenance, ids).build();
    return set;
}

}  // namespace bpcm
