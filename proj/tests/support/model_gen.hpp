#pragma once

// Seeded random process models and random valid edits, used by the property
// and acceptance suites. Everything is deterministic for a given seed.

#include <algorithm>
#include <cassert>
#include <random>
#include <string>
#include <vector>

#include "bpcm/model.hpp"

namespace bpcm::test {

using Engine = std::mt19937_64;

inline int below(Engine& rng, int n) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

inline bool chance(Engine& rng, int percent) {
    return below(rng, 100) < percent;
}

inline std::string pick_word(Engine& rng) {
    static const std::vector<std::string> kWords = {
        "alice", "bob",   "carol",  "dave",   "erin",   "frank",
        "sales", "ops",   "review", "intake", "quote",  "demand",
        "north", "south", "daily",  "weekly", "urgent", "batch",
    };
    return kWords[static_cast<std::size_t>(below(rng, static_cast<int>(kWords.size())))];
}

inline NodeKind pick_kind(Engine& rng) {
    // User and java service tasks carry structured detail, keep them frequent.
    const int roll = below(rng, 100);
    if (roll < 25) return NodeKind::UserTask;
    if (roll < 50) return NodeKind::JavaServiceTask;
    constexpr NodeKind kRest[] = {
        NodeKind::StartEvent,      NodeKind::EndEvent,        NodeKind::IntermediateEvent,
        NodeKind::WebServiceTask,  NodeKind::ScriptTask,      NodeKind::EmailTask,
        NodeKind::JavaReceiveTask, NodeKind::BusinessRuleTask, NodeKind::MuleTask,
        NodeKind::ManualTask,      NodeKind::ShellTask,       NodeKind::CamelTask,
        NodeKind::ExclusiveGateway, NodeKind::ParallelGateway, NodeKind::DataObject,
    };
    return kRest[static_cast<std::size_t>(below(rng, 15))];
}

inline NodeDetail random_detail(Engine& rng, NodeKind kind) {
    if (kind == NodeKind::UserTask) {
        UserTaskDetail detail;
        if (chance(rng, 70)) detail.assignee = pick_word(rng);
        for (int i = below(rng, 3); i > 0; --i) detail.candidate_users.insert(pick_word(rng));
        for (int i = below(rng, 3); i > 0; --i) detail.candidate_groups.insert(pick_word(rng));
        if (chance(rng, 40)) detail.due_date = "2024-0" + std::to_string(1 + below(rng, 9)) +
                                               "-15";
        if (chance(rng, 40)) detail.description = "Handles " + pick_word(rng) + " work";
        if (chance(rng, 30)) detail.form_key = "form:" + pick_word(rng);
        return detail;
    }
    if (kind == NodeKind::JavaServiceTask) {
        JavaServiceTaskDetail detail;
        const int call = below(rng, 3);
        if (call == 0) {
            detail.call_type = CallType::JavaClass;
            detail.target = "com.example." + pick_word(rng);
        } else if (call == 1) {
            detail.call_type = CallType::DelegateExpression;
            detail.target = "${" + pick_word(rng) + "Delegate}";
        } else {
            detail.call_type = CallType::Expression;
            detail.target = "#{" + pick_word(rng) + ".run()}";
        }
        const int injections = below(rng, 4);
        for (int i = 0; i < injections; ++i) {
            FieldInjection injection;
            injection.field_name = "field" + std::to_string(i);
            if (chance(rng, 50)) {
                injection.value_kind = ValueKind::StringValue;
                injection.value = pick_word(rng);
            } else {
                injection.value_kind = ValueKind::ExpressionValue;
                injection.value = "${" + pick_word(rng) + "}";
            }
            detail.field_injections.push_back(std::move(injection));
        }
        if (chance(rng, 40)) detail.result_variable = pick_word(rng) + "Result";
        return detail;
    }
    GenericDetail detail;
    static const std::vector<std::string> kKeys = {"activiti:async", "activiti:priority",
                                                   "category", "customAttr"};
    for (int i = below(rng, 3); i > 0; --i) {
        detail.attributes[kKeys[static_cast<std::size_t>(
            below(rng, static_cast<int>(kKeys.size())))]] = pick_word(rng);
    }
    return detail;
}

inline ProcessModel random_model(Engine& rng, int max_nodes) {
    ProcessModel model;
    model.process_id = "proc" + std::to_string(below(rng, 1000));
    if (chance(rng, 70)) model.process_name = pick_word(rng) + " process";

    const int nodes = 1 + below(rng, max_nodes);
    for (int i = 0; i < nodes; ++i) {
        FlowNode node;
        node.id = "n" + std::to_string(i);
        node.kind = pick_kind(rng);
        if (chance(rng, 70)) node.name = pick_word(rng) + " " + std::to_string(i);
        node.detail = random_detail(rng, node.kind);
        model.nodes.emplace(node.id, std::move(node));
    }

    std::vector<std::string> node_ids;
    for (const auto& [id, node] : model.nodes) node_ids.push_back(id);
    const int flows = below(rng, nodes * 3 / 2 + 1);
    for (int i = 0; i < flows; ++i) {
        SequenceFlow flow;
        flow.id = "e" + std::to_string(i);
        flow.source_ref = node_ids[static_cast<std::size_t>(
            below(rng, static_cast<int>(node_ids.size())))];
        flow.target_ref = node_ids[static_cast<std::size_t>(
            below(rng, static_cast<int>(node_ids.size())))];
        if (chance(rng, 20)) flow.condition_expression = "${amount > " +
                                                         std::to_string(below(rng, 500)) + "}";
        if (chance(rng, 20)) flow.name = pick_word(rng);
        model.flows.emplace(flow.id, std::move(flow));
    }
    const auto violations = validate_model(model);
    assert(violations.empty());
    return normalized(std::move(model));
}

inline std::string fresh_node_id(Engine& rng, const ProcessModel& model) {
    for (;;) {
        std::string id = "n" + std::to_string(below(rng, 10000));
        if (model.nodes.count(id) == 0 && model.flows.count(id) == 0) return id;
    }
}

inline std::string fresh_flow_id(Engine& rng, const ProcessModel& model) {
    for (;;) {
        std::string id = "e" + std::to_string(below(rng, 10000));
        if (model.nodes.count(id) == 0 && model.flows.count(id) == 0) return id;
    }
}

inline const std::string& pick_node_id(Engine& rng, const ProcessModel& model) {
    auto it = model.nodes.begin();
    std::advance(it, below(rng, static_cast<int>(model.nodes.size())));
    return it->first;
}

// One random valid edit; returns false when the chosen edit is not possible
// on this model (caller retries with the next roll).
inline bool mutate_once(Engine& rng, ProcessModel& model) {
    switch (below(rng, 11)) {
        case 0: {  // process name
            model.process_name = chance(rng, 20)
                                     ? std::optional<std::string>()
                                     : std::optional<std::string>(pick_word(rng) + " renamed");
            return true;
        }
        case 1: {  // add node
            FlowNode node;
            node.id = fresh_node_id(rng, model);
            node.kind = pick_kind(rng);
            if (chance(rng, 70)) node.name = pick_word(rng);
            node.detail = random_detail(rng, node.kind);
            model.nodes.emplace(node.id, std::move(node));
            return true;
        }
        case 2: {  // delete node and its incident flows
            if (model.nodes.empty()) return false;
            const std::string id = pick_node_id(rng, model);
            for (auto it = model.flows.begin(); it != model.flows.end();) {
                if (it->second.source_ref == id || it->second.target_ref == id) {
                    it = model.flows.erase(it);
                } else {
                    ++it;
                }
            }
            model.nodes.erase(id);
            return true;
        }
        case 3: {  // rename node
            if (model.nodes.empty()) return false;
            FlowNode& node = model.nodes.at(pick_node_id(rng, model));
            node.name = chance(rng, 20)
                            ? std::optional<std::string>()
                            : std::optional<std::string>(pick_word(rng) + " task");
            return true;
        }
        case 4: {  // replace a node's detail with fresh values
            if (model.nodes.empty()) return false;
            FlowNode& node = model.nodes.at(pick_node_id(rng, model));
            node.detail = random_detail(rng, node.kind);
            return true;
        }
        case 5: {  // node kind change (reported as delete+add)
            if (model.nodes.empty()) return false;
            FlowNode& node = model.nodes.at(pick_node_id(rng, model));
            const NodeKind kind = pick_kind(rng);
            if (kind == node.kind) return false;
            node.kind = kind;
            node.detail = random_detail(rng, kind);
            return true;
        }
        case 6: {  // add flow
            if (model.nodes.empty()) return false;
            SequenceFlow flow;
            flow.id = fresh_flow_id(rng, model);
            flow.source_ref = pick_node_id(rng, model);
            flow.target_ref = pick_node_id(rng, model);
            if (chance(rng, 20)) flow.name = pick_word(rng);
            model.flows.emplace(flow.id, std::move(flow));
            return true;
        }
        case 7: {  // remove flow
            if (model.flows.empty()) return false;
            auto it = model.flows.begin();
            std::advance(it, below(rng, static_cast<int>(model.flows.size())));
            model.flows.erase(it);
            return true;
        }
        case 8: {  // retarget flow
            if (model.flows.empty() || model.nodes.empty()) return false;
            auto it = model.flows.begin();
            std::advance(it, below(rng, static_cast<int>(model.flows.size())));
            if (chance(rng, 50)) {
                it->second.source_ref = pick_node_id(rng, model);
            } else {
                it->second.target_ref = pick_node_id(rng, model);
            }
            return true;
        }
        case 9: {  // flow condition or name
            if (model.flows.empty()) return false;
            auto it = model.flows.begin();
            std::advance(it, below(rng, static_cast<int>(model.flows.size())));
            if (chance(rng, 50)) {
                it->second.condition_expression =
                    chance(rng, 30) ? std::optional<std::string>()
                                    : std::optional<std::string>(
                                          "${total >= " + std::to_string(below(rng, 100)) +
                                          "}");
            } else {
                it->second.name = std::optional<std::string>(pick_word(rng));
            }
            return true;
        }
        default: {  // process id change (rare but representable)
            if (!chance(rng, 10)) return false;
            model.process_id = "proc" + std::to_string(below(rng, 10000));
            return true;
        }
    }
}

inline ProcessModel mutate(Engine& rng, const ProcessModel& input, int edits) {
    ProcessModel model = input;
    int applied = 0;
    int attempts = 0;
    while (applied < edits && attempts < edits * 20) {
        ++attempts;
        if (mutate_once(rng, model)) {
            ++applied;
        }
    }
    const auto violations = validate_model(model);
    assert(violations.empty());
    return normalized(std::move(model));
}

}  // namespace bpcm::test
