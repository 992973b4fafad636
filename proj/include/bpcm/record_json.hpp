#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "bpcm/change.hpp"
#include "bpcm/model.hpp"

namespace bpcm {

// JSON encoding shared by change-set files, journal entry lines and ontology
// snapshot literals. Keys are emitted sorted (nlohmann's default object
// order), so dump() of equal values is byte-identical. The schema is
// documented in docs/FORMATS.md. Decoders throw CodecError on any shape or
// value problem.

nlohmann::json node_to_json(const FlowNode& node);
FlowNode node_from_json(const nlohmann::json& value);

nlohmann::json flow_to_json(const SequenceFlow& flow);
SequenceFlow flow_from_json(const nlohmann::json& value);

nlohmann::json change_to_json(const ConstructChange& change);
ConstructChange change_from_json(const nlohmann::json& value);

nlohmann::json record_to_json(const ChangeRecord& record);
ChangeRecord record_from_json(const nlohmann::json& value);

nlohmann::json change_set_to_json(const ChangeSet& set);
ChangeSet change_set_from_json(const nlohmann::json& value);

// Compact single-line form of a change set (the cmd_diff file format).
std::string change_set_to_line(const ChangeSet& set);
ChangeSet change_set_from_text(std::string_view text);

}  // namespace bpcm
