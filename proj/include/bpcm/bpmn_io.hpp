#pragma once

#include <string>
#include <string_view>

#include "bpcm/model.hpp"

namespace bpcm {

inline constexpr std::string_view kBpmnModelNs = "http://www.omg.org/spec/BPMN/20100524/MODEL";
inline constexpr std::string_view kXsiNs = "http://www.w3.org/2001/XMLSchema-instance";
inline constexpr std::string_view kTargetNamespace = "http://bpcm.example.org/processes";

// The engine-extension namespace holding vendor attributes (assignee,
// dueDate, class, ...). The canonical prefix is always "activiti"; only the
// URI is configurable.
struct BpmnDialect {
    std::string vendor_ns = "http://activiti.org/bpmn";
};

// Reads one process from BPMN 2.0 XML into the canonical model. Strict over
// the declared subset: anything else raises a structured ParseError, nothing
// is dropped silently. The grammar is documented in docs/FORMATS.md.
ProcessModel parse_bpmn(std::string_view xml_text, const BpmnDialect& dialect = {});

// Canonical BPMN serialization: elements ordered by kind group (events,
// tasks, gateways, data objects, flows) then lexicographically by id, fixed
// attribute order, two-space indent. Byte-stable for model_equals-equal
// inputs. The model must satisfy its invariants.
std::string serialize_bpmn(const ProcessModel& model, const BpmnDialect& dialect = {});

}  // namespace bpcm
