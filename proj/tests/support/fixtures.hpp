#pragma once

// The Create Quote process used throughout the tests: start -> user task
// "Enter Quotation" -> java service task "Register Demand" -> end. Fixture
// constants (ids, assignee, class name, injection) are documented in
// docs/FORMATS.md.

#include <string>

#include "bpcm/change.hpp"
#include "bpcm/model.hpp"

namespace bpcm::test {

inline ProcessModel create_quote_fixture() {
    ProcessModel model;
    model.process_id = "createQuote";
    model.process_name = "Create Quote";

    model.nodes.emplace("start1", FlowNode{"start1", std::nullopt, NodeKind::StartEvent,
                                           GenericDetail{}});

    UserTaskDetail enter_quotation;
    enter_quotation.assignee = "alice";
    model.nodes.emplace("ut1", FlowNode{"ut1", "Enter Quotation", NodeKind::UserTask,
                                        std::move(enter_quotation)});

    JavaServiceTaskDetail register_demand;
    register_demand.call_type = CallType::JavaClass;
    register_demand.target = "com.acme.RegisterDemand";
    register_demand.field_injections.push_back(
        FieldInjection{"inputFormat", ValueKind::StringValue, "xml"});
    model.nodes.emplace("st1", FlowNode{"st1", "Register Demand", NodeKind::JavaServiceTask,
                                        std::move(register_demand)});

    model.nodes.emplace("end1",
                        FlowNode{"end1", std::nullopt, NodeKind::EndEvent, GenericDetail{}});

    model.flows.emplace("f1", SequenceFlow{"f1", std::nullopt, "start1", "ut1", std::nullopt});
    model.flows.emplace("f2", SequenceFlow{"f2", std::nullopt, "ut1", "st1", std::nullopt});
    model.flows.emplace("f3", SequenceFlow{"f3", std::nullopt, "st1", "end1", std::nullopt});
    return model;
}

// The same process hand-written with shuffled element order, a comment and a
// vendor prefix, for canonicalization tests.
inline std::string create_quote_xml_shuffled() {
    return R"(<?xml version="1.0" encoding="UTF-8"?>
<!-- fixture with non-canonical ordering -->
<bpmn:definitions xmlns:bpmn="http://www.omg.org/spec/BPMN/20100524/MODEL"
                  xmlns:activiti="http://activiti.org/bpmn"
                  targetNamespace="http://bpcm.example.org/processes">
  <bpmn:process id="createQuote" name="Create Quote">
    <bpmn:sequenceFlow id="f3" sourceRef="st1" targetRef="end1"/>
    <bpmn:endEvent id="end1"/>
    <bpmn:serviceTask id="st1" name="Register Demand" activiti:class="com.acme.RegisterDemand">
      <bpmn:extensionElements>
        <activiti:field name="inputFormat" stringValue="xml"/>
      </bpmn:extensionElements>
    </bpmn:serviceTask>
    <bpmn:sequenceFlow id="f1" sourceRef="start1" targetRef="ut1"/>
    <bpmn:userTask id="ut1" name="Enter Quotation" activiti:assignee="alice"/>
    <bpmn:startEvent id="start1"/>
    <bpmn:sequenceFlow id="f2" sourceRef="ut1" targetRef="st1"/>
  </bpmn:process>
</bpmn:definitions>
)";
}

inline Provenance test_provenance(const std::string& agent = "alice",
                                  const std::string& cause = "test change") {
    return Provenance{agent, cause, ""};
}

}  // namespace bpcm::test
