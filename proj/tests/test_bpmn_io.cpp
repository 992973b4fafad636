#include <doctest.h>

#include "bpcm/bpmn_io.hpp"
#include "bpcm/errors.hpp"
#include "support/fixtures.hpp"
#include "support/model_gen.hpp"

using namespace bpcm;

TEST_CASE("the create-quote fixture parses to 4 nodes and 3 flows") {
    const ProcessModel model = parse_bpmn(serialize_bpmn(test::create_quote_fixture()));
    CHECK(model.process_id == "createQuote");
    CHECK(model.process_name == "Create Quote");
    CHECK(model.nodes.size() == 4);
    CHECK(model.flows.size() == 3);

    const auto& user = std::get<UserTaskDetail>(model.nodes.at("ut1").detail);
    CHECK(user.assignee == "alice");
    CHECK(model.nodes.at("ut1").name == "Enter Quotation");

    const auto& service = std::get<JavaServiceTaskDetail>(model.nodes.at("st1").detail);
    CHECK(service.call_type == CallType::JavaClass);
    CHECK(service.target == "com.acme.RegisterDemand");
    REQUIRE(service.field_injections.size() == 1);
    CHECK(service.field_injections[0].field_name == "inputFormat");
}

TEST_CASE("an empty process parses to empty maps and serializes to one element") {
    const ProcessModel model = parse_bpmn(
        R"(<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL">
             <process id="p1"/>
           </definitions>)");
    CHECK(model.nodes.empty());
    CHECK(model.flows.empty());

    const std::string xml = serialize_bpmn(model);
    CHECK(xml.find("<process id=\"p1\"/>") != std::string::npos);
    CHECK(model_equals(parse_bpmn(xml), model));
}

TEST_CASE("a flow to a missing node is a DanglingFlowRef error") {
    const char* text =
        R"(<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL">
             <process id="p1">
               <startEvent id="s"/>
               <sequenceFlow id="f" sourceRef="s" targetRef="ghost"/>
             </process>
           </definitions>)";
    try {
        parse_bpmn(text);
        FAIL("expected ParseError");
    } catch (const ParseError& error) {
        CHECK(error.kind() == ParseErrorKind::DanglingFlowRef);
        CHECK(error.subject() == "f");
    }
}

TEST_CASE("duplicate ids are rejected") {
    const char* text =
        R"(<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL">
             <process id="p1">
               <startEvent id="x"/>
               <endEvent id="x"/>
             </process>
           </definitions>)";
    try {
        parse_bpmn(text);
        FAIL("expected ParseError");
    } catch (const ParseError& error) {
        CHECK(error.kind() == ParseErrorKind::DuplicateId);
        CHECK(error.subject() == "x");
    }
}

TEST_CASE("unsupported elements are reported with their tag names, none dropped") {
    const char* text =
        R"(<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL">
             <process id="p1">
               <startEvent id="s"/>
               <callActivity id="c"/>
               <subProcess id="sp"/>
             </process>
           </definitions>)";
    try {
        parse_bpmn(text);
        FAIL("expected ParseError");
    } catch (const ParseError& error) {
        CHECK(error.kind() == ParseErrorKind::UnsupportedConstruct);
        CHECK(error.subject().find("callActivity") != std::string::npos);
        CHECK(error.subject().find("subProcess") != std::string::npos);
    }
}

TEST_CASE("unknown attributes on structured tasks are rejected") {
    const char* text =
        R"(<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL"
                        xmlns:activiti="http://activiti.org/bpmn">
             <process id="p1">
               <userTask id="u" activiti:mystery="x"/>
             </process>
           </definitions>)";
    CHECK_THROWS_AS(parse_bpmn(text), ParseError);
}

TEST_CASE("malformed XML surfaces as MalformedXml") {
    try {
        parse_bpmn("<definitions><process id='p'>");
        FAIL("expected ParseError");
    } catch (const ParseError& error) {
        CHECK(error.kind() == ParseErrorKind::MalformedXml);
    }
}

TEST_CASE("element order in the input does not matter") {
    const ProcessModel from_shuffled = parse_bpmn(test::create_quote_xml_shuffled());
    const ProcessModel fixture = test::create_quote_fixture();
    CHECK(model_equals(from_shuffled, fixture));
    CHECK(serialize_bpmn(from_shuffled) == serialize_bpmn(fixture));
}

TEST_CASE("serialization is canonical and deterministic") {
    const ProcessModel fixture = test::create_quote_fixture();
    CHECK(serialize_bpmn(fixture) == serialize_bpmn(fixture));

    ProcessModel copy = fixture;  // same content, separately built
    CHECK(serialize_bpmn(copy) == serialize_bpmn(fixture));
}

TEST_CASE("documentation text is preserved verbatim") {
    ProcessModel model = test::create_quote_fixture();
    std::get<UserTaskDetail>(model.nodes.at("ut1").detail).description =
        "  line one\n   line two\t(indented)\n";
    const ProcessModel reparsed = parse_bpmn(serialize_bpmn(model));
    CHECK(std::get<UserTaskDetail>(reparsed.nodes.at("ut1").detail).description ==
          "  line one\n   line two\t(indented)\n");
}

TEST_CASE("condition expressions accept and normalize xsi:type") {
    const char* text =
        R"(<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL"
                        xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance">
             <process id="p1">
               <startEvent id="a"/>
               <endEvent id="b"/>
               <sequenceFlow id="f" sourceRef="a" targetRef="b">
                 <conditionExpression xsi:type="tFormalExpression">${ok}</conditionExpression>
               </sequenceFlow>
             </process>
           </definitions>)";
    const ProcessModel model = parse_bpmn(text);
    CHECK(model.flows.at("f").condition_expression == "${ok}");
    CHECK(serialize_bpmn(model).find("xsi:type") == std::string::npos);
    CHECK(model_equals(parse_bpmn(serialize_bpmn(model)), model));
}

TEST_CASE("service task discriminators map to their kinds and round trip") {
    const char* text =
        R"(<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL"
                        xmlns:activiti="http://activiti.org/bpmn">
             <process id="p1">
               <serviceTask id="w" implementation="##WebService"/>
               <serviceTask id="m" activiti:type="mail"/>
               <serviceTask id="mu" activiti:type="mule"/>
               <serviceTask id="c" activiti:type="camel"/>
               <serviceTask id="sh" activiti:type="shell"/>
               <serviceTask id="j" activiti:class="com.example.Work"/>
             </process>
           </definitions>)";
    const ProcessModel model = parse_bpmn(text);
    CHECK(model.nodes.at("w").kind == NodeKind::WebServiceTask);
    CHECK(model.nodes.at("m").kind == NodeKind::EmailTask);
    CHECK(model.nodes.at("mu").kind == NodeKind::MuleTask);
    CHECK(model.nodes.at("c").kind == NodeKind::CamelTask);
    CHECK(model.nodes.at("sh").kind == NodeKind::ShellTask);
    CHECK(model.nodes.at("j").kind == NodeKind::JavaServiceTask);
    CHECK(model_equals(parse_bpmn(serialize_bpmn(model)), model));
}

TEST_CASE("a java service task needs exactly one invocation attribute") {
    const char* none =
        R"(<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL">
             <process id="p1"><serviceTask id="j"/></process>
           </definitions>)";
    const char* both =
        R"(<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL"
                        xmlns:activiti="http://activiti.org/bpmn">
             <process id="p1">
               <serviceTask id="j" activiti:class="A" activiti:expression="#{b}"/>
             </process>
           </definitions>)";
    CHECK_THROWS_AS(parse_bpmn(none), ParseError);
    CHECK_THROWS_AS(parse_bpmn(both), ParseError);
}

TEST_CASE("candidate lists are trimmed, reject empties and duplicates") {
    const std::string prefix =
        R"(<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL"
                        xmlns:activiti="http://activiti.org/bpmn">
             <process id="p1"><userTask id="u" activiti:candidateUsers=")";
    const std::string suffix = R"("/></process></definitions>)";

    const ProcessModel model = parse_bpmn(prefix + " alice , bob " + suffix);
    const auto& detail = std::get<UserTaskDetail>(model.nodes.at("u").detail);
    CHECK(detail.candidate_users == std::set<std::string>{"alice", "bob"});

    CHECK_THROWS_AS(parse_bpmn(prefix + "alice,,bob" + suffix), ParseError);
    CHECK_THROWS_AS(parse_bpmn(prefix + "alice,alice" + suffix), ParseError);
}

TEST_CASE("every node kind serializes to one element form and round trips") {
    ProcessModel model;
    model.process_id = "kinds";
    int i = 0;
    for (const NodeKind kind : kAllNodeKinds) {
        FlowNode node;
        node.id = "k" + std::to_string(i++);
        node.kind = kind;
        node.name = std::string(to_string(kind));
        node.detail = default_detail_for(kind);
        if (auto* service = std::get_if<JavaServiceTaskDetail>(&node.detail)) {
            service->target = "com.example.Impl";
        }
        model.nodes.emplace(node.id, std::move(node));
    }
    REQUIRE(validate_model(model).empty());
    const ProcessModel reparsed = parse_bpmn(serialize_bpmn(model));
    CHECK(model_equals(reparsed, model));
    for (const auto& [id, node] : reparsed.nodes) {
        CHECK(node.kind == model.nodes.at(id).kind);
    }
}

TEST_CASE("non-ASCII text and attribute values pass through untouched") {
    ProcessModel model = test::create_quote_fixture();
    auto& detail = std::get<UserTaskDetail>(model.nodes.at("ut1").detail);
    detail.assignee = "José";
    detail.description = "Angebot erfassen — süß & günstig";
    model.nodes.at("ut1").name = "Devis · création";
    const ProcessModel reparsed = parse_bpmn(serialize_bpmn(model));
    CHECK(model_equals(reparsed, model));
}

TEST_CASE("round trip holds over generated models") {
    test::Engine rng(20240701);
    for (int i = 0; i < 250; ++i) {
        const ProcessModel model = test::random_model(rng, 30);
        const std::string xml = serialize_bpmn(model);
        const ProcessModel reparsed = parse_bpmn(xml);
        REQUIRE(model_equals(reparsed, model));
        REQUIRE(serialize_bpmn(reparsed) == xml);
    }
}
