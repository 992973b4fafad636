#include "bpcm/bpmn_io.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "bpcm/errors.hpp"
#include "bpcm/xml.hpp"

namespace bpcm {

namespace {

constexpr std::string_view kXmlNs = "http://www.w3.org/XML/1998/namespace";

struct QName {
    std::string ns;
    std::string local;
};

// Prefix-to-URI environment built while walking the element tree.
class NsScope {
public:
    void push(const xml::Element& element) {
        std::map<std::string, std::string> bindings;
        for (const auto& [key, value] : element.attributes) {
            if (key == "xmlns") {
                bindings[""] = value;
            } else if (key.rfind("xmlns:", 0) == 0) {
                bindings[key.substr(6)] = value;
            }
        }
        stack_.push_back(std::move(bindings));
    }

    void pop() { stack_.pop_back(); }

    std::optional<std::string> resolve(const std::string& prefix) const {
        if (prefix == "xml") {
            return std::string(kXmlNs);
        }
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
            const auto found = it->find(prefix);
            if (found != it->end()) {
                return found->second;
            }
        }
        if (prefix.empty()) {
            return std::string();  // no default namespace in scope
        }
        return std::nullopt;
    }

private:
    std::vector<std::map<std::string, std::string>> stack_;
};

std::pair<std::string, std::string> split_prefix(const std::string& name) {
    const auto colon = name.find(':');
    if (colon == std::string::npos) {
        return {std::string(), name};
    }
    return {name.substr(0, colon), name.substr(colon + 1)};
}

bool is_namespace_binding(const std::string& attr_name) {
    return attr_name == "xmlns" || attr_name.rfind("xmlns:", 0) == 0;
}

class BpmnReader {
public:
    explicit BpmnReader(const BpmnDialect& dialect) : dialect_(dialect) {}

    ProcessModel read(std::string_view xml_text) {
        xml::Document doc;
        try {
            doc = xml::parse(xml_text);
        } catch (const xml::XmlError& error) {
            throw ParseError(ParseErrorKind::MalformedXml, "", error.line(), error.what());
        }
        return read_definitions(doc.root);
    }

private:
    const BpmnDialect& dialect_;
    NsScope scope_;

    QName element_name(const xml::Element& element) const {
        const auto [prefix, local] = split_prefix(element.name);
        const auto ns = scope_.resolve(prefix);
        if (!ns) {
            throw ParseError(ParseErrorKind::MalformedXml, element.name, element.line,
                             "unbound namespace prefix '" + prefix + "'");
        }
        return {*ns, local};
    }

    QName attribute_name(const std::string& name, const xml::Element& element) const {
        const auto [prefix, local] = split_prefix(name);
        if (prefix.empty()) {
            return {std::string(), local};  // attributes have no default namespace
        }
        const auto ns = scope_.resolve(prefix);
        if (!ns) {
            throw ParseError(ParseErrorKind::MalformedXml, name, element.line,
                             "unbound namespace prefix '" + prefix + "'");
        }
        return {*ns, local};
    }

    bool in_bpmn_ns(const QName& name) const {
        return name.ns.empty() || name.ns == kBpmnModelNs;
    }

    [[noreturn]] void unsupported(const xml::Element& element, const std::string& subject,
                                  const std::string& what) const {
        throw ParseError(ParseErrorKind::UnsupportedConstruct, subject, element.line, what);
    }

    [[noreturn]] void invalid(const xml::Element& element, const std::string& subject,
                              const std::string& what) const {
        throw ParseError(ParseErrorKind::InvalidElement, subject, element.line, what);
    }

    void forbid_content_text(const xml::Element& element, const std::string& tag) const {
        if (element.has_content_text()) {
            invalid(element, tag, "unexpected text content");
        }
    }

    ProcessModel read_definitions(const xml::Element& root) {
        scope_.push(root);
        const QName root_name = element_name(root);
        if (root_name.local != "definitions" || !in_bpmn_ns(root_name)) {
            unsupported(root, root.name, "expected a BPMN definitions root element");
        }
        forbid_content_text(root, "definitions");

        const xml::Element* process = nullptr;
        std::string extra_tags;
        for (const auto& child : root.children) {
            scope_.push(child);
            const QName child_name = element_name(child);
            scope_.pop();
            if (child_name.local == "process" && in_bpmn_ns(child_name)) {
                if (process != nullptr) {
                    invalid(child, "process", "more than one process element");
                }
                process = &child;
            } else {
                if (!extra_tags.empty()) {
                    extra_tags += ", ";
                }
                extra_tags += child.name;
            }
        }
        if (!extra_tags.empty()) {
            throw ParseError(ParseErrorKind::UnsupportedConstruct, extra_tags, root.line,
                             "unsupported elements inside definitions");
        }
        if (process == nullptr) {
            invalid(root, "definitions", "no process element");
        }

        scope_.push(*process);
        ProcessModel model = read_process(*process);
        scope_.pop();
        scope_.pop();
        return model;
    }

    ProcessModel read_process(const xml::Element& process) {
        ProcessModel model;
        forbid_content_text(process, "process");
        for (const auto& [raw_name, value] : process.attributes) {
            if (is_namespace_binding(raw_name)) {
                continue;
            }
            const QName attr = attribute_name(raw_name, process);
            if (attr.ns.empty() && attr.local == "id") {
                model.process_id = value;
            } else if (attr.ns.empty() && attr.local == "name") {
                model.process_name = value;
            } else {
                unsupported(process, "process/@" + raw_name, "unsupported process attribute");
            }
        }
        if (model.process_id.empty()) {
            invalid(process, "process", "missing or empty id attribute");
        }

        std::string unsupported_tags;
        for (const auto& child : process.children) {
            scope_.push(child);
            const QName name = element_name(child);
            if (!in_bpmn_ns(name)) {
                scope_.pop();
                if (!unsupported_tags.empty()) {
                    unsupported_tags += ", ";
                }
                unsupported_tags += child.name;
                continue;
            }
            if (name.local == "sequenceFlow") {
                add_flow(model, read_flow(child));
            } else if (const auto kind = kind_for_element(name.local, child)) {
                add_node(model, read_node(child, *kind));
            } else {
                scope_.pop();
                if (!unsupported_tags.empty()) {
                    unsupported_tags += ", ";
                }
                unsupported_tags += child.name;
                continue;
            }
            scope_.pop();
        }
        if (!unsupported_tags.empty()) {
            throw ParseError(ParseErrorKind::UnsupportedConstruct, unsupported_tags,
                             process.line, "unsupported elements inside process");
        }

        check_flow_refs(model);
        return normalized(std::move(model));
    }

    // Maps an element local name to a node kind; serviceTask picks the final
    // kind later from its discriminator attributes.
    std::optional<NodeKind> kind_for_element(const std::string& local,
                                             const xml::Element& element) const {
        if (local == "startEvent") return NodeKind::StartEvent;
        if (local == "endEvent") return NodeKind::EndEvent;
        if (local == "intermediateThrowEvent") return NodeKind::IntermediateEvent;
        if (local == "userTask") return NodeKind::UserTask;
        if (local == "serviceTask") return service_task_kind(element);
        if (local == "scriptTask") return NodeKind::ScriptTask;
        if (local == "receiveTask") return NodeKind::JavaReceiveTask;
        if (local == "businessRuleTask") return NodeKind::BusinessRuleTask;
        if (local == "manualTask") return NodeKind::ManualTask;
        if (local == "exclusiveGateway") return NodeKind::ExclusiveGateway;
        if (local == "parallelGateway") return NodeKind::ParallelGateway;
        if (local == "dataObject") return NodeKind::DataObject;
        return std::nullopt;
    }

    NodeKind service_task_kind(const xml::Element& element) const {
        std::optional<std::string> vendor_type;
        std::optional<std::string> implementation;
        for (const auto& [raw_name, value] : element.attributes) {
            if (is_namespace_binding(raw_name)) {
                continue;
            }
            const QName attr = attribute_name(raw_name, element);
            if (attr.ns == dialect_.vendor_ns && attr.local == "type") {
                vendor_type = value;
            } else if (attr.ns.empty() && attr.local == "implementation") {
                implementation = value;
            }
        }
        if (vendor_type && implementation) {
            invalid(element, "serviceTask",
                    "both a vendor type and an implementation attribute");
        }
        if (implementation) {
            if (*implementation != "##WebService") {
                invalid(element, "serviceTask/@implementation",
                        "unsupported implementation '" + *implementation + "'");
            }
            return NodeKind::WebServiceTask;
        }
        if (vendor_type) {
            if (*vendor_type == "mail") return NodeKind::EmailTask;
            if (*vendor_type == "mule") return NodeKind::MuleTask;
            if (*vendor_type == "camel") return NodeKind::CamelTask;
            if (*vendor_type == "shell") return NodeKind::ShellTask;
            invalid(element, "serviceTask/@activiti:type",
                    "unsupported task type '" + *vendor_type + "'");
        }
        return NodeKind::JavaServiceTask;
    }

    struct CommonAttrs {
        std::string id;
        std::optional<std::string> name;
        // Remaining attributes: (raw name, resolved, value).
        std::vector<std::pair<QName, std::pair<std::string, std::string>>> rest;
    };

    CommonAttrs read_common_attrs(const xml::Element& element, const std::string& tag) const {
        CommonAttrs out;
        for (const auto& [raw_name, value] : element.attributes) {
            if (is_namespace_binding(raw_name)) {
                continue;
            }
            const QName attr = attribute_name(raw_name, element);
            if (attr.ns.empty() && attr.local == "id") {
                out.id = value;
            } else if (attr.ns.empty() && attr.local == "name") {
                out.name = value;
            } else {
                out.rest.push_back({attr, {raw_name, value}});
            }
        }
        if (out.id.empty()) {
            invalid(element, tag, "missing or empty id attribute");
        }
        return out;
    }

    FlowNode read_node(const xml::Element& element, NodeKind kind) {
        switch (kind) {
            case NodeKind::UserTask: return read_user_task(element);
            case NodeKind::JavaServiceTask: return read_java_service_task(element);
            default: return read_generic_node(element, kind);
        }
    }

    FlowNode read_user_task(const xml::Element& element) {
        CommonAttrs common = read_common_attrs(element, "userTask");
        forbid_content_text(element, "userTask");
        UserTaskDetail detail;
        for (const auto& [attr, raw] : common.rest) {
            const auto& [raw_name, value] = raw;
            if (attr.ns != dialect_.vendor_ns) {
                unsupported(element, "userTask/@" + raw_name, "unsupported attribute");
            }
            if (attr.local == "assignee") {
                detail.assignee = value;
            } else if (attr.local == "candidateUsers") {
                detail.candidate_users = parse_candidates(element, "userTask", value);
            } else if (attr.local == "candidateGroups") {
                detail.candidate_groups = parse_candidates(element, "userTask", value);
            } else if (attr.local == "dueDate") {
                detail.due_date = value;
            } else if (attr.local == "formKey") {
                detail.form_key = value;
            } else {
                unsupported(element, "userTask/@" + raw_name, "unsupported attribute");
            }
        }
        for (const auto& child : element.children) {
            scope_.push(child);
            const QName name = element_name(child);
            if (name.local == "documentation" && in_bpmn_ns(name)) {
                if (detail.description) {
                    invalid(child, "documentation", "more than one documentation element");
                }
                if (!child.children.empty()) {
                    unsupported(child, "documentation", "child elements inside documentation");
                }
                detail.description = child.text;
            } else {
                unsupported(child, child.name, "unsupported element inside userTask");
            }
            scope_.pop();
        }
        return FlowNode{common.id, common.name, NodeKind::UserTask, std::move(detail)};
    }

    std::set<std::string> parse_candidates(const xml::Element& element, const std::string& tag,
                                           const std::string& value) const {
        std::set<std::string> out;
        std::size_t start = 0;
        while (start <= value.size()) {
            auto end = value.find(',', start);
            if (end == std::string::npos) {
                end = value.size();
            }
            std::string token = value.substr(start, end - start);
            const auto first = token.find_first_not_of(" \t");
            const auto last = token.find_last_not_of(" \t");
            token = (first == std::string::npos) ? std::string()
                                                 : token.substr(first, last - first + 1);
            if (token.empty()) {
                invalid(element, tag, "empty entry in candidate list '" + value + "'");
            }
            if (!out.insert(token).second) {
                invalid(element, tag, "duplicate entry '" + token + "' in candidate list");
            }
            start = end + 1;
        }
        return out;
    }

    FlowNode read_java_service_task(const xml::Element& element) {
        CommonAttrs common = read_common_attrs(element, "serviceTask");
        forbid_content_text(element, "serviceTask");
        JavaServiceTaskDetail detail;
        int invocation_attrs = 0;
        for (const auto& [attr, raw] : common.rest) {
            const auto& [raw_name, value] = raw;
            if (attr.ns != dialect_.vendor_ns) {
                unsupported(element, "serviceTask/@" + raw_name, "unsupported attribute");
            }
            if (attr.local == "class") {
                detail.call_type = CallType::JavaClass;
                detail.target = value;
                ++invocation_attrs;
            } else if (attr.local == "delegateExpression") {
                detail.call_type = CallType::DelegateExpression;
                detail.target = value;
                ++invocation_attrs;
            } else if (attr.local == "expression") {
                detail.call_type = CallType::Expression;
                detail.target = value;
                ++invocation_attrs;
            } else if (attr.local == "resultVariableName") {
                detail.result_variable = value;
            } else {
                unsupported(element, "serviceTask/@" + raw_name, "unsupported attribute");
            }
        }
        if (invocation_attrs != 1 || detail.target.empty()) {
            invalid(element, "serviceTask",
                    "a java service task needs exactly one non-empty invocation attribute "
                    "(class, delegateExpression or expression)");
        }
        for (const auto& child : element.children) {
            scope_.push(child);
            const QName name = element_name(child);
            if (name.local == "extensionElements" && in_bpmn_ns(name)) {
                read_field_injections(child, detail);
            } else {
                unsupported(child, child.name, "unsupported element inside serviceTask");
            }
            scope_.pop();
        }
        return FlowNode{common.id, common.name, NodeKind::JavaServiceTask, std::move(detail)};
    }

    void read_field_injections(const xml::Element& extension, JavaServiceTaskDetail& detail) {
        forbid_content_text(extension, "extensionElements");
        for (const auto& child : extension.children) {
            scope_.push(child);
            const QName name = element_name(child);
            if (name.local != "field" || name.ns != dialect_.vendor_ns) {
                unsupported(child, child.name, "unsupported element inside extensionElements");
            }
            forbid_content_text(child, "field");
            if (!child.children.empty()) {
                unsupported(child, "field", "child elements inside a field injection");
            }
            FieldInjection injection;
            bool has_value = false;
            for (const auto& [raw_name, value] : child.attributes) {
                if (is_namespace_binding(raw_name)) {
                    continue;
                }
                const QName attr = attribute_name(raw_name, child);
                if (!attr.ns.empty()) {
                    unsupported(child, "field/@" + raw_name, "unsupported attribute");
                }
                if (attr.local == "name") {
                    injection.field_name = value;
                } else if (attr.local == "stringValue") {
                    injection.value_kind = ValueKind::StringValue;
                    injection.value = value;
                    has_value = true;
                } else if (attr.local == "expression") {
                    injection.value_kind = ValueKind::ExpressionValue;
                    injection.value = value;
                    has_value = true;
                } else {
                    unsupported(child, "field/@" + raw_name, "unsupported attribute");
                }
            }
            if (injection.field_name.empty() || !has_value) {
                invalid(child, "field",
                        "a field injection needs a name and exactly one of "
                        "stringValue or expression");
            }
            for (const auto& existing : detail.field_injections) {
                if (existing.field_name == injection.field_name) {
                    invalid(child, "field",
                            "duplicate field injection '" + injection.field_name + "'");
                }
            }
            detail.field_injections.push_back(std::move(injection));
            scope_.pop();
        }
    }

    FlowNode read_generic_node(const xml::Element& element, NodeKind kind) {
        const std::string tag = element.name;
        CommonAttrs common = read_common_attrs(element, tag);
        forbid_content_text(element, tag);
        if (!element.children.empty()) {
            unsupported(element, element.children.front().name,
                        "unsupported element inside " + tag);
        }
        GenericDetail detail;
        for (const auto& [attr, raw] : common.rest) {
            const auto& [raw_name, value] = raw;
            std::string key;
            if (attr.ns.empty()) {
                if (attr.local == "implementation" && kind == NodeKind::WebServiceTask) {
                    continue;  // discriminator, re-emitted from the kind
                }
                key = attr.local;
            } else if (attr.ns == dialect_.vendor_ns) {
                if (attr.local == "type") {
                    continue;  // discriminator, re-emitted from the kind
                }
                key = "activiti:" + attr.local;
            } else {
                unsupported(element, tag + "/@" + raw_name, "unsupported attribute");
            }
            if (detail.attributes.count(key) != 0) {
                invalid(element, tag + "/@" + key, "attribute listed twice");
            }
            detail.attributes.emplace(std::move(key), value);
        }
        return FlowNode{common.id, common.name, kind, std::move(detail)};
    }

    SequenceFlow read_flow(const xml::Element& element) {
        forbid_content_text(element, "sequenceFlow");
        SequenceFlow flow;
        for (const auto& [raw_name, value] : element.attributes) {
            if (is_namespace_binding(raw_name)) {
                continue;
            }
            const QName attr = attribute_name(raw_name, element);
            if (!attr.ns.empty()) {
                unsupported(element, "sequenceFlow/@" + raw_name, "unsupported attribute");
            }
            if (attr.local == "id") {
                flow.id = value;
            } else if (attr.local == "name") {
                flow.name = value;
            } else if (attr.local == "sourceRef") {
                flow.source_ref = value;
            } else if (attr.local == "targetRef") {
                flow.target_ref = value;
            } else {
                unsupported(element, "sequenceFlow/@" + raw_name, "unsupported attribute");
            }
        }
        if (flow.id.empty()) {
            invalid(element, "sequenceFlow", "missing or empty id attribute");
        }
        if (flow.source_ref.empty() || flow.target_ref.empty()) {
            invalid(element, "sequenceFlow",
                    "flow '" + flow.id + "' needs sourceRef and targetRef");
        }
        for (const auto& child : element.children) {
            scope_.push(child);
            const QName name = element_name(child);
            if (name.local == "conditionExpression" && in_bpmn_ns(name)) {
                if (flow.condition_expression) {
                    invalid(child, "conditionExpression",
                            "more than one conditionExpression element");
                }
                if (!child.children.empty()) {
                    unsupported(child, "conditionExpression",
                                "child elements inside conditionExpression");
                }
                for (const auto& [raw_name, value] : child.attributes) {
                    if (is_namespace_binding(raw_name)) {
                        continue;
                    }
                    const QName attr = attribute_name(raw_name, child);
                    // xsi:type="tFormalExpression" is accepted and normalized away.
                    if (attr.ns == kXsiNs && attr.local == "type") {
                        continue;
                    }
                    unsupported(child, "conditionExpression/@" + raw_name,
                                "unsupported attribute");
                }
                flow.condition_expression = child.text;
            } else {
                unsupported(child, child.name, "unsupported element inside sequenceFlow");
            }
            scope_.pop();
        }
        return flow;
    }

    void add_node(ProcessModel& model, FlowNode node) {
        if (model.nodes.count(node.id) != 0 || model.flows.count(node.id) != 0) {
            throw ParseError(ParseErrorKind::DuplicateId, node.id, 0,
                             "id used by more than one element");
        }
        model.nodes.emplace(node.id, std::move(node));
    }

    void add_flow(ProcessModel& model, SequenceFlow flow) {
        if (model.nodes.count(flow.id) != 0 || model.flows.count(flow.id) != 0) {
            throw ParseError(ParseErrorKind::DuplicateId, flow.id, 0,
                             "id used by more than one element");
        }
        model.flows.emplace(flow.id, std::move(flow));
    }

    void check_flow_refs(const ProcessModel& model) const {
        for (const auto& [id, flow] : model.flows) {
            if (model.nodes.count(flow.source_ref) == 0 ||
                model.nodes.count(flow.target_ref) == 0) {
                throw ParseError(ParseErrorKind::DanglingFlowRef, id, 0,
                                 "flow references a missing node");
            }
        }
    }
};

}  // namespace

ProcessModel parse_bpmn(std::string_view xml_text, const BpmnDialect& dialect) {
    return BpmnReader(dialect).read(xml_text);
}

namespace {

int kind_group(NodeKind kind) {
    if (is_event_kind(kind)) return 0;
    if (is_task_kind(kind)) return 1;
    if (is_gateway_kind(kind)) return 2;
    return 3;  // data objects
}

std::string_view element_name_for(NodeKind kind) {
    switch (kind) {
        case NodeKind::StartEvent: return "startEvent";
        case NodeKind::EndEvent: return "endEvent";
        case NodeKind::IntermediateEvent: return "intermediateThrowEvent";
        case NodeKind::UserTask: return "userTask";
        case NodeKind::JavaServiceTask:
        case NodeKind::WebServiceTask:
        case NodeKind::EmailTask:
        case NodeKind::MuleTask:
        case NodeKind::ShellTask:
        case NodeKind::CamelTask:
            return "serviceTask";
        case NodeKind::ScriptTask: return "scriptTask";
        case NodeKind::JavaReceiveTask: return "receiveTask";
        case NodeKind::BusinessRuleTask: return "businessRuleTask";
        case NodeKind::ManualTask: return "manualTask";
        case NodeKind::ExclusiveGateway: return "exclusiveGateway";
        case NodeKind::ParallelGateway: return "parallelGateway";
        case NodeKind::DataObject: return "dataObject";
    }
    return "unknown";
}

// The serviceTask discriminator attribute for non-Java service kinds.
std::optional<std::pair<std::string, std::string>> discriminator_for(NodeKind kind) {
    switch (kind) {
        case NodeKind::WebServiceTask: return {{"implementation", "##WebService"}};
        case NodeKind::EmailTask: return {{"activiti:type", "mail"}};
        case NodeKind::MuleTask: return {{"activiti:type", "mule"}};
        case NodeKind::ShellTask: return {{"activiti:type", "shell"}};
        case NodeKind::CamelTask: return {{"activiti:type", "camel"}};
        default: return std::nullopt;
    }
}

class BpmnWriter {
public:
    std::string write(const ProcessModel& input) {
        const ProcessModel model = normalized(input);
        out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out_ << "<definitions xmlns=\"" << kBpmnModelNs << "\" xmlns:activiti=\""
             << xml::escape_attribute(dialect_vendor_ns_) << "\" targetNamespace=\""
             << kTargetNamespace << "\">\n";
        write_process(model);
        out_ << "</definitions>\n";
        return std::move(out_).str();
    }

    explicit BpmnWriter(const BpmnDialect& dialect) : dialect_vendor_ns_(dialect.vendor_ns) {}

private:
    std::string dialect_vendor_ns_;
    std::ostringstream out_;

    void write_process(const ProcessModel& model) {
        out_ << "  <process id=\"" << xml::escape_attribute(model.process_id) << "\"";
        if (model.process_name) {
            out_ << " name=\"" << xml::escape_attribute(*model.process_name) << "\"";
        }
        if (model.nodes.empty() && model.flows.empty()) {
            out_ << "/>\n";
            return;
        }
        out_ << ">\n";

        std::vector<const FlowNode*> ordered;
        ordered.reserve(model.nodes.size());
        for (const auto& [id, node] : model.nodes) {
            ordered.push_back(&node);
        }
        std::stable_sort(ordered.begin(), ordered.end(),
                         [](const FlowNode* a, const FlowNode* b) {
                             const int ga = kind_group(a->kind);
                             const int gb = kind_group(b->kind);
                             return ga != gb ? ga < gb : a->id < b->id;
                         });
        for (const FlowNode* node : ordered) {
            write_node(*node);
        }
        for (const auto& [id, flow] : model.flows) {
            write_flow(flow);
        }
        out_ << "  </process>\n";
    }

    void attr(std::string_view name, std::string_view value) {
        out_ << " " << name << "=\"" << xml::escape_attribute(value) << "\"";
    }

    void write_node(const FlowNode& node) {
        out_ << "    <" << element_name_for(node.kind);
        attr("id", node.id);
        if (node.name) {
            attr("name", *node.name);
        }
        if (const auto disc = discriminator_for(node.kind)) {
            attr(disc->first, disc->second);
        }

        if (const auto* user = std::get_if<UserTaskDetail>(&node.detail)) {
            if (user->assignee) attr("activiti:assignee", *user->assignee);
            if (!user->candidate_users.empty()) {
                attr("activiti:candidateUsers", join(user->candidate_users));
            }
            if (!user->candidate_groups.empty()) {
                attr("activiti:candidateGroups", join(user->candidate_groups));
            }
            if (user->due_date) attr("activiti:dueDate", *user->due_date);
            if (user->form_key) attr("activiti:formKey", *user->form_key);
            if (user->description) {
                out_ << ">\n      <documentation>" << xml::escape_text(*user->description)
                     << "</documentation>\n    </userTask>\n";
            } else {
                out_ << "/>\n";
            }
            return;
        }

        if (const auto* service = std::get_if<JavaServiceTaskDetail>(&node.detail)) {
            switch (service->call_type) {
                case CallType::JavaClass: attr("activiti:class", service->target); break;
                case CallType::DelegateExpression:
                    attr("activiti:delegateExpression", service->target);
                    break;
                case CallType::Expression: attr("activiti:expression", service->target); break;
            }
            if (service->result_variable) {
                attr("activiti:resultVariableName", *service->result_variable);
            }
            if (service->field_injections.empty()) {
                out_ << "/>\n";
                return;
            }
            out_ << ">\n      <extensionElements>\n";
            for (const auto& injection : service->field_injections) {
                out_ << "        <activiti:field";
                attr("name", injection.field_name);
                attr(injection.value_kind == ValueKind::StringValue ? "stringValue"
                                                                    : "expression",
                     injection.value);
                out_ << "/>\n";
            }
            out_ << "      </extensionElements>\n    </serviceTask>\n";
            return;
        }

        const auto& generic = std::get<GenericDetail>(node.detail);
        for (const auto& [key, value] : generic.attributes) {
            attr(key, value);
        }
        out_ << "/>\n";
    }

    void write_flow(const SequenceFlow& flow) {
        out_ << "    <sequenceFlow";
        attr("id", flow.id);
        if (flow.name) {
            attr("name", *flow.name);
        }
        attr("sourceRef", flow.source_ref);
        attr("targetRef", flow.target_ref);
        if (flow.condition_expression) {
            out_ << ">\n      <conditionExpression>"
                 << xml::escape_text(*flow.condition_expression)
                 << "</conditionExpression>\n    </sequenceFlow>\n";
        } else {
            out_ << "/>\n";
        }
    }

    static std::string join(const std::set<std::string>& values) {
        std::string out;
        for (const auto& value : values) {
            if (!out.empty()) {
                out += ",";
            }
            out += value;
        }
        return out;
    }
};

}  // namespace

std::string serialize_bpmn(const ProcessModel& model, const BpmnDialect& dialect) {
    require_valid(model);
    return BpmnWriter(dialect).write(model);
}

}  // namespace bpcm
