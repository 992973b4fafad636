#include "bpcm/xml.hpp"

#include <cctype>

namespace bpcm::xml {

XmlError::XmlError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

const std::string* Element::attribute(std::string_view name) const {
    for (const auto& [key, value] : attributes) {
        if (key == name) {
            return &value;
        }
    }
    return nullptr;
}

bool Element::has_content_text() const {
    for (const char c : text) {
        if (c != ' ' && c != '\t' && c != '\n' && c != '\r') {
            return true;
        }
    }
    return false;
}

namespace {

bool is_name_start(unsigned char c) {
    return std::isalpha(c) != 0 || c == '_' || c == ':' || c >= 0x80;
}

bool is_name_char(unsigned char c) {
    return is_name_start(c) || std::isdigit(c) != 0 || c == '-' || c == '.';
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp <= 0x7F) {
        out += static_cast<char>(cp);
    } else if (cp <= 0x7FF) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp <= 0xFFFF) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

class Reader {
public:
    explicit Reader(std::string_view input) : input_(input) {}

    Document parse_document() {
        skip_bom();
        skip_declaration();
        skip_misc();
        if (eof() || peek() != '<') {
            fail("expected a root element");
        }
        Document doc;
        doc.root = parse_element();
        skip_misc();
        if (!eof()) {
            fail("content after the root element");
        }
        return doc;
    }

private:
    std::string_view input_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;

    bool eof() const { return pos_ >= input_.size(); }
    char peek() const { return input_[pos_]; }
    bool starts_with(std::string_view prefix) const {
        return input_.compare(pos_, prefix.size(), prefix) == 0;
    }

    char take() {
        const char c = input_[pos_++];
        if (c == '\n') {
            ++line_;
        }
        return c;
    }

    void advance(std::size_t count) {
        for (std::size_t i = 0; i < count && !eof(); ++i) {
            take();
        }
    }

    [[noreturn]] void fail(const std::string& message) const { throw XmlError(line_, message); }

    void skip_bom() {
        if (starts_with("\xEF\xBB\xBF")) {
            pos_ += 3;
        }
    }

    void skip_space() {
        while (!eof() && is_space(peek())) {
            take();
        }
    }

    void skip_declaration() {
        if (starts_with("<?xml")) {
            const auto end = input_.find("?>", pos_);
            if (end == std::string_view::npos) {
                fail("unterminated XML declaration");
            }
            advance(end + 2 - pos_);
        }
    }

    // Comments, processing instructions and whitespace outside elements.
    void skip_misc() {
        for (;;) {
            skip_space();
            if (starts_with("<!--")) {
                skip_comment();
            } else if (starts_with("<?")) {
                skip_pi();
            } else if (starts_with("<!DOCTYPE")) {
                fail("DOCTYPE is not supported");
            } else {
                return;
            }
        }
    }

    void skip_comment() {
        advance(4);
        const auto end = input_.find("-->", pos_);
        if (end == std::string_view::npos) {
            fail("unterminated comment");
        }
        advance(end + 3 - pos_);
    }

    void skip_pi() {
        advance(2);
        const auto end = input_.find("?>", pos_);
        if (end == std::string_view::npos) {
            fail("unterminated processing instruction");
        }
        advance(end + 2 - pos_);
    }

    std::string parse_name() {
        if (eof() || !is_name_start(static_cast<unsigned char>(peek()))) {
            fail("expected a name");
        }
        std::string name;
        while (!eof() && is_name_char(static_cast<unsigned char>(peek()))) {
            name += take();
        }
        return name;
    }

    std::string parse_reference() {
        // Called after '&' has been consumed.
        const auto semicolon = input_.find(';', pos_);
        if (semicolon == std::string_view::npos || semicolon - pos_ > 10) {
            fail("unterminated entity reference");
        }
        const std::string_view body = input_.substr(pos_, semicolon - pos_);
        advance(body.size() + 1);
        if (body == "amp") return "&";
        if (body == "lt") return "<";
        if (body == "gt") return ">";
        if (body == "quot") return "\"";
        if (body == "apos") return "'";
        if (!body.empty() && body[0] == '#') {
            std::uint32_t cp = 0;
            std::size_t i = 1;
            const bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
            if (hex) {
                i = 2;
            }
            if (i >= body.size()) {
                fail("empty character reference");
            }
            for (; i < body.size(); ++i) {
                const char c = body[i];
                std::uint32_t digit = 0;
                if (c >= '0' && c <= '9') {
                    digit = static_cast<std::uint32_t>(c - '0');
                } else if (hex && c >= 'a' && c <= 'f') {
                    digit = static_cast<std::uint32_t>(c - 'a' + 10);
                } else if (hex && c >= 'A' && c <= 'F') {
                    digit = static_cast<std::uint32_t>(c - 'A' + 10);
                } else {
                    fail("invalid character reference");
                }
                cp = cp * (hex ? 16 : 10) + digit;
                if (cp > 0x10FFFF) {
                    fail("character reference out of range");
                }
            }
            std::string out;
            append_utf8(out, cp);
            return out;
        }
        fail("unknown entity '&" + std::string(body) + ";'");
    }

    std::string parse_attribute_value() {
        if (eof() || (peek() != '"' && peek() != '\'')) {
            fail("expected a quoted attribute value");
        }
        const char quote = take();
        std::string value;
        for (;;) {
            if (eof()) {
                fail("unterminated attribute value");
            }
            const char c = peek();
            if (c == quote) {
                take();
                return value;
            }
            if (c == '<') {
                fail("'<' inside attribute value");
            }
            if (c == '&') {
                take();
                value += parse_reference();
            } else {
                value += take();
            }
        }
    }

    Element parse_element() {
        const std::size_t start_line = line_;
        take();  // '<'
        Element element;
        element.line = start_line;
        element.name = parse_name();
        for (;;) {
            const bool had_space = !eof() && is_space(peek());
            skip_space();
            if (eof()) {
                fail("unterminated start tag for <" + element.name + ">");
            }
            if (starts_with("/>")) {
                advance(2);
                return element;
            }
            if (peek() == '>') {
                take();
                parse_content(element);
                return element;
            }
            if (!had_space) {
                fail("expected whitespace before attribute in <" + element.name + ">");
            }
            std::string attr_name = parse_name();
            skip_space();
            if (eof() || peek() != '=') {
                fail("expected '=' after attribute '" + attr_name + "'");
            }
            take();
            skip_space();
            std::string attr_value = parse_attribute_value();
            for (const auto& [existing, unused] : element.attributes) {
                if (existing == attr_name) {
                    fail("duplicate attribute '" + attr_name + "'");
                }
            }
            element.attributes.emplace_back(std::move(attr_name), std::move(attr_value));
        }
    }

    void parse_content(Element& element) {
        for (;;) {
            if (eof()) {
                fail("missing end tag for <" + element.name + ">");
            }
            const char c = peek();
            if (c == '<') {
                if (starts_with("</")) {
                    advance(2);
                    const std::string name = parse_name();
                    if (name != element.name) {
                        fail("end tag </" + name + "> does not match <" + element.name + ">");
                    }
                    skip_space();
                    if (eof() || take() != '>') {
                        fail("malformed end tag </" + name + ">");
                    }
                    return;
                }
                if (starts_with("<!--")) {
                    skip_comment();
                } else if (starts_with("<![CDATA[")) {
                    parse_cdata(element);
                } else if (starts_with("<?")) {
                    skip_pi();
                } else if (starts_with("<!")) {
                    fail("unexpected markup declaration");
                } else {
                    element.children.push_back(parse_element());
                }
            } else if (c == '&') {
                take();
                element.text += parse_reference();
            } else {
                element.text += take();
            }
        }
    }

    void parse_cdata(Element& element) {
        advance(9);  // "<![CDATA["
        const auto end = input_.find("]]>", pos_);
        if (end == std::string_view::npos) {
            fail("unterminated CDATA section");
        }
        element.text.append(input_.substr(pos_, end - pos_));
        advance(end + 3 - pos_);
    }
};

}  // namespace

Document parse(std::string_view input) {
    return Reader(input).parse_document();
}

namespace {

std::string escape(std::string_view value, bool attribute) {
    std::string out;
    out.reserve(value.size());
    for (const char c : value) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"':
                out += attribute ? "&quot;" : "\"";
                break;
            case '\n':
                out += attribute ? "&#10;" : "\n";
                break;
            case '\t':
                out += attribute ? "&#9;" : "\t";
                break;
            case '\r': out += "&#13;"; break;
            default: out += c; break;
        }
    }
    return out;
}

}  // namespace

std::string escape_attribute(std::string_view value) {
    return escape(value, true);
}

std::string escape_text(std::string_view value) {
    return escape(value, false);
}

}  // namespace bpcm::xml
