#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bpcm::xml {

// Error raised on input that is not well-formed XML (or uses features the
// reader does not accept, e.g. DOCTYPE).
class XmlError : public std::runtime_error {
public:
    XmlError(std::size_t line, const std::string& message);

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// One parsed element. Names are kept exactly as written (prefix included);
// namespace resolution is the caller's concern.
struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;  // document order
    std::vector<Element> children;                                // element children only
    // Concatenated character data directly inside this element (entities
    // decoded, CDATA included). Whitespace between child elements lands here
    // too; use has_content_text() to distinguish real content.
    std::string text;
    std::size_t line = 0;

    const std::string* attribute(std::string_view name) const;
    bool has_content_text() const;  // any non-whitespace character data
};

struct Document {
    Element root;
};

// Parses a complete UTF-8 XML document. Supports elements, attributes,
// character data, entity/char references, CDATA, comments, processing
// instructions and the XML declaration. DOCTYPE is rejected.
Document parse(std::string_view input);

// Escapes a string for use as attribute value (quote, ampersand, angle
// brackets and control whitespace) or as character data.
std::string escape_attribute(std::string_view value);
std::string escape_text(std::string_view value);

}  // namespace bpcm::xml
