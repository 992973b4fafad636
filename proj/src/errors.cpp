#include "bpcm/errors.hpp"

#include <sstream>

namespace bpcm {

std::string to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::MalformedXml: return "MalformedXml";
        case ParseErrorKind::UnsupportedConstruct: return "UnsupportedConstruct";
        case ParseErrorKind::DanglingFlowRef: return "DanglingFlowRef";
        case ParseErrorKind::DuplicateId: return "DuplicateId";
        case ParseErrorKind::InvalidElement: return "InvalidElement";
    }
    return "Unknown";
}

namespace {

std::string parse_error_message(ParseErrorKind kind, const std::string& subject,
                                std::size_t line, const std::string& message) {
    std::ostringstream out;
    out << to_string(kind);
    if (!subject.empty()) {
        out << " [" << subject << "]";
    }
    if (line != 0) {
        out << " (line " << line << ")";
    }
    if (!message.empty()) {
        out << ": " << message;
    }
    return out.str();
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& part : parts) {
        if (!out.empty()) {
            out += "; ";
        }
        out += part;
    }
    return out;
}

}  // namespace

ParseError::ParseError(ParseErrorKind kind, std::string subject, std::size_t line,
                       const std::string& message)
    : Error(parse_error_message(kind, subject, line, message)),
      kind_(kind),
      subject_(std::move(subject)),
      line_(line) {}

InvalidModelError::InvalidModelError(std::vector<std::string> violations)
    : Error("invalid model: " + join(violations)), violations_(std::move(violations)) {}

std::string to_string(ConflictKind kind) {
    switch (kind) {
        case ConflictKind::ValueMismatch: return "ValueMismatch";
        case ConflictKind::MissingElement: return "MissingElement";
        case ConflictKind::DuplicateAdd: return "DuplicateAdd";
        case ConflictKind::KindMismatch: return "KindMismatch";
        case ConflictKind::DanglingReference: return "DanglingReference";
        case ConflictKind::NotApplicable: return "NotApplicable";
    }
    return "Unknown";
}

namespace {

std::string conflict_message(ConflictKind kind, std::size_t record_index,
                             const std::string& element_id, const std::string& expected,
                             const std::string& found) {
    std::ostringstream out;
    out << "conflict at record " << record_index << " on element '" << element_id
        << "': " << to_string(kind);
    if (!expected.empty() || !found.empty()) {
        out << " (expected " << (expected.empty() ? "<none>" : expected) << ", found "
            << (found.empty() ? "<none>" : found) << ")";
    }
    return out.str();
}

}  // namespace

ConflictError::ConflictError(ConflictKind kind, std::size_t record_index,
                             std::string element_id, std::string expected, std::string found,
                             std::string set_id)
    : Error(conflict_message(kind, record_index, element_id, expected, found)),
      kind_(kind),
      record_index_(record_index),
      element_id_(std::move(element_id)),
      expected_(std::move(expected)),
      found_(std::move(found)),
      set_id_(std::move(set_id)) {}

VersionChainError::VersionChainError(std::string expected, std::string found)
    : Error("version chain broken: expected base '" + expected + "', found '" + found + "'"),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

std::string to_string(JournalErrorKind kind) {
    switch (kind) {
        case JournalErrorKind::VersionMismatch: return "VersionMismatch";
        case JournalErrorKind::UnknownVersion: return "UnknownVersion";
        case JournalErrorKind::NothingToRevert: return "NothingToRevert";
        case JournalErrorKind::CorruptJournal: return "CorruptJournal";
        case JournalErrorKind::Io: return "Io";
    }
    return "Unknown";
}

JournalError::JournalError(JournalErrorKind kind, const std::string& message)
    : Error(to_string(kind) + ": " + message), kind_(kind) {}

}  // namespace bpcm
