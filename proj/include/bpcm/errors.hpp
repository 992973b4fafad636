#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpcm {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ParseErrorKind {
    MalformedXml,          // input is not well-formed XML
    UnsupportedConstruct,  // element/attribute outside the supported subset
    DanglingFlowRef,       // sequence flow references a missing node
    DuplicateId,           // id used by more than one element
    InvalidElement,        // supported element violates a structural rule
};

std::string to_string(ParseErrorKind kind);

// Structured diagnostic raised while reading BPMN XML or change-set files.
class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, std::string subject, std::size_t line,
               const std::string& message);

    ParseErrorKind kind() const noexcept { return kind_; }
    // Offending tag name, attribute, or id. Empty when not applicable.
    const std::string& subject() const noexcept { return subject_; }
    // 1-based input line, 0 if unknown.
    std::size_t line() const noexcept { return line_; }

private:
    ParseErrorKind kind_;
    std::string subject_;
    std::size_t line_;
};

// A model violated its own invariants (diff/apply precondition failure).
class InvalidModelError : public Error {
public:
    explicit InvalidModelError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

enum class ConflictKind {
    ValueMismatch,      // stored OLD value differs from the current model
    MissingElement,     // record targets an element that does not exist
    DuplicateAdd,       // add of an id that is already present
    KindMismatch,       // element exists but has a different node kind
    DanglingReference,  // applying would leave a flow without an endpoint
    NotApplicable,      // record category carries no model semantics
};

std::string to_string(ConflictKind kind);

// Raised by apply() when a record's precondition fails against the model.
// The input model is left untouched (apply is all-or-nothing).
class ConflictError : public Error {
public:
    ConflictError(ConflictKind kind, std::size_t record_index, std::string element_id,
                  std::string expected, std::string found, std::string set_id = {});

    ConflictKind kind() const noexcept { return kind_; }
    std::size_t record_index() const noexcept { return record_index_; }
    const std::string& element_id() const noexcept { return element_id_; }
    const std::string& expected() const noexcept { return expected_; }
    const std::string& found() const noexcept { return found_; }
    const std::string& set_id() const noexcept { return set_id_; }
    void set_set_id(const std::string& id) { set_id_ = id; }

private:
    ConflictKind kind_;
    std::size_t record_index_;
    std::string element_id_;
    std::string expected_;
    std::string found_;
    std::string set_id_;
};

// Raised by replay() when consecutive sets do not chain by version tag.
class VersionChainError : public Error {
public:
    VersionChainError(std::string expected, std::string found);

    const std::string& expected() const noexcept { return expected_; }
    const std::string& found() const noexcept { return found_; }

private:
    std::string expected_;
    std::string found_;
};

enum class JournalErrorKind {
    VersionMismatch,  // committed set's base_version is not the journal head
    UnknownVersion,   // version tag does not exist
    NothingToRevert,  // revert target is already the head
    CorruptJournal,   // stored data cannot be trusted or decoded
    Io,               // filesystem failure
};

std::string to_string(JournalErrorKind kind);

class JournalError : public Error {
public:
    JournalError(JournalErrorKind kind, const std::string& message);

    JournalErrorKind kind() const noexcept { return kind_; }

private:
    JournalErrorKind kind_;
};

// Raised when decoding change-set / journal JSON fails.
class CodecError : public Error {
public:
    using Error::Error;
};

}  // namespace bpcm
