#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bpcm/change.hpp"
#include "bpcm/journal.hpp"

namespace bpcm {

// Namespace of every BPCM class, property and individual.
inline constexpr std::string_view kOntologyNs = "http://bpcm.example.org/ontology#";

// One RDF statement. Objects are either IRIs or literals; literals may carry
// a datatype IRI (empty means a plain string literal).
struct OntologyTriple {
    std::string subject;    // absolute IRI
    std::string predicate;  // absolute IRI
    std::string object;     // IRI or literal lexical form
    bool object_is_literal = false;
    std::string datatype;  // literal datatype IRI, empty for plain literals

    friend bool operator==(const OntologyTriple&, const OntologyTriple&) = default;
};

// Serializes one triple as an N-Triples line (without the trailing newline).
std::string to_ntriples_line(const OntologyTriple& triple);

// The class an individual built from this record is typed with. Total over
// every constructible record (exhaustive over the taxonomy).
std::string class_iri_of(const ChangeRecord& record);

// The class hierarchy: one owl:Class declaration per class in fixed order,
// then one rdfs:subClassOf triple per child/parent edge. Deterministic; the
// class inventory is tabulated in docs/FORMATS.md.
std::vector<OntologyTriple> export_schema();

// One typed individual per record plus its provenance, timestamp, element
// and payload properties. The record must pass validate_record. Deterministic
// property order; the property vocabulary is tabulated in docs/FORMATS.md.
std::vector<OntologyTriple> export_record(const ChangeRecord& record);

// Inverse of export_record: rebuilds the record from its triples (all
// sharing one subject). Payload, provenance, timestamp and record id are
// reconstructed exactly. Throws CodecError on unknown or incomplete shapes.
ChangeRecord record_from_triples(const std::vector<OntologyTriple>& triples);

// Schema plus every record of every entry, one triple per line, in journal
// order. Requires a verifiable journal: any ChainBroken or ReplayMismatch
// finding raises CorruptJournal (unauthorized agents do not block export).
std::string export_journal(const Journal& journal);

}  // namespace bpcm
