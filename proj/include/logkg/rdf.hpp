#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace logkg {

/// An RDF term in object position. Subjects are always IRIs and kept as plain
/// strings on Triple.
struct Term {
    enum class Kind : std::uint8_t { Iri, Literal };

    Kind kind = Kind::Literal;
    std::string value;  // IRI text without brackets, or the literal's lexical form
    // Literal only: "" for a plain string, "xsd:integer" style for XSD types,
    // "@en" for a language tag, "<http://...>" for any other datatype IRI.
    std::string datatype;

    static Term iri(std::string v) { return {Kind::Iri, std::move(v), {}}; }
    static Term literal(std::string v, std::string dt = {}) { return {Kind::Literal, std::move(v), std::move(dt)}; }

    bool is_iri() const { return kind == Kind::Iri; }
    auto operator<=>(const Term&) const = default;
};

struct Triple {
    std::string subject;    // IRI text without brackets
    std::string predicate;  // "log:localName"
    Term object;

    auto operator<=>(const Triple&) const = default;
};

/// The statements about one log entry. Annotator output always shares one
/// subject; sets recovered from model output may carry several.
struct TripleSet {
    std::vector<Triple> triples;

    bool empty() const { return triples.empty(); }
    std::size_t size() const { return triples.size(); }
    /// Subject of the first statement, or "" when empty.
    const std::string& subject() const;
    void add(std::string subject, std::string predicate, Term object);

    bool operator==(const TripleSet&) const = default;
};

}  // namespace logkg
