#pragma once

#include "logkg/rdf.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace logkg {

/// Namespace IRI bound to "log:" when a document uses the prefix without
/// declaring it.
inline constexpr std::string_view kLogNamespace = "http://openstack.org/ontology#";
/// Subject given to statements recovered before any subject was seen.
inline constexpr std::string_view kRecoveredSubject = "urn:logkg:recovered-subject";

/// Canonical layout: subject line, then one "predicate object ;" per line, the
/// last ending in " .". No prefix lines, no trailing newline. Consecutive
/// statements with the same subject share a block.
std::string serialize(const TripleSet& ts);

/// Canonical text of one object term, e.g. "\"202\"^^xsd:integer" or "<http://...>".
std::string serialize_term(const Term& t);

/// Strict Turtle for the subset the schema needs: directives, IRIs, prefixed
/// names, 'a', string/numeric/boolean literals, ';' and ',' lists. Blank nodes
/// and collections are rejected. Every predicate comes back as "log:" plus its
/// local name. Throws ParseError.
TripleSet parse_strict(std::string_view text);

/// Line-oriented recovery of statements from near-Turtle text. Never throws.
TripleSet extract_regex(std::string_view text);

/// Cuts model output down to the RDF part: drops reasoning blocks, code fences
/// and surrounding prose. Returns "" when nothing triple-like remains.
std::string clean_output(std::string_view raw);

enum class Outcome : std::uint8_t { Valid, Regex, Invalid, Empty };

std::string_view to_string(Outcome o);  // "valid", "regex", "invalid", "empty"
std::optional<Outcome> parse_outcome(std::string_view s);

struct ValidationOutcome {
    Outcome tag = Outcome::Empty;
    std::string cleaned;
    std::optional<TripleSet> triples;  // present for Valid and Regex
};

/// Empty when the raw output is blank; Valid when the cleaned text parses
/// strictly with at least one statement; Regex when recovery finds any
/// statement; Invalid otherwise.
ValidationOutcome classify(std::string_view raw);

/// 100 * (#Valid) / total. Throws ZeroTotal when total is 0.
double validity_percentage(std::span<const Outcome> outcomes, std::size_t total);

}  // namespace logkg
