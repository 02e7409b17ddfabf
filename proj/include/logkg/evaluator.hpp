#pragma once

#include "logkg/annotator.hpp"
#include "logkg/llm_runner.hpp"
#include "logkg/rdf.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace logkg {

enum class MatchMode : std::uint8_t { Syntactic, Semantic };

std::string_view to_string(MatchMode m);  // "syntactic", "semantic"
std::optional<MatchMode> parse_mode(std::string_view s);

/// Drops any "prefix:" part, lowercases and removes '_' and '-':
/// "log:httpPath" and "HTTP_PATH" both give "httppath".
std::string normalize_predicate(std::string_view name);

/// Comparison key of an object. Syntactic: the canonical serialization.
/// Semantic: numbers by value, dateTimes with 'T' and no zone suffix, IRIs by
/// their last path segment, other literals by lexical form.
std::string normalize_object(const Term& object, MatchMode mode);

struct EntryScore {
    std::uint64_t entry_id = 0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::vector<Triple> matched;       // generated side of each pair
    std::vector<Triple> missed;        // reference statements left unpaired
    std::vector<Triple> hallucinated;  // generated statements left unpaired
    std::vector<Triple> reference;     // deduplicated reference statements
};

/// Greedy one-to-one pairing of statements on (predicate key, object key).
/// Exact duplicates on either side collapse first. Syntactic mode also requires
/// equal subjects.
EntryScore match_entry(const TripleSet& generated, const TripleSet& reference, MatchMode mode,
                       std::uint64_t entry_id = 0);

struct Metrics {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double precision = 0;
    double recall = 0;
    double f1 = 0;

    bool operator==(const Metrics&) const = default;
};

/// Precision, recall and F1 from summed counts; 0 wherever a denominator is 0.
Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);
/// Micro average: counts are summed over all entries first.
Metrics aggregate(std::span<const EntryScore> scores);

/// Vocabulary name for a predicate whose normalized key matches one, otherwise
/// its local name as written.
std::string canonical_predicate(std::string_view predicate);

struct PredicateCount {
    std::string predicate;
    std::size_t missed = 0;
    std::size_t hallucinated = 0;

    bool operator==(const PredicateCount&) const = default;
};

/// Missed and hallucinated totals per canonical predicate, sorted by
/// missed + hallucinated descending, then name.
std::vector<PredicateCount> predicate_analysis(std::span<const EntryScore> scores);

struct RankedCount {
    std::string predicate;
    std::size_t count = 0;
};
/// The `n` most missed (or hallucinated) predicates with a nonzero count.
std::vector<RankedCount> top_missed(std::span<const PredicateCount> counts, std::size_t n);
std::vector<RankedCount> top_hallucinated(std::span<const PredicateCount> counts, std::size_t n);

struct ConfusionPair {
    std::string omitted;   // reference predicate that was missed
    std::string produced;  // predicate emitted in its place with the same value
    std::size_t frequency = 0;

    bool operator==(const ConfusionPair&) const = default;
};

/// Within each entry, pairs a missed statement with the first unused
/// hallucinated statement that carries the same semantic object value under a
/// predicate absent from the entry's reference. Sorted by frequency
/// descending, then names.
std::vector<ConfusionPair> confusion_pairs(std::span<const EntryScore> scores);

/// Statements recovered from one stored result: strict parse for Valid,
/// regex recovery for Regex, nothing otherwise.
TripleSet generated_triples(const RunResult& result);

struct ComboEvaluation {
    std::string model_id;
    Technique technique{};
    MatchMode mode{};
    std::vector<EntryScore> scores;
};

/// Scores one result file against the reference. Reference entries with no
/// result count as empty output. Throws DataError for result ids absent from
/// the reference.
ComboEvaluation evaluate_results(const ResultFile& results, const ReferenceDataset& reference, MatchMode mode);

}  // namespace logkg
