#pragma once

#include "logkg/evaluator.hpp"
#include "logkg/llm_runner.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace logkg {

struct ComboMetrics {
    std::string model_id;
    Technique technique{};
    MatchMode mode{};
    std::size_t entries = 0;
    Metrics metrics;

    bool operator==(const ComboMetrics&) const = default;
};

struct ValidityRow {
    std::string model_id;
    Technique technique{};
    std::size_t valid = 0;
    std::size_t regex = 0;
    std::size_t invalid = 0;
    std::size_t empty = 0;
    std::size_t total = 0;
    double valid_pct = 0;  // 0 for an empty file

    bool operator==(const ValidityRow&) const = default;
};

struct PredicateRow {
    std::string model_id;
    Technique technique{};
    MatchMode mode{};
    PredicateCount counts;

    bool operator==(const PredicateRow&) const = default;
};

struct ConfusionRow {
    std::string model_id;
    Technique technique{};
    MatchMode mode{};
    ConfusionPair pair;

    bool operator==(const ConfusionRow&) const = default;
};

struct AggregateReport {
    std::vector<ComboMetrics> combos;
    std::vector<ValidityRow> validity;
    std::vector<PredicateRow> predicates;
    std::vector<ConfusionRow> confusions;

    bool operator==(const AggregateReport&) const = default;
};

ValidityRow validity_row(const ResultFile& file);
std::vector<ValidityRow> validity_table(const std::vector<ResultFile>& files);

/// Scores every result file in every requested mode.
AggregateReport build_report(const std::vector<ResultFile>& files, const ReferenceDataset& reference,
                             const std::vector<MatchMode>& modes);

/// Concatenates reports. Throws DataError when a combo appears twice.
AggregateReport merge_reports(const std::vector<AggregateReport>& reports);

std::string report_to_json(const AggregateReport& r);
AggregateReport report_from_json(std::string_view text);

/// One CSV text per table, keyed by file name: combos.csv, validity.csv,
/// predicates.csv, confusions.csv.
std::map<std::string, std::string> report_to_csv(const AggregateReport& r);
/// Inverse of report_to_csv. Missing tables read as empty.
AggregateReport report_from_csv(const std::map<std::string, std::string>& tables);

/// Shortest text that reads back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

/// Minimal RFC 4180 writer and reader.
std::string csv_line(const std::vector<std::string>& fields);
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

struct TechniqueScore {
    Technique technique{};
    double mean_f1 = 0;
    std::size_t combos = 0;
};

/// Techniques by mean micro-F1 over models, best first.
std::vector<TechniqueScore> technique_ranking(const AggregateReport& r, MatchMode mode);
/// Every combo of the mode by micro-F1, best first.
std::vector<ComboMetrics> combo_ranking(const AggregateReport& r, MatchMode mode);
/// Highest-F1 combo for each model, in model order.
std::vector<ComboMetrics> best_technique_per_model(const AggregateReport& r, MatchMode mode);
/// Highest-F1 combo for each technique, in technique order.
std::vector<ComboMetrics> best_model_per_technique(const AggregateReport& r, MatchMode mode);

struct TechniquePredicates {
    Technique technique{};
    std::vector<RankedCount> missed;
    std::vector<RankedCount> hallucinated;
};

/// Top-n missed and hallucinated predicates per technique, summed over models.
std::vector<TechniquePredicates> technique_predicate_tables(const AggregateReport& r, MatchMode mode,
                                                            std::size_t n = 5);
/// Confusion pairs summed over every combo of the mode.
std::vector<ConfusionPair> corpus_confusions(const AggregateReport& r, MatchMode mode);

struct HeatmapGrid {
    MatchMode mode{};
    std::vector<std::string> models;      // rows
    std::vector<Technique> techniques;    // columns, matrix order
    std::vector<std::vector<std::optional<double>>> cells;  // micro-F1
};

/// Models x techniques that occur in the report for `mode`.
HeatmapGrid heatmap_grid(const AggregateReport& r, MatchMode mode);
/// Matrix CSV: header "model,<TAG>...", empty cells for absent combos.
std::string heatmap_csv(const HeatmapGrid& g);
/// Standalone SVG with a colour legend and 4-decimal cell labels.
std::string heatmap_svg(const HeatmapGrid& g);

/// Ranking tables as CSV texts keyed by file name.
std::map<std::string, std::string> ranking_csv(const AggregateReport& r);

}  // namespace logkg
