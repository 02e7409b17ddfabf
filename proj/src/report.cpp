#include "logkg/report.hpp"

#include "logkg/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>

#include <json.hpp>

namespace logkg {

namespace {

using ojson = nlohmann::ordered_json;

Technique technique_from(const std::string& s) {
    auto t = parse_technique(s);
    if (!t) throw DataError("unknown technique '" + s + "'");
    return *t;
}

MatchMode mode_from(const std::string& s) {
    auto m = parse_mode(s);
    if (!m) throw DataError("unknown mode '" + s + "'");
    return *m;
}

std::size_t count_from(std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw DataError("bad count '" + std::string(s) + "'");
    return v;
}

std::string tag(Technique t) { return std::string(to_string(t)); }
std::string tag(MatchMode m) { return std::string(to_string(m)); }

// Rows of one table with the expected header checked and stripped.
std::vector<std::vector<std::string>> table_rows(const std::map<std::string, std::string>& tables,
                                                 const std::string& name, const std::vector<std::string>& header) {
    auto it = tables.find(name);
    if (it == tables.end()) return {};
    auto rows = parse_csv(it->second);
    if (rows.empty()) return {};
    if (rows.front() != header) throw DataError(name + ": unexpected header");
    rows.erase(rows.begin());
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw DataError(name + ": row has " + std::to_string(row.size()) + " fields");
    }
    return rows;
}

const std::vector<std::string> kComboHeader{"model_id", "technique", "mode",      "entries", "tp",
                                            "fp",       "fn",        "precision", "recall",  "f1"};
const std::vector<std::string> kValidityHeader{"model_id", "technique", "valid", "regex",
                                               "invalid",  "empty",     "total", "valid_pct"};
const std::vector<std::string> kPredicateHeader{"model_id", "technique", "mode", "predicate", "missed", "hallucinated"};
const std::vector<std::string> kConfusionHeader{"model_id", "technique", "mode", "omitted", "produced", "frequency"};

std::vector<const ComboMetrics*> combos_of(const AggregateReport& r, MatchMode mode) {
    std::vector<const ComboMetrics*> out;
    for (const auto& c : r.combos) {
        if (c.mode == mode) out.push_back(&c);
    }
    return out;
}

bool better(const ComboMetrics& a, const ComboMetrics& b) {
    if (a.metrics.f1 != b.metrics.f1) return a.metrics.f1 > b.metrics.f1;
    return std::tie(a.model_id, a.technique) < std::tie(b.model_id, b.technique);
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string colour(double v) {
    v = std::clamp(v, 0.0, 1.0);
    auto mix = [v](int lo, int hi) { return static_cast<int>(lo + (hi - lo) * v + 0.5); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(0xf7, 0x08), mix(0xfb, 0x30), mix(0xff, 0x6b));
    return buf;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw DataError("bad number '" + std::string(s) + "'");
    return v;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        const auto& f = fields[i];
        if (f.find_first_of(",\"\r\n") == std::string::npos) {
            out += f;
            continue;
        }
        out += '"';
        for (char c : f) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
    }
    out += '\n';
    return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw DataError("unterminated quoted CSV field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

ValidityRow validity_row(const ResultFile& file) {
    ValidityRow row{file.model_id, file.technique};
    std::vector<Outcome> outcomes;
    for (const auto& r : file.results) {
        outcomes.push_back(r.outcome);
        switch (r.outcome) {
            case Outcome::Valid: ++row.valid; break;
            case Outcome::Regex: ++row.regex; break;
            case Outcome::Invalid: ++row.invalid; break;
            case Outcome::Empty: ++row.empty; break;
        }
    }
    row.total = outcomes.size();
    if (row.total > 0) row.valid_pct = validity_percentage(outcomes, row.total);
    return row;
}

std::vector<ValidityRow> validity_table(const std::vector<ResultFile>& files) {
    std::vector<ValidityRow> out;
    for (const auto& f : files) out.push_back(validity_row(f));
    return out;
}

AggregateReport build_report(const std::vector<ResultFile>& files, const ReferenceDataset& reference,
                             const std::vector<MatchMode>& modes) {
    AggregateReport r;
    r.validity = validity_table(files);
    for (const auto& f : files) {
        for (auto mode : modes) {
            auto eval = evaluate_results(f, reference, mode);
            r.combos.push_back({f.model_id, f.technique, mode, eval.scores.size(), aggregate(eval.scores)});
            for (auto& c : predicate_analysis(eval.scores)) r.predicates.push_back({f.model_id, f.technique, mode, c});
            for (auto& p : confusion_pairs(eval.scores)) r.confusions.push_back({f.model_id, f.technique, mode, p});
        }
    }
    return r;
}

AggregateReport merge_reports(const std::vector<AggregateReport>& reports) {
    AggregateReport out;
    std::set<std::tuple<std::string, Technique, MatchMode>> seen;
    std::set<std::pair<std::string, Technique>> seen_validity;
    for (const auto& r : reports) {
        for (const auto& c : r.combos) {
            if (!seen.emplace(c.model_id, c.technique, c.mode).second) {
                throw DataError("combo " + c.model_id + "/" + tag(c.technique) + "/" + tag(c.mode) +
                                " appears in more than one report");
            }
        }
        for (const auto& v : r.validity) {
            if (!seen_validity.emplace(v.model_id, v.technique).second) {
                throw DataError("validity row " + v.model_id + "/" + tag(v.technique) + " appears twice");
            }
        }
        out.combos.insert(out.combos.end(), r.combos.begin(), r.combos.end());
        out.validity.insert(out.validity.end(), r.validity.begin(), r.validity.end());
        out.predicates.insert(out.predicates.end(), r.predicates.begin(), r.predicates.end());
        out.confusions.insert(out.confusions.end(), r.confusions.begin(), r.confusions.end());
    }
    return out;
}

std::string report_to_json(const AggregateReport& r) {
    ojson j;
    j["combos"] = ojson::array();
    for (const auto& c : r.combos) {
        j["combos"].push_back({{"model_id", c.model_id},
                               {"technique", tag(c.technique)},
                               {"mode", tag(c.mode)},
                               {"entries", c.entries},
                               {"tp", c.metrics.tp},
                               {"fp", c.metrics.fp},
                               {"fn", c.metrics.fn},
                               {"precision", c.metrics.precision},
                               {"recall", c.metrics.recall},
                               {"f1", c.metrics.f1}});
    }
    j["validity"] = ojson::array();
    for (const auto& v : r.validity) {
        j["validity"].push_back({{"model_id", v.model_id},
                                 {"technique", tag(v.technique)},
                                 {"valid", v.valid},
                                 {"regex", v.regex},
                                 {"invalid", v.invalid},
                                 {"empty", v.empty},
                                 {"total", v.total},
                                 {"valid_pct", v.valid_pct}});
    }
    j["predicates"] = ojson::array();
    for (const auto& p : r.predicates) {
        j["predicates"].push_back({{"model_id", p.model_id},
                                   {"technique", tag(p.technique)},
                                   {"mode", tag(p.mode)},
                                   {"predicate", p.counts.predicate},
                                   {"missed", p.counts.missed},
                                   {"hallucinated", p.counts.hallucinated}});
    }
    j["confusions"] = ojson::array();
    for (const auto& c : r.confusions) {
        j["confusions"].push_back({{"model_id", c.model_id},
                                   {"technique", tag(c.technique)},
                                   {"mode", tag(c.mode)},
                                   {"omitted", c.pair.omitted},
                                   {"produced", c.pair.produced},
                                   {"frequency", c.pair.frequency}});
    }
    return j.dump(2) + "\n";
}

AggregateReport report_from_json(std::string_view text) {
    AggregateReport r;
    try {
        auto j = nlohmann::json::parse(text);
        for (const auto& c : j.value("combos", nlohmann::json::array())) {
            ComboMetrics m{c.at("model_id").get<std::string>(), technique_from(c.at("technique").get<std::string>()),
                           mode_from(c.at("mode").get<std::string>()), c.at("entries").get<std::size_t>(), {}};
            m.metrics = {c.at("tp").get<std::size_t>(),   c.at("fp").get<std::size_t>(),
                         c.at("fn").get<std::size_t>(),   c.at("precision").get<double>(),
                         c.at("recall").get<double>(),    c.at("f1").get<double>()};
            r.combos.push_back(std::move(m));
        }
        for (const auto& v : j.value("validity", nlohmann::json::array())) {
            r.validity.push_back({v.at("model_id").get<std::string>(), technique_from(v.at("technique").get<std::string>()),
                                  v.at("valid").get<std::size_t>(), v.at("regex").get<std::size_t>(),
                                  v.at("invalid").get<std::size_t>(), v.at("empty").get<std::size_t>(),
                                  v.at("total").get<std::size_t>(), v.at("valid_pct").get<double>()});
        }
        for (const auto& p : j.value("predicates", nlohmann::json::array())) {
            r.predicates.push_back({p.at("model_id").get<std::string>(),
                                    technique_from(p.at("technique").get<std::string>()),
                                    mode_from(p.at("mode").get<std::string>()),
                                    {p.at("predicate").get<std::string>(), p.at("missed").get<std::size_t>(),
                                     p.at("hallucinated").get<std::size_t>()}});
        }
        for (const auto& c : j.value("confusions", nlohmann::json::array())) {
            r.confusions.push_back({c.at("model_id").get<std::string>(),
                                    technique_from(c.at("technique").get<std::string>()),
                                    mode_from(c.at("mode").get<std::string>()),
                                    {c.at("omitted").get<std::string>(), c.at("produced").get<std::string>(),
                                     c.at("frequency").get<std::size_t>()}});
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("report JSON: ") + e.what());
    }
    return r;
}

std::map<std::string, std::string> report_to_csv(const AggregateReport& r) {
    std::map<std::string, std::string> out;
    auto& combos = out["combos.csv"];
    combos = csv_line(kComboHeader);
    for (const auto& c : r.combos) {
        combos += csv_line({c.model_id, tag(c.technique), tag(c.mode), std::to_string(c.entries),
                            std::to_string(c.metrics.tp), std::to_string(c.metrics.fp), std::to_string(c.metrics.fn),
                            format_double(c.metrics.precision), format_double(c.metrics.recall),
                            format_double(c.metrics.f1)});
    }
    auto& validity = out["validity.csv"];
    validity = csv_line(kValidityHeader);
    for (const auto& v : r.validity) {
        validity += csv_line({v.model_id, tag(v.technique), std::to_string(v.valid), std::to_string(v.regex),
                              std::to_string(v.invalid), std::to_string(v.empty), std::to_string(v.total),
                              format_double(v.valid_pct)});
    }
    auto& predicates = out["predicates.csv"];
    predicates = csv_line(kPredicateHeader);
    for (const auto& p : r.predicates) {
        predicates += csv_line({p.model_id, tag(p.technique), tag(p.mode), p.counts.predicate,
                                std::to_string(p.counts.missed), std::to_string(p.counts.hallucinated)});
    }
    auto& confusions = out["confusions.csv"];
    confusions = csv_line(kConfusionHeader);
    for (const auto& c : r.confusions) {
        confusions += csv_line({c.model_id, tag(c.technique), tag(c.mode), c.pair.omitted, c.pair.produced,
                                std::to_string(c.pair.frequency)});
    }
    return out;
}

AggregateReport report_from_csv(const std::map<std::string, std::string>& tables) {
    AggregateReport r;
    for (const auto& row : table_rows(tables, "combos.csv", kComboHeader)) {
        r.combos.push_back({row[0], technique_from(row[1]), mode_from(row[2]), count_from(row[3]),
                            {count_from(row[4]), count_from(row[5]), count_from(row[6]), parse_double(row[7]),
                             parse_double(row[8]), parse_double(row[9])}});
    }
    for (const auto& row : table_rows(tables, "validity.csv", kValidityHeader)) {
        r.validity.push_back({row[0], technique_from(row[1]), count_from(row[2]), count_from(row[3]),
                              count_from(row[4]), count_from(row[5]), count_from(row[6]), parse_double(row[7])});
    }
    for (const auto& row : table_rows(tables, "predicates.csv", kPredicateHeader)) {
        r.predicates.push_back(
            {row[0], technique_from(row[1]), mode_from(row[2]), {row[3], count_from(row[4]), count_from(row[5])}});
    }
    for (const auto& row : table_rows(tables, "confusions.csv", kConfusionHeader)) {
        r.confusions.push_back(
            {row[0], technique_from(row[1]), mode_from(row[2]), {row[3], row[4], count_from(row[5])}});
    }
    return r;
}

std::vector<TechniqueScore> technique_ranking(const AggregateReport& r, MatchMode mode) {
    std::map<Technique, std::pair<double, std::size_t>> sums;
    for (const auto* c : combos_of(r, mode)) {
        auto& [sum, n] = sums[c->technique];
        sum += c->metrics.f1;
        ++n;
    }
    std::vector<TechniqueScore> out;
    for (const auto& [t, s] : sums) out.push_back({t, s.first / static_cast<double>(s.second), s.second});
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.mean_f1 > b.mean_f1; });
    return out;
}

std::vector<ComboMetrics> combo_ranking(const AggregateReport& r, MatchMode mode) {
    std::vector<ComboMetrics> out;
    for (const auto* c : combos_of(r, mode)) out.push_back(*c);
    std::sort(out.begin(), out.end(), better);
    return out;
}

std::vector<ComboMetrics> best_technique_per_model(const AggregateReport& r, MatchMode mode) {
    std::map<std::string, ComboMetrics> best;
    for (const auto* c : combos_of(r, mode)) {
        auto [it, fresh] = best.emplace(c->model_id, *c);
        if (!fresh && better(*c, it->second)) it->second = *c;
    }
    std::vector<ComboMetrics> out;
    for (auto& [m, c] : best) out.push_back(std::move(c));
    return out;
}

std::vector<ComboMetrics> best_model_per_technique(const AggregateReport& r, MatchMode mode) {
    std::map<Technique, ComboMetrics> best;
    for (const auto* c : combos_of(r, mode)) {
        auto [it, fresh] = best.emplace(c->technique, *c);
        if (!fresh && better(*c, it->second)) it->second = *c;
    }
    std::vector<ComboMetrics> out;
    for (auto& [t, c] : best) out.push_back(std::move(c));
    return out;
}

std::vector<TechniquePredicates> technique_predicate_tables(const AggregateReport& r, MatchMode mode, std::size_t n) {
    std::map<Technique, std::map<std::string, PredicateCount>> sums;
    for (const auto& p : r.predicates) {
        if (p.mode != mode) continue;
        auto& c = sums[p.technique][p.counts.predicate];
        c.predicate = p.counts.predicate;
        c.missed += p.counts.missed;
        c.hallucinated += p.counts.hallucinated;
    }
    std::vector<TechniquePredicates> out;
    for (const auto& [t, byname] : sums) {
        std::vector<PredicateCount> counts;
        for (const auto& [name, c] : byname) counts.push_back(c);
        out.push_back({t, top_missed(counts, n), top_hallucinated(counts, n)});
    }
    return out;
}

std::vector<ConfusionPair> corpus_confusions(const AggregateReport& r, MatchMode mode) {
    std::map<std::pair<std::string, std::string>, std::size_t> sums;
    for (const auto& c : r.confusions) {
        if (c.mode == mode) sums[{c.pair.omitted, c.pair.produced}] += c.pair.frequency;
    }
    std::vector<ConfusionPair> out;
    for (const auto& [k, n] : sums) out.push_back({k.first, k.second, n});
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.frequency > b.frequency; });
    return out;
}

HeatmapGrid heatmap_grid(const AggregateReport& r, MatchMode mode) {
    HeatmapGrid g;
    g.mode = mode;
    std::set<std::string> models;
    std::set<Technique> techniques;
    auto combos = combos_of(r, mode);
    for (const auto* c : combos) {
        models.insert(c->model_id);
        techniques.insert(c->technique);
    }
    g.models.assign(models.begin(), models.end());
    g.techniques.assign(techniques.begin(), techniques.end());
    g.cells.assign(g.models.size(), std::vector<std::optional<double>>(g.techniques.size()));
    for (const auto* c : combos) {
        auto row = std::lower_bound(g.models.begin(), g.models.end(), c->model_id) - g.models.begin();
        auto col = std::lower_bound(g.techniques.begin(), g.techniques.end(), c->technique) - g.techniques.begin();
        g.cells[row][col] = c->metrics.f1;
    }
    return g;
}

std::string heatmap_csv(const HeatmapGrid& g) {
    std::vector<std::string> header{"model"};
    for (auto t : g.techniques) header.push_back(tag(t));
    std::string out = csv_line(header);
    for (std::size_t i = 0; i < g.models.size(); ++i) {
        std::vector<std::string> row{g.models[i]};
        for (const auto& cell : g.cells[i]) row.push_back(cell ? format_double(*cell) : std::string());
        out += csv_line(row);
    }
    return out;
}

std::string heatmap_svg(const HeatmapGrid& g) {
    constexpr int kCellW = 96, kCellH = 40, kLeft = 220, kTop = 70, kLegendH = 70;
    const int width = kLeft + kCellW * static_cast<int>(std::max<std::size_t>(g.techniques.size(), 3)) + 20;
    const int height = kTop + kCellH * static_cast<int>(g.models.size()) + kLegendH;
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<defs><linearGradient id=\"scale\" x1=\"0\" x2=\"1\" y1=\"0\" y2=\"0\">"
         "<stop offset=\"0\" stop-color=\"" + colour(0) + "\"/><stop offset=\"1\" stop-color=\"" + colour(1) +
         "\"/></linearGradient></defs>\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    s += "<text x=\"10\" y=\"20\" font-size=\"14\" font-weight=\"bold\">Micro-F1 (" + tag(g.mode) + ")</text>\n";
    for (std::size_t j = 0; j < g.techniques.size(); ++j) {
        int x = kLeft + static_cast<int>(j) * kCellW + kCellW / 2;
        s += "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(kTop - 10) + "\" text-anchor=\"middle\">" +
             xml_escape(tag(g.techniques[j])) + "</text>\n";
    }
    for (std::size_t i = 0; i < g.models.size(); ++i) {
        int y = kTop + static_cast<int>(i) * kCellH;
        s += "<text x=\"" + std::to_string(kLeft - 8) + "\" y=\"" + std::to_string(y + kCellH / 2 + 4) +
             "\" text-anchor=\"end\">" + xml_escape(g.models[i]) + "</text>\n";
        for (std::size_t j = 0; j < g.techniques.size(); ++j) {
            int x = kLeft + static_cast<int>(j) * kCellW;
            const auto& cell = g.cells[i][j];
            s += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
                 std::to_string(kCellW) + "\" height=\"" + std::to_string(kCellH) + "\" fill=\"" +
                 (cell ? colour(*cell) : std::string("#dddddd")) + "\" stroke=\"#ffffff\"/>\n";
            s += "<text x=\"" + std::to_string(x + kCellW / 2) + "\" y=\"" + std::to_string(y + kCellH / 2 + 4) +
                 "\" text-anchor=\"middle\" fill=\"" + (cell && *cell > 0.5 ? "#ffffff" : "#000000") + "\">" +
                 (cell ? fixed4(*cell) : std::string("n/a")) + "</text>\n";
        }
    }
    int ly = kTop + kCellH * static_cast<int>(g.models.size()) + 25;
    s += "<rect x=\"" + std::to_string(kLeft) + "\" y=\"" + std::to_string(ly) +
         "\" width=\"200\" height=\"12\" fill=\"url(#scale)\"/>\n";
    s += "<text x=\"" + std::to_string(kLeft) + "\" y=\"" + std::to_string(ly + 26) +
         "\" text-anchor=\"middle\">0.0000</text>\n";
    s += "<text x=\"" + std::to_string(kLeft + 200) + "\" y=\"" + std::to_string(ly + 26) +
         "\" text-anchor=\"middle\">1.0000</text>\n";
    s += "</svg>\n";
    return s;
}

std::map<std::string, std::string> ranking_csv(const AggregateReport& r) {
    std::map<std::string, std::string> out;
    std::set<MatchMode> modes;
    for (const auto& c : r.combos) modes.insert(c.mode);
    for (auto mode : modes) {
        auto suffix = "_" + tag(mode) + ".csv";
        auto& tech = out["technique_ranking" + suffix];
        tech = csv_line({"rank", "technique", "mean_f1", "combos"});
        std::size_t rank = 0;
        for (const auto& t : technique_ranking(r, mode)) {
            tech += csv_line({std::to_string(++rank), tag(t.technique), format_double(t.mean_f1),
                              std::to_string(t.combos)});
        }
        auto combo_rows = [](const std::vector<ComboMetrics>& combos, bool ranked) {
            std::string text = csv_line({ranked ? "rank" : "index", "model_id", "technique", "precision", "recall", "f1"});
            std::size_t i = 0;
            for (const auto& c : combos) {
                text += csv_line({std::to_string(++i), c.model_id, tag(c.technique), format_double(c.metrics.precision),
                                  format_double(c.metrics.recall), format_double(c.metrics.f1)});
            }
            return text;
        };
        out["combo_ranking" + suffix] = combo_rows(combo_ranking(r, mode), true);
        out["best_technique_per_model" + suffix] = combo_rows(best_technique_per_model(r, mode), false);
        out["best_model_per_technique" + suffix] = combo_rows(best_model_per_technique(r, mode), false);

        auto& preds = out["top_predicates" + suffix];
        preds = csv_line({"technique", "kind", "rank", "predicate", "count"});
        for (const auto& t : technique_predicate_tables(r, mode)) {
            std::size_t i = 0;
            for (const auto& m : t.missed) preds += csv_line({tag(t.technique), "missed", std::to_string(++i), m.predicate, std::to_string(m.count)});
            i = 0;
            for (const auto& h : t.hallucinated) preds += csv_line({tag(t.technique), "hallucinated", std::to_string(++i), h.predicate, std::to_string(h.count)});
        }
        auto& conf = out["confusion_ranking" + suffix];
        conf = csv_line({"rank", "omitted", "produced", "frequency"});
        std::size_t i = 0;
        for (const auto& c : corpus_confusions(r, mode)) {
            conf += csv_line({std::to_string(++i), c.omitted, c.produced, std::to_string(c.frequency)});
        }
    }
    return out;
}

}  // namespace logkg
