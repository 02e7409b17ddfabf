#include "logkg/evaluator.hpp"

#include "logkg/error.hpp"
#include "logkg/ontology.hpp"
#include "logkg/turtle.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <regex>
#include <set>
#include <unordered_map>

namespace logkg {

namespace {

std::string_view local_part(std::string_view name) {
    auto colon = name.find(':');
    return colon == std::string_view::npos ? name : name.substr(colon + 1);
}

std::optional<std::string> numeric_key(const std::string& lexical) {
    static const std::regex kNumber(R"([+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)");
    if (!std::regex_match(lexical, kNumber)) return std::nullopt;
    std::string_view s = lexical;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    if (v == 0) v = 0;  // folds -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::optional<std::string> datetime_key(const std::string& lexical) {
    static const std::regex kDateTime(R"((\d{4}-\d{2}-\d{2})[ T](\d{2}:\d{2}:\d{2})(?:\.(\d+))?(Z|[+-]00:?00)?)");
    std::smatch m;
    if (!std::regex_match(lexical, m, kDateTime)) return std::nullopt;
    std::string fraction = m[3].str();
    while (!fraction.empty() && fraction.back() == '0') fraction.pop_back();
    std::string key = m[1].str() + "T" + m[2].str();
    if (!fraction.empty()) key += "." + fraction;
    return key;
}

std::string iri_local_name(std::string_view iri) {
    while (!iri.empty() && (iri.back() == '/' || iri.back() == '#')) iri.remove_suffix(1);
    auto cut = iri.find_last_of("/#");
    return std::string(cut == std::string_view::npos ? iri : iri.substr(cut + 1));
}

const std::unordered_map<std::string, std::string>& vocabulary_keys() {
    static const auto keys = [] {
        std::unordered_map<std::string, std::string> m;
        for (const auto& p : vocabulary()) m.emplace(normalize_predicate(p.name), std::string(p.local_name()));
        return m;
    }();
    return keys;
}

struct Keyed {
    std::string key;
    std::size_t index;
};

std::string statement_key(const Triple& t, MatchMode mode) {
    std::string key;
    if (mode == MatchMode::Syntactic) {
        key = t.subject;
        key += '\x1f';
        key += t.predicate;
    } else {
        key = normalize_predicate(t.predicate);
    }
    key += '\x1f';
    key += normalize_object(t.object, mode);
    return key;
}

std::vector<Triple> dedupe(const TripleSet& ts) {
    std::vector<Triple> out;
    std::set<Triple> seen;
    for (const auto& t : ts.triples) {
        if (seen.insert(t).second) out.push_back(t);
    }
    return out;
}

}  // namespace

std::string_view to_string(MatchMode m) { return m == MatchMode::Syntactic ? "syntactic" : "semantic"; }

std::optional<MatchMode> parse_mode(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "syntactic") return MatchMode::Syntactic;
    if (lower == "semantic") return MatchMode::Semantic;
    return std::nullopt;
}

std::string normalize_predicate(std::string_view name) {
    std::string out;
    for (char c : local_part(name)) {
        if (c == '_' || c == '-') continue;
        out += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    }
    return out;
}

std::string normalize_object(const Term& object, MatchMode mode) {
    if (mode == MatchMode::Syntactic) return serialize_term(object);
    if (object.is_iri()) return iri_local_name(object.value);
    if (auto n = numeric_key(object.value)) return *n;
    if (auto d = datetime_key(object.value)) return *d;
    return object.value;
}

EntryScore match_entry(const TripleSet& generated, const TripleSet& reference, MatchMode mode, std::uint64_t entry_id) {
    EntryScore s;
    s.entry_id = entry_id;
    s.reference = dedupe(reference);
    auto gen = dedupe(generated);

    std::map<std::string, std::vector<std::size_t>> pending;  // key -> unpaired generated indices, in order
    for (std::size_t i = 0; i < gen.size(); ++i) pending[statement_key(gen[i], mode)].push_back(i);
    std::map<std::string, std::size_t> cursor;

    std::vector<bool> used(gen.size(), false);
    for (const auto& ref : s.reference) {
        auto key = statement_key(ref, mode);
        auto it = pending.find(key);
        auto& pos = cursor[key];
        if (it != pending.end() && pos < it->second.size()) {
            auto g = it->second[pos++];
            used[g] = true;
            s.matched.push_back(gen[g]);
        } else {
            s.missed.push_back(ref);
        }
    }
    for (std::size_t i = 0; i < gen.size(); ++i) {
        if (!used[i]) s.hallucinated.push_back(gen[i]);
    }
    s.tp = s.matched.size();
    s.fn = s.missed.size();
    s.fp = s.hallucinated.size();
    return s;
}

Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
    Metrics m{tp, fp, fn, 0, 0, 0};
    if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (m.precision + m.recall > 0) m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

Metrics aggregate(std::span<const EntryScore> scores) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& s : scores) {
        tp += s.tp;
        fp += s.fp;
        fn += s.fn;
    }
    return metrics_from_counts(tp, fp, fn);
}

std::string canonical_predicate(std::string_view predicate) {
    const auto& keys = vocabulary_keys();
    if (auto it = keys.find(normalize_predicate(predicate)); it != keys.end()) return it->second;
    return std::string(local_part(predicate));
}

std::vector<PredicateCount> predicate_analysis(std::span<const EntryScore> scores) {
    std::map<std::string, PredicateCount> counts;
    for (const auto& s : scores) {
        for (const auto& t : s.missed) {
            auto name = canonical_predicate(t.predicate);
            counts[name].predicate = name;
            ++counts[name].missed;
        }
        for (const auto& t : s.hallucinated) {
            auto name = canonical_predicate(t.predicate);
            counts[name].predicate = name;
            ++counts[name].hallucinated;
        }
    }
    std::vector<PredicateCount> out;
    for (auto& [name, c] : counts) out.push_back(std::move(c));
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.missed + a.hallucinated > b.missed + b.hallucinated;
    });
    return out;
}

namespace {

std::vector<RankedCount> top_by(std::span<const PredicateCount> counts, std::size_t n,
                                std::size_t PredicateCount::*field) {
    std::vector<RankedCount> out;
    for (const auto& c : counts) {
        if (c.*field > 0) out.push_back({c.predicate, c.*field});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.count != b.count ? a.count > b.count : a.predicate < b.predicate;
    });
    if (out.size() > n) out.resize(n);
    return out;
}

}  // namespace

std::vector<RankedCount> top_missed(std::span<const PredicateCount> counts, std::size_t n) {
    return top_by(counts, n, &PredicateCount::missed);
}

std::vector<RankedCount> top_hallucinated(std::span<const PredicateCount> counts, std::size_t n) {
    return top_by(counts, n, &PredicateCount::hallucinated);
}

std::vector<ConfusionPair> confusion_pairs(std::span<const EntryScore> scores) {
    std::map<std::pair<std::string, std::string>, std::size_t> counts;
    for (const auto& s : scores) {
        std::set<std::string> reference_keys;
        for (const auto& t : s.reference) reference_keys.insert(normalize_predicate(t.predicate));
        std::vector<bool> used(s.hallucinated.size(), false);
        for (const auto& miss : s.missed) {
            auto value = normalize_object(miss.object, MatchMode::Semantic);
            for (std::size_t i = 0; i < s.hallucinated.size(); ++i) {
                const auto& h = s.hallucinated[i];
                if (used[i] || reference_keys.contains(normalize_predicate(h.predicate))) continue;
                if (normalize_object(h.object, MatchMode::Semantic) != value) continue;
                used[i] = true;
                ++counts[{canonical_predicate(miss.predicate), canonical_predicate(h.predicate)}];
                break;
            }
        }
    }
    std::vector<ConfusionPair> out;
    for (const auto& [pair, n] : counts) out.push_back({pair.first, pair.second, n});
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.frequency > b.frequency; });
    return out;
}

TripleSet generated_triples(const RunResult& result) {
    switch (result.outcome) {
        case Outcome::Valid:
            try {
                return parse_strict(result.cleaned);
            } catch (const ParseError& e) {
                throw DataError("entry " + std::to_string(result.entry_id) + " is tagged valid but does not parse: " +
                                e.what());
            }
        case Outcome::Regex: return extract_regex(result.cleaned);
        case Outcome::Invalid:
        case Outcome::Empty: break;
    }
    return {};
}

ComboEvaluation evaluate_results(const ResultFile& results, const ReferenceDataset& reference, MatchMode mode) {
    ComboEvaluation eval{results.model_id, results.technique, mode, {}};
    std::map<std::uint64_t, const RunResult*> by_id;
    for (const auto& r : results.results) {
        if (!by_id.emplace(r.entry_id, &r).second) {
            throw DataError(results.path.string() + ": duplicate result id " + std::to_string(r.entry_id));
        }
    }
    std::set<std::uint64_t> known;
    for (const auto& rec : reference.records) known.insert(rec.entry_id);
    for (const auto& [id, r] : by_id) {
        if (!known.contains(id)) {
            throw DataError(results.path.string() + ": result id " + std::to_string(id) + " is not in the reference");
        }
    }
    eval.scores.reserve(reference.records.size());
    for (const auto& rec : reference.records) {
        auto it = by_id.find(rec.entry_id);
        TripleSet generated = it == by_id.end() ? TripleSet{} : generated_triples(*it->second);
        eval.scores.push_back(match_entry(generated, rec.triples, mode, rec.entry_id));
    }
    return eval;
}

}  // namespace logkg
