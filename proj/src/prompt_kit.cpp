#include "logkg/prompt_kit.hpp"

#include "logkg/dataset.hpp"
#include "logkg/error.hpp"
#include "logkg/turtle.hpp"

#include <algorithm>
#include <cstdlib>

#ifndef LOGKG_DATA_DIR
#define LOGKG_DATA_DIR "data"
#endif

namespace logkg {

namespace {

constexpr std::array kTechniques{Technique::ZSP, Technique::ZSP_CoT, Technique::OSP, Technique::OSP_CoT,
                                 Technique::FSP, Technique::FSP_CoT, Technique::CPP, Technique::SCP,
                                 Technique::ToT, Technique::GMV};

constexpr std::array kLabels{SectionLabel::TaskInstruction,          SectionLabel::OutputFormatSpecification,
                             SectionLabel::ConstraintsAndAssumptions, SectionLabel::InternalProcessingProtocol,
                             SectionLabel::OntologyAllowedPredicates, SectionLabel::SelfCritiqueRequirement,
                             SectionLabel::ConstraintRules,           SectionLabel::ExampleSection,
                             SectionLabel::InputLogIsolation};

std::string normalized_tag(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '&' || c == '_' || c == '-' || c == ' ') continue;
        out += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    }
    return out;
}

std::string_view trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::size_t index_of(Technique t) { return static_cast<std::size_t>(t); }

bool contains(std::string_view haystack, std::string_view needle) {
    return haystack.find(needle) != std::string_view::npos;
}

// Replaces both markers in a single pass, so substituted text is never rescanned.
std::string substitute(std::string_view body, std::string_view log_line, std::string_view examples) {
    std::string out;
    std::size_t i = 0;
    while (i < body.size()) {
        if (body.substr(i).starts_with(kLogLineMarker)) {
            out += log_line;
            i += kLogLineMarker.size();
        } else if (body.substr(i).starts_with(kExamplesMarker)) {
            out += examples;
            i += kExamplesMarker.size();
        } else {
            out += body[i++];
        }
    }
    return out;
}

std::string render_example(const BankExample& e) {
    return "Example log line:\n" + e.log_line + "\nExample RDF triples:\n" + e.ttl;
}

std::uint64_t seq_of(const std::string& subject) {
    auto slash = subject.find_last_of('/');
    std::uint64_t seq = 0;
    for (std::size_t i = slash + 1; i < subject.size(); ++i) {
        if (subject[i] < '0' || subject[i] > '9') return 0;
        seq = seq * 10 + static_cast<std::uint64_t>(subject[i] - '0');
    }
    return seq;
}

}  // namespace

std::span<const Technique> technique_matrix() { return kTechniques; }

std::string_view to_string(Technique t) {
    switch (t) {
        case Technique::ZSP: return "ZSP";
        case Technique::ZSP_CoT: return "ZSP_CoT";
        case Technique::OSP: return "OSP";
        case Technique::OSP_CoT: return "OSP_CoT";
        case Technique::FSP: return "FSP";
        case Technique::FSP_CoT: return "FSP_CoT";
        case Technique::CPP: return "CPP";
        case Technique::SCP: return "SCP";
        case Technique::ToT: return "ToT";
        case Technique::GMV: return "GMV";
    }
    return "?";
}

std::optional<Technique> parse_technique(std::string_view s) {
    auto key = normalized_tag(s);
    if (key == "zpt") return Technique::ZSP;
    if (key == "zptcot") return Technique::ZSP_CoT;
    if (key == "ccp") return Technique::CPP;
    for (auto t : kTechniques) {
        if (normalized_tag(to_string(t)) == key) return t;
    }
    return std::nullopt;
}

std::string file_stem(Technique t) {
    std::string out;
    for (char c : to_string(t)) out += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    return out;
}

bool uses_one_example(Technique t) { return t == Technique::OSP || t == Technique::OSP_CoT; }
bool uses_all_examples(Technique t) { return t == Technique::FSP || t == Technique::FSP_CoT; }

std::string_view to_string(SectionLabel l) {
    switch (l) {
        case SectionLabel::TaskInstruction: return "Task Instruction";
        case SectionLabel::OutputFormatSpecification: return "Output Format Specification";
        case SectionLabel::ConstraintsAndAssumptions: return "Constraints and Assumptions";
        case SectionLabel::InternalProcessingProtocol: return "Internal Processing Protocol";
        case SectionLabel::OntologyAllowedPredicates: return "Ontology & Allowed Predicates";
        case SectionLabel::SelfCritiqueRequirement: return "Self-Critique Requirement";
        case SectionLabel::ConstraintRules: return "Constraints";
        case SectionLabel::ExampleSection: return "Example Section";
        case SectionLabel::InputLogIsolation: return "Input Log Isolation";
    }
    return "?";
}

bool PromptTemplate::has(SectionLabel l) const {
    return std::any_of(sections.begin(), sections.end(), [l](const auto& s) { return s.label == l; });
}

PromptTemplate parse_template(Technique t, std::string_view text) {
    auto where = std::string(to_string(t)) + " template: ";
    PromptTemplate out{t, {}};
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        auto header = trim(line);
        std::optional<SectionLabel> label;
        if (header.size() > 2 && header.front() == '[' && header.back() == ']') {
            for (auto l : kLabels) {
                if (header.substr(1, header.size() - 2) == to_string(l)) label = l;
            }
        }
        if (label) {
            if (out.has(*label)) throw DataError(where + "duplicate section [" + std::string(to_string(*label)) + "]");
            out.sections.push_back({*label, {}});
        } else if (!out.sections.empty()) {
            auto& body = out.sections.back().body;
            if (!body.empty()) body += '\n';
            body += line;
        } else if (!trim(line).empty()) {
            throw DataError(where + "text before the first section header");
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    for (auto& s : out.sections) s.body = std::string(trim(s.body));

    for (auto required : {SectionLabel::TaskInstruction, SectionLabel::OutputFormatSpecification,
                          SectionLabel::ConstraintsAndAssumptions, SectionLabel::InputLogIsolation}) {
        if (!out.has(required)) throw DataError(where + "missing section [" + std::string(to_string(required)) + "]");
    }
    const auto& last = out.sections.back();
    if (last.label != SectionLabel::InputLogIsolation) throw DataError(where + "[Input Log Isolation] must come last");
    if (!contains(last.body, kLogLineMarker)) throw DataError(where + "input section lacks " + std::string(kLogLineMarker));

    bool wants_examples = uses_one_example(t) || uses_all_examples(t);
    if (wants_examples != out.has(SectionLabel::ExampleSection)) {
        throw DataError(where + (wants_examples ? "missing [Example Section]" : "unexpected [Example Section]"));
    }
    for (const auto& s : out.sections) {
        bool marker = contains(s.body, kExamplesMarker);
        if (marker != (s.label == SectionLabel::ExampleSection)) {
            throw DataError(where + std::string(kExamplesMarker) + " must appear only in [Example Section]");
        }
        if (s.label != SectionLabel::InputLogIsolation && contains(s.body, kLogLineMarker)) {
            throw DataError(where + std::string(kLogLineMarker) + " must appear only in [Input Log Isolation]");
        }
    }
    return out;
}

ExampleBank make_example_bank(const std::vector<DatasetRecord>& records) {
    ExampleBank bank;
    for (const auto& r : records) {
        auto where = "example " + std::to_string(r.entry_id);
        LogRecordFields fields;
        try {
            fields = parse_entry({r.entry_id, r.log_record, r.log});
        } catch (const MalformedHeader& e) {
            throw DataError(where + ": " + e.what());
        }
        if (!(annotate(fields, seq_of(r.triples.subject())) == r.triples)) {
            throw DataError(where + ": triples differ from the annotation of its log line");
        }
        if (!bank.one_shot_index && fields.http_method) bank.one_shot_index = bank.examples.size();
        bank.examples.push_back({r.log, serialize(r.triples)});
    }
    return bank;
}

ExampleBank load_example_bank(const std::filesystem::path& path) { return make_example_bank(read_dataset(path)); }

TemplateLibrary TemplateLibrary::from_texts(const std::array<std::string, 10>& texts) {
    TemplateLibrary lib;
    for (auto t : kTechniques) {
        lib.sources_[index_of(t)] = texts[index_of(t)];
        lib.templates_[index_of(t)] = parse_template(t, texts[index_of(t)]);
    }
    return lib;
}

TemplateLibrary TemplateLibrary::load(const std::filesystem::path& dir) {
    std::array<std::string, 10> texts;
    for (auto t : kTechniques) texts[index_of(t)] = read_file(dir / (file_stem(t) + ".txt"));
    return from_texts(texts);
}

const PromptTemplate& TemplateLibrary::get(Technique t) const { return templates_[index_of(t)]; }

const std::string& TemplateLibrary::source(Technique t) const { return sources_[index_of(t)]; }

std::string TemplateLibrary::build_prompt(Technique t, std::string_view log_line, const ExampleBank& bank) const {
    std::string examples;
    if (uses_one_example(t)) {
        if (!bank.one_shot_index) throw MissingExamples(std::string(to_string(t)) + " needs an HTTP request example");
        examples = render_example(bank.examples.at(*bank.one_shot_index));
    } else if (uses_all_examples(t)) {
        if (bank.examples.size() < kFewShotCount) {
            throw MissingExamples(std::string(to_string(t)) + " needs " + std::to_string(kFewShotCount) +
                                  " examples, bank has " + std::to_string(bank.examples.size()));
        }
        for (std::size_t i = 0; i < bank.examples.size(); ++i) {
            if (i > 0) examples += "\n\n";
            examples += "Example " + std::to_string(i + 1) + "\n" + render_example(bank.examples[i]);
        }
    }
    std::string out;
    for (const auto& s : get(t).sections) {
        if (!out.empty()) out += "\n\n";
        out += '[';
        out += to_string(s.label);
        out += "]\n";
        out += substitute(s.body, log_line, examples);
    }
    out += '\n';
    return out;
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("LOGKG_DATA_DIR"); env && *env) return env;
    return LOGKG_DATA_DIR;
}

}  // namespace logkg
