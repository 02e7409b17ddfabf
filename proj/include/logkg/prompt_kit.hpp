#pragma once

#include "logkg/annotator.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace logkg {

enum class Technique : std::uint8_t { ZSP, ZSP_CoT, OSP, OSP_CoT, FSP, FSP_CoT, CPP, SCP, ToT, GMV };

/// The ten techniques in report column order.
std::span<const Technique> technique_matrix();
std::string_view to_string(Technique t);  // "ZSP", "ZSP_CoT", ...
/// Accepts the tags plus "&"-joined and table spellings (ZPT, ZPT&CoT, CCP),
/// case-insensitively.
std::optional<Technique> parse_technique(std::string_view s);
/// Template file stem, e.g. "fsp_cot".
std::string file_stem(Technique t);
bool uses_one_example(Technique t);
bool uses_all_examples(Technique t);

enum class SectionLabel : std::uint8_t {
    TaskInstruction,
    OutputFormatSpecification,
    ConstraintsAndAssumptions,
    InternalProcessingProtocol,
    OntologyAllowedPredicates,
    SelfCritiqueRequirement,
    ConstraintRules,
    ExampleSection,
    InputLogIsolation,
};

/// Header text as written in template files, e.g. "Task Instruction".
std::string_view to_string(SectionLabel l);

struct PromptSection {
    SectionLabel label;
    std::string body;

    bool operator==(const PromptSection&) const = default;
};

struct PromptTemplate {
    Technique technique{};
    std::vector<PromptSection> sections;

    bool has(SectionLabel l) const;
};

inline constexpr std::string_view kLogLineMarker = "{{LOG_LINE}}";
inline constexpr std::string_view kExamplesMarker = "{{EXAMPLES}}";
inline constexpr std::size_t kFewShotCount = 27;

/// Parses "[Header]" delimited template text and checks its structure.
/// Throws DataError.
PromptTemplate parse_template(Technique t, std::string_view text);

struct BankExample {
    std::string log_line;
    std::string ttl;
};

struct ExampleBank {
    std::vector<BankExample> examples;
    std::optional<std::size_t> one_shot_index;  // first example with an HTTP method
};

/// Builds a bank from dataset records. Throws DataError when a record's ttl
/// differs from what the annotator produces for its log line.
ExampleBank make_example_bank(const std::vector<DatasetRecord>& records);
ExampleBank load_example_bank(const std::filesystem::path& path);

class TemplateLibrary {
public:
    /// Reads "<stem>.txt" for every technique. Throws DataError.
    static TemplateLibrary load(const std::filesystem::path& dir);
    static TemplateLibrary from_texts(const std::array<std::string, 10>& texts);

    const PromptTemplate& get(Technique t) const;
    /// Raw file text, for hashing.
    const std::string& source(Technique t) const;

    /// The assembled prompt for one log line. Throws MissingExamples when the
    /// bank cannot supply what the technique needs.
    std::string build_prompt(Technique t, std::string_view log_line, const ExampleBank& bank) const;

private:
    std::array<std::string, 10> sources_;
    std::array<PromptTemplate, 10> templates_;
};

/// Directory holding the packaged prompt templates and example bank.
std::filesystem::path default_data_dir();

}  // namespace logkg
