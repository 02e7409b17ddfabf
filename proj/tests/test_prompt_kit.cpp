#include <doctest.h>

#include "logkg/error.hpp"
#include "logkg/prompt_kit.hpp"
#include "logkg/turtle.hpp"
#include "support.hpp"

#include <sstream>

using namespace logkg;

namespace {

const TemplateLibrary& library() {
    static const auto lib = TemplateLibrary::load(default_data_dir() / "prompts");
    return lib;
}

const ExampleBank& bank() {
    static const auto b = load_example_bank(default_data_dir() / "example_bank.jsonl");
    return b;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

// Drops the "[Example Section]" block (up to the next section header).
std::string without_examples(const std::string& prompt) {
    std::string out;
    bool skipping = false;
    for (const auto& line : lines_of(prompt)) {
        if (line.starts_with("[") && line.ends_with("]") && line.find(' ') != std::string::npos) {
            skipping = line == "[Example Section]";
        } else if (line.starts_with("[") && line.ends_with("]")) {
            skipping = false;
        }
        if (!skipping) out += line + "\n";
    }
    return out;
}

bool is_line_subsequence(const std::vector<std::string>& needle, const std::vector<std::string>& hay) {
    std::size_t i = 0;
    for (const auto& line : hay) {
        if (i < needle.size() && line == needle[i]) ++i;
    }
    return i == needle.size();
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

const char* kNoCopy = "Do not take any values from the example";

}  // namespace

TEST_CASE("technique matrix order and tags") {
    auto m = technique_matrix();
    REQUIRE(m.size() == 10);
    CHECK(m.front() == Technique::ZSP);
    CHECK(m.back() == Technique::GMV);
    std::vector<std::string> tags;
    for (auto t : m) tags.emplace_back(to_string(t));
    CHECK(tags == std::vector<std::string>{"ZSP", "ZSP_CoT", "OSP", "OSP_CoT", "FSP", "FSP_CoT", "CPP", "SCP", "ToT",
                                           "GMV"});
    auto again = technique_matrix();
    CHECK(std::equal(m.begin(), m.end(), again.begin(), again.end()));
    for (auto t : m) CHECK(parse_technique(to_string(t)) == t);
}

TEST_CASE("technique aliases") {
    CHECK(parse_technique("ZPT") == Technique::ZSP);
    CHECK(parse_technique("ZPT&CoT") == Technique::ZSP_CoT);
    CHECK(parse_technique("fsp&cot") == Technique::FSP_CoT);
    CHECK(parse_technique("FSP CoT") == Technique::FSP_CoT);
    CHECK(parse_technique("CCP") == Technique::CPP);
    CHECK(parse_technique("tot") == Technique::ToT);
    CHECK_FALSE(parse_technique("XYZ"));
    CHECK_FALSE(parse_technique(""));
    CHECK(file_stem(Technique::FSP_CoT) == "fsp_cot");
}

TEST_CASE("every template has the common sections with the input last") {
    for (auto t : technique_matrix()) {
        CAPTURE(to_string(t));
        const auto& tpl = library().get(t);
        CHECK(tpl.has(SectionLabel::TaskInstruction));
        CHECK(tpl.has(SectionLabel::OutputFormatSpecification));
        CHECK(tpl.has(SectionLabel::ConstraintsAndAssumptions));
        REQUIRE_FALSE(tpl.sections.empty());
        CHECK(tpl.sections.back().label == SectionLabel::InputLogIsolation);
        CHECK(tpl.has(SectionLabel::ExampleSection) == (uses_one_example(t) || uses_all_examples(t)));
    }
    CHECK(library().get(Technique::CPP).has(SectionLabel::ConstraintRules));
    CHECK(library().get(Technique::SCP).has(SectionLabel::SelfCritiqueRequirement));
    CHECK(library().get(Technique::ZSP_CoT).has(SectionLabel::InternalProcessingProtocol));
    CHECK(library().get(Technique::ZSP_CoT).has(SectionLabel::OntologyAllowedPredicates));
}

TEST_CASE("template structure is validated") {
    CHECK_THROWS_AS(parse_template(Technique::ZSP, "[Task Instruction]\nx\n"), DataError);
    CHECK_THROWS_AS(parse_template(Technique::ZSP,
                                   "[Task Instruction]\nx\n[Output Format Specification]\ny\n"
                                   "[Constraints and Assumptions]\nz\n[Input Log Isolation]\nno marker\n"),
                    DataError);
    CHECK_THROWS_AS(parse_template(Technique::ZSP,
                                   "[Task Instruction]\nx {{LOG_LINE}}\n[Output Format Specification]\ny\n"
                                   "[Constraints and Assumptions]\nz\n[Input Log Isolation]\n{{LOG_LINE}}\n"),
                    DataError);
    CHECK_THROWS_AS(parse_template(Technique::OSP,
                                   "[Task Instruction]\nx\n[Output Format Specification]\ny\n"
                                   "[Constraints and Assumptions]\nz\n[Input Log Isolation]\n{{LOG_LINE}}\n"),
                    DataError);
    CHECK_NOTHROW(parse_template(Technique::ZSP,
                                 "[Task Instruction]\nx\n[Output Format Specification]\ny\n"
                                 "[Constraints and Assumptions]\nz\n[Input Log Isolation]\n{{LOG_LINE}}\n"));
}

TEST_CASE("packaged example bank") {
    const auto& b = bank();
    REQUIRE(b.examples.size() == kFewShotCount);
    REQUIRE(b.one_shot_index);
    const auto& one = b.examples[*b.one_shot_index];
    bool http = one.log_line.find("\"POST ") != std::string::npos || one.log_line.find("\"GET ") != std::string::npos;
    CHECK(http);
    for (const auto& e : b.examples) {
        CAPTURE(e.log_line);
        CHECK(classify(e.ttl).tag == Outcome::Valid);
    }
    // Bank lines are not lines of the evaluation fixture.
    auto fixture = test::fixture_text("openstack_50.log");
    for (const auto& e : b.examples) CHECK(fixture.find(e.log_line) == std::string::npos);
}

TEST_CASE("bank entries must agree with the annotator") {
    auto records = test::fixture_dataset().records;
    records.resize(3);
    CHECK_NOTHROW(make_example_bank(records));
    auto wrong = records;
    wrong[1].triples.triples[3].object = Term::literal("ERROR");
    CHECK_THROWS_AS(make_example_bank(wrong), DataError);
}

TEST_CASE("zero-shot prompt") {
    auto p = library().build_prompt(Technique::ZSP, test::post_line(), bank());
    CHECK(p.find("convert a single OpenStack log line into RDF triples") != std::string::npos);
    CHECK(p.find("[Example Section]") == std::string::npos);
    CHECK(count(p, test::post_line()) == 1);
    CHECK(p.find("{{") == std::string::npos);
}

TEST_CASE("one-shot prompt carries the HTTP example and the no-copy rule") {
    auto p = library().build_prompt(Technique::OSP, test::post_line(), bank());
    const auto& one = bank().examples[*bank().one_shot_index];
    CHECK(p.find(one.log_line) != std::string::npos);
    CHECK(p.find(one.ttl) != std::string::npos);
    CHECK(p.find(kNoCopy) != std::string::npos);
    for (std::size_t i = 0; i < bank().examples.size(); ++i) {
        if (i != *bank().one_shot_index) CHECK(p.find(bank().examples[i].ttl) == std::string::npos);
    }
}

TEST_CASE("few-shot prompt embeds the whole bank") {
    auto p = library().build_prompt(Technique::FSP, test::post_line(), bank());
    for (const auto& e : bank().examples) CHECK(p.find(e.ttl) != std::string::npos);
    CHECK(p.find("Example 27") != std::string::npos);

    ExampleBank small = bank();
    small.examples.pop_back();
    CHECK_THROWS_AS(library().build_prompt(Technique::FSP, test::post_line(), small), MissingExamples);
    CHECK_THROWS_AS(library().build_prompt(Technique::FSP_CoT, test::post_line(), small), MissingExamples);
    CHECK_THROWS_AS(library().build_prompt(Technique::OSP, test::post_line(), ExampleBank{}), MissingExamples);
    CHECK_NOTHROW(library().build_prompt(Technique::ZSP, test::post_line(), ExampleBank{}));
}

TEST_CASE("strategy-specific content") {
    auto cot = library().build_prompt(Technique::ZSP_CoT, test::post_line(), bank());
    CHECK(cot.find("1. Tokenization") != std::string::npos);
    CHECK(cot.find("log:clientIp") != std::string::npos);
    CHECK(cot.find("log:responseTime") != std::string::npos);
    auto cpp = library().build_prompt(Technique::CPP, test::post_line(), bank());
    for (int rule = 1; rule <= 7; ++rule) CHECK(cpp.find("Rule " + std::to_string(rule)) != std::string::npos);
    auto tot = library().build_prompt(Technique::ToT, test::post_line(), bank());
    for (int phase = 1; phase <= 4; ++phase) CHECK(tot.find("PHASE " + std::to_string(phase)) != std::string::npos);
    auto gmv = library().build_prompt(Technique::GMV, test::post_line(), bank());
    CHECK(gmv.find("three independent") != std::string::npos);
    auto scp = library().build_prompt(Technique::SCP, test::post_line(), bank());
    CHECK(scp.find("[Self-Critique Requirement]") != std::string::npos);
}

TEST_CASE("zero-shot text is kept inside the few-shot prompt") {
    auto zsp = lines_of(library().build_prompt(Technique::ZSP, test::post_line(), bank()));
    for (auto t : {Technique::FSP, Technique::OSP}) {
        auto other = lines_of(without_examples(library().build_prompt(t, test::post_line(), bank())));
        CHECK(is_line_subsequence(zsp, other));
    }
    auto zsp_cot = lines_of(library().build_prompt(Technique::ZSP_CoT, test::post_line(), bank()));
    auto fsp_cot = lines_of(without_examples(library().build_prompt(Technique::FSP_CoT, test::post_line(), bank())));
    CHECK(is_line_subsequence(zsp_cot, fsp_cot));
}

TEST_CASE("example-free techniques never show example annotations") {
    for (auto t : {Technique::ZSP, Technique::ZSP_CoT, Technique::CPP, Technique::SCP, Technique::ToT,
                   Technique::GMV}) {
        CAPTURE(to_string(t));
        auto p = library().build_prompt(t, test::post_line(), bank());
        CHECK(p.find(kNoCopy) == std::string::npos);
        for (const auto& e : bank().examples) {
            CHECK(p.find(e.ttl) == std::string::npos);
            CHECK(p.find(e.log_line) == std::string::npos);
        }
    }
}

TEST_CASE("each prompt isolates exactly one input line") {
    for (auto t : technique_matrix()) {
        CAPTURE(to_string(t));
        auto p = library().build_prompt(t, test::post_line(), bank());
        CHECK(count(p, test::post_line()) == 1);
        auto isolation = p.rfind("[Input Log Isolation]");
        REQUIRE(isolation != std::string::npos);
        CHECK(p.find(test::post_line()) > isolation);
        if (uses_one_example(t) || uses_all_examples(t)) CHECK(p.find(kNoCopy) != std::string::npos);
    }
}

TEST_CASE("marker text inside the log line is not expanded") {
    auto line = test::post_line() + " {{EXAMPLES}}";
    auto p = library().build_prompt(Technique::OSP, line, bank());
    CHECK(count(p, "{{EXAMPLES}}") == 1);
}
