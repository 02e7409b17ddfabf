#include <doctest.h>

#include "logkg/error.hpp"
#include "logkg/ontology.hpp"
#include "logkg/turtle.hpp"
#include "support.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

using namespace logkg;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

std::string remove_all(std::string text, char c) {
    text.erase(std::remove(text.begin(), text.end(), c), text.end());
    return text;
}

std::set<Triple> as_set(const TripleSet& ts) { return {ts.triples.begin(), ts.triples.end()}; }

TripleSet golden_set() { return annotate(parse_entry({2, "x", test::post_line()}), 2); }

}  // namespace

TEST_CASE("serialize layout") {
    CHECK(serialize(golden_set()) == test::golden_ttl());

    TripleSet one;
    one.add("http://s/1", "log:level", Term::literal("INFO"));
    CHECK(serialize(one) == "<http://s/1>\nlog:level \"INFO\" .");

    CHECK(serialize_term(Term::literal("202", "xsd:integer")) == "\"202\"^^xsd:integer");
    CHECK(serialize_term(Term::iri("http://openstack.org/user/x")) == "<http://openstack.org/user/x>");
    CHECK(serialize_term(Term::literal("say \"hi\"\\")) == "\"say \\\"hi\\\"\\\\\"");
    CHECK(serialize(TripleSet{}).empty());
}

TEST_CASE("strict parse of the golden block") {
    auto ts = parse_strict(test::golden_ttl());
    CHECK(ts.size() == 15);
    CHECK(ts == golden_set());
}

TEST_CASE("strict parse rejects a missing semicolon") {
    auto lines = split_lines(test::golden_ttl());
    lines[4].pop_back();  // log:level "INFO" ;
    try {
        parse_strict(join_lines(lines));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() >= 5);
        CHECK(e.offset() > 0);
    }
}

TEST_CASE("strict parse is schema agnostic and accepts full statements") {
    auto ts = parse_strict("<http://s/1> log:foo \"bar\" .");
    REQUIRE(ts.size() == 1);
    CHECK(ts.triples[0].predicate == "log:foo");
    CHECK_THROWS_AS(lookup(ts.triples[0].predicate), NotInVocabulary);

    auto declared = parse_strict(
        "@prefix log: <http://example.org/other#> .\n"
        "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
        "<http://s/1> log:statusCode 202 ; log:level \"INFO\"^^xsd:string ;\n"
        "  a log:Entry ; log:responseTime 0.25 , \"0.5\"^^xsd:decimal .");
    REQUIRE(declared.size() == 5);
    CHECK(declared.triples[0].object == Term::literal("202", "xsd:integer"));
    CHECK(declared.triples[1].object == Term::literal("INFO"));
    CHECK(declared.triples[2].predicate == "log:type");
    CHECK(declared.triples[3].object == Term::literal("0.25", "xsd:decimal"));
    CHECK(declared.triples[4].object == Term::literal("0.5", "xsd:decimal"));
}

TEST_CASE("strict parse rejects constructs outside the subset") {
    CHECK_THROWS_AS(parse_strict("<http://s/1> log:a [ log:b \"c\" ] ."), ParseError);
    CHECK_THROWS_AS(parse_strict("<http://s/1> log:a ( 1 2 ) ."), ParseError);
    CHECK_THROWS_AS(parse_strict("<http://s/1> foo:a \"x\" ."), ParseError);
    CHECK_THROWS_AS(parse_strict("<http://s/1> log:a \"x\""), ParseError);
    CHECK_THROWS_AS(parse_strict("<http://s/1> log:a \"unterminated ."), ParseError);
    CHECK(parse_strict("").empty());
}

TEST_CASE("round trip over every fixture annotation") {
    for (const auto& r : test::fixture_dataset().records) {
        CAPTURE(r.log);
        CHECK(parse_strict(serialize(r.triples)) == r.triples);
    }
}

TEST_CASE("recovery from a terminator-stripped golden") {
    auto stripped = remove_all(test::golden_ttl(), ';');
    CHECK_THROWS_AS(parse_strict(stripped), ParseError);
    CHECK(as_set(extract_regex(stripped)) == as_set(golden_set()));

    auto no_dots_at_end = test::golden_ttl();
    no_dots_at_end.resize(no_dots_at_end.size() - 2);
    CHECK(as_set(extract_regex(no_dots_at_end)) == as_set(golden_set()));
}

TEST_CASE("recovery of continuation lines and unbracketed IRIs") {
    auto ts = extract_regex("<http://s/1> log:level \"INFO\"\nlog:processId \"1\"^^xsd:integer\n");
    REQUIRE(ts.size() == 2);
    CHECK(ts.triples[1].subject == "http://s/1");

    auto bare = extract_regex("log:level \"INFO\"");
    REQUIRE(bare.size() == 1);
    CHECK(bare.triples[0].subject == kRecoveredSubject);

    auto unbracketed = extract_regex("http://s/1 log:belongsToUser http://openstack.org/user/abc .");
    REQUIRE(unbracketed.size() == 1);
    CHECK(unbracketed.triples[0].object == Term::iri("http://openstack.org/user/abc"));

    CHECK(extract_regex("The request succeeded with status 202.").empty());
    CHECK(extract_regex("").empty());
}

TEST_CASE("recovery keeps what a strict parse of the intact prefix accepts") {
    auto lines = split_lines(test::golden_ttl());
    std::mt19937 rng(11);
    for (std::size_t k = 1; k + 1 < lines.size(); ++k) {
        // Corrupt line k in several ways; lines before it stay intact.
        std::vector<std::string> variants;
        auto drop_semicolon = lines;
        drop_semicolon[k].pop_back();
        variants.push_back(join_lines(drop_semicolon));
        auto bad_prefix = lines;
        bad_prefix[k].replace(0, 3, "lg");
        variants.push_back(join_lines(bad_prefix));
        auto broken_iri = lines;
        if (auto gt = broken_iri[k].find('>'); gt != std::string::npos) broken_iri[k].erase(gt, 1);
        else broken_iri[k].insert(broken_iri[k].find('"'), "<");
        variants.push_back(join_lines(broken_iri));

        std::vector<std::string> prefix(lines.begin(), lines.begin() + static_cast<std::ptrdiff_t>(k));
        TripleSet kept;
        if (k > 1) {
            prefix.back().back() = '.';
            kept = parse_strict(join_lines(prefix));
        }
        for (const auto& text : variants) {
            CAPTURE(text);
            auto recovered = as_set(extract_regex(text));
            for (const auto& t : kept.triples) CHECK(recovered.contains(t));
        }
    }
}

TEST_CASE("clean_output") {
    CHECK(clean_output("Here is the RDF:\n```turtle\n<http://s/1> log:level \"INFO\" .\n```\nHope it helps") ==
          "<http://s/1> log:level \"INFO\" .");
    CHECK(clean_output(test::golden_ttl()) == test::golden_ttl());
    CHECK(clean_output("I cannot convert this.").empty());
    CHECK(clean_output("<think>maybe log:level?</think>\n<http://s/1> log:level \"INFO\" .") ==
          "<http://s/1> log:level \"INFO\" .");
    CHECK(clean_output("Sure! Output:\n" + test::golden_ttl() + "\n\nThis covers every field.") ==
          test::golden_ttl());
}

TEST_CASE("prose samples clean to nothing") {
    auto samples = split_lines(test::fixture_text("prose_samples.txt"));
    REQUIRE(samples.size() == 10);
    for (const auto& s : samples) {
        CAPTURE(s);
        CHECK(clean_output(s).empty());
        CHECK(classify(s).tag == Outcome::Invalid);
    }
}

TEST_CASE("classification cascade") {
    CHECK(classify(test::golden_ttl()).tag == Outcome::Valid);
    CHECK(classify(remove_all(test::golden_ttl(), ';')).tag == Outcome::Regex);
    CHECK(classify("").tag == Outcome::Empty);
    CHECK(classify(" \n\t ").tag == Outcome::Empty);
    CHECK(classify("lorem ipsum").tag == Outcome::Invalid);
    CHECK(classify("@prefix log: <http://openstack.org/ontology#> .").tag == Outcome::Invalid);

    auto v = classify("```\n" + test::golden_ttl() + "\n```");
    REQUIRE(v.triples);
    CHECK(v.triples->size() == 15);
    CHECK_FALSE(classify("lorem ipsum").triples);
}

TEST_CASE("cascade tags are exclusive and consistent with the parser") {
    std::vector<std::string> inputs{test::golden_ttl(), remove_all(test::golden_ttl(), ';'), "", "prose only",
                                    "<http://s/1> log:level \"INFO\" ;", "log:level \"INFO\" ."};
    for (const auto& line : split_lines(test::golden_ttl())) inputs.push_back(line);
    for (const auto& raw : inputs) {
        CAPTURE(raw);
        auto v = classify(raw);
        bool strict_ok = true;
        try {
            strict_ok = !parse_strict(v.cleaned).empty();
        } catch (const ParseError&) {
            strict_ok = false;
        }
        CHECK((v.tag == Outcome::Valid) == (strict_ok && !v.cleaned.empty()));
        CHECK(v.triples.has_value() == (v.tag == Outcome::Valid || v.tag == Outcome::Regex));
        if (v.tag == Outcome::Empty) CHECK(v.cleaned.empty());
    }
}

TEST_CASE("outcome tags") {
    for (auto o : {Outcome::Valid, Outcome::Regex, Outcome::Invalid, Outcome::Empty}) {
        CHECK(parse_outcome(to_string(o)) == o);
    }
    CHECK_FALSE(parse_outcome("VALID!"));
}

TEST_CASE("validity percentage") {
    std::vector<Outcome> outcomes;
    outcomes.insert(outcomes.end(), 428, Outcome::Valid);
    outcomes.insert(outcomes.end(), 25, Outcome::Regex);
    outcomes.insert(outcomes.end(), 547, Outcome::Empty);
    CHECK(validity_percentage(outcomes, 1000) == doctest::Approx(42.8).epsilon(1e-12));

    std::vector<Outcome> all_valid(50, Outcome::Valid);
    CHECK(validity_percentage(all_valid, 50) == 100.0);
    std::vector<Outcome> none(3, Outcome::Invalid);
    CHECK(validity_percentage(none, 3) == 0.0);
    CHECK_THROWS_AS(validity_percentage({}, 0), ZeroTotal);
}
