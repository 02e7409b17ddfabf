#include <doctest.h>

#include "logkg/annotator.hpp"
#include "logkg/dataset.hpp"
#include "logkg/error.hpp"
#include "logkg/ontology.hpp"
#include "logkg/turtle.hpp"
#include "support.hpp"

#include <regex>
#include <set>

using namespace logkg;

namespace {

std::string strip_newline(std::string s) {
    while (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

}  // namespace

TEST_CASE("API request line annotates to the golden block") {
    auto ts = annotate(parse_entry({2, "x", test::post_line()}), 2);
    CHECK(ts.size() == 15);
    CHECK(serialize(ts) == test::golden_ttl());
    for (const auto& t : ts.triples) {
        CHECK(t.subject == "http://openstack.org/log/request/nova-api.log.1.2017-05-17_12:02:19/0002");
    }
}

TEST_CASE("image cache line matches its frozen golden") {
    auto lines = read_corpus(test::fixture_path("openstack_50.log"));
    auto ts = annotate(parse_entry(lines[14]), 3);
    CHECK(serialize(ts) == strip_newline(test::fixture_text("golden_image_cache.ttl")));
    bool base_file = false;
    for (const auto& t : ts.triples) {
        CHECK_FALSE(t.predicate.starts_with("log:http"));
        if (t.predicate == "log:hasBaseFile") {
            base_file = true;
            CHECK(t.object.is_iri());
            CHECK(t.object.value.starts_with("http://openstack.org/basefile/"));
        }
    }
    CHECK(base_file);
}

TEST_CASE("header-only entry gives the five header statements plus message") {
    auto f = parse_entry({1, "h.log", "2017-05-16 00:00:00.000 1 INFO a.b [req-1 - - - - -] hello"});
    auto ts = annotate(f, 1);
    REQUIRE(ts.size() == 7);  // five header statements, requestId, message
    CHECK(ts.triples[0].predicate == "log:logRecord");
    CHECK(ts.triples[1].predicate == "log:timestamp");
    CHECK(ts.triples[2].predicate == "log:processId");
    CHECK(ts.triples[3].predicate == "log:level");
    CHECK(ts.triples[4].predicate == "log:belongsToComponent");
    CHECK(ts.triples[5].predicate == "log:requestId");
    CHECK(ts.triples[6].predicate == "log:message");

    auto bare = annotate(parse_entry({1, "h.log", "2017-05-16 00:00:00.000 1 INFO a.b"}), 1);
    CHECK(bare.size() == 5);
}

TEST_CASE("sequence numbers count per log record") {
    std::vector<RawLogEntry> entries{
        {1, "a.log", "2017-05-16 00:00:00.000 1 INFO a.b one"},
        {2, "a.log", "2017-05-16 00:00:01.000 1 INFO a.b two"},
        {3, "b.log", "2017-05-16 00:00:02.000 1 INFO a.b three"},
        {4, "a.log", "not a log line"},
        {5, "a.log", "2017-05-16 00:00:03.000 1 INFO a.b four"},
    };
    auto ds = annotate_corpus(entries);
    REQUIRE(ds.records.size() == 4);
    REQUIRE(ds.skips.size() == 1);
    CHECK(ds.skips[0].entry_id == 4);
    CHECK(ds.records[0].triples.subject().ends_with("a.log/0001"));
    CHECK(ds.records[1].triples.subject().ends_with("a.log/0002"));
    CHECK(ds.records[2].triples.subject().ends_with("b.log/0001"));
    CHECK(ds.records[3].triples.subject().ends_with("a.log/0003"));
    CHECK(ds.records.size() + ds.skips.size() == entries.size());
}

TEST_CASE("empty corpus") {
    auto ds = annotate_corpus({});
    CHECK(ds.records.empty());
    CHECK(ds.skips.empty());
    CHECK(dataset_jsonl(ds.records).empty());
    CHECK(skips_jsonl(ds.skips).empty());
}

TEST_CASE("fixture corpus annotates completely") {
    auto ds = test::fixture_dataset();
    CHECK(ds.records.size() == 50);
    CHECK(ds.skips.empty());
    std::set<std::string> records;
    for (const auto& r : ds.records) records.insert(r.log_record);
    CHECK(records == std::set<std::string>{"nova-api.log.1.2017-05-17_12:02:19",
                                           "nova-compute.log.2017-05-14_21:56:26",
                                           "nova-scheduler.log.2017-05-14_21:27:09"});
}

TEST_CASE("annotator output is closed over the vocabulary and well-formed") {
    static const std::regex kInteger(R"(-?\d+)");
    static const std::regex kDecimal(R"(-?\d+(\.\d+)?)");
    static const std::regex kDateTime(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?Z)");
    for (const auto& r : test::fixture_dataset().records) {
        CAPTURE(r.log);
        std::set<std::pair<std::string, Term>> seen;
        for (const auto& t : r.triples.triples) {
            CHECK(t.subject == r.triples.subject());
            const auto& def = lookup(t.predicate);
            CHECK(seen.emplace(t.predicate, t.object).second);
            if (def.object_kind == ObjectKind::Resource) {
                CHECK(t.object.is_iri());
                continue;
            }
            REQUIRE_FALSE(t.object.is_iri());
            switch (*def.datatype) {
                case Datatype::Integer:
                    CHECK(t.object.datatype == "xsd:integer");
                    CHECK(std::regex_match(t.object.value, kInteger));
                    break;
                case Datatype::Decimal:
                    CHECK(t.object.datatype == "xsd:decimal");
                    CHECK(std::regex_match(t.object.value, kDecimal));
                    break;
                case Datatype::DateTime:
                    CHECK(t.object.datatype == "xsd:dateTime");
                    CHECK(std::regex_match(t.object.value, kDateTime));
                    break;
                case Datatype::PlainString: CHECK(t.object.datatype.empty()); break;
            }
        }
        // Statement order follows the vocabulary.
        for (std::size_t i = 1; i < r.triples.size(); ++i) {
            CHECK(vocabulary_index(r.triples.triples[i - 1].predicate) <=
                  vocabulary_index(r.triples.triples[i].predicate));
        }
    }
}

TEST_CASE("dataset files are deterministic and round-trip") {
    auto first = dataset_jsonl(test::fixture_dataset().records);
    auto second = dataset_jsonl(test::fixture_dataset().records);
    CHECK(first == second);
    auto records = parse_dataset(first);
    CHECK(records == test::fixture_dataset().records);
    CHECK(dataset_jsonl(records) == first);
}

TEST_CASE("dataset parser rejects broken input") {
    CHECK_THROWS_AS(parse_dataset("{not json}\n"), DataError);
    CHECK_THROWS_AS(parse_dataset(R"({"id":1,"log_record":"a","log":"x","ttl":"<a> log:b"})" "\n"), DataError);
    CHECK_THROWS_AS(parse_dataset(R"({"id":1,"log_record":"a"})" "\n"), DataError);
}

TEST_CASE("log record naming precedence") {
    const std::string text =
        "2017-05-16 00:00:00.000 1 INFO a.b one\n"
        "\n"
        "2017-05-16 00:00:01.000 1 INFO a.b two\n"
        "inline.log 2017-05-16 00:00:02.000 1 INFO a.b three\n";
    auto names = parse_name_ranges("# ranges\n3-4\tsidecar.log\n");
    auto entries = split_corpus(text, "default.log", names);
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].entry_id == 1);
    CHECK(entries[0].log_record == "default.log");
    CHECK(entries[1].entry_id == 2);
    CHECK(entries[1].log_record == "sidecar.log");
    auto ds = annotate_corpus(entries);
    REQUIRE(ds.records.size() == 3);
    CHECK(ds.records[2].log_record == "inline.log");
    CHECK(ds.records[2].triples.subject().ends_with("inline.log/0001"));

    CHECK_THROWS_AS(parse_name_ranges("3-x\tbad\n"), DataError);
    CHECK_THROWS_AS(read_corpus(test::fixture_path("does-not-exist.log")), DataError);
}
