#include "logkg/dataset.hpp"

#include "logkg/error.hpp"
#include "logkg/turtle.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace logkg {

namespace {

using ojson = nlohmann::ordered_json;

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

template <typename F>
void for_each_line(std::string_view text, F&& f) {
    std::size_t start = 0;
    std::size_t number = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        f(++number, strip_cr(line));
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
}

std::size_t to_index(std::string_view s, std::size_t line) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0) {
        throw DataError("name sidecar line " + std::to_string(line) + ": bad line number '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

std::vector<NameRange> parse_name_ranges(std::string_view text) {
    std::vector<NameRange> out;
    for_each_line(text, [&](std::size_t number, std::string_view line) {
        if (blank(line) || line.starts_with('#')) return;
        auto tab = line.find('\t');
        auto dash = line.find('-');
        if (tab == std::string_view::npos || dash == std::string_view::npos || dash > tab) {
            throw DataError("name sidecar line " + std::to_string(number) + ": expected START-END<TAB>name");
        }
        NameRange r{to_index(line.substr(0, dash), number), to_index(line.substr(dash + 1, tab - dash - 1), number),
                    std::string(line.substr(tab + 1))};
        if (r.last < r.first || r.log_record.empty()) {
            throw DataError("name sidecar line " + std::to_string(number) + ": empty range or name");
        }
        out.push_back(std::move(r));
    });
    return out;
}

std::vector<RawLogEntry> split_corpus(std::string_view text, const std::string& default_record,
                                      const std::vector<NameRange>& names) {
    std::vector<RawLogEntry> out;
    for_each_line(text, [&](std::size_t number, std::string_view line) {
        if (blank(line)) return;
        std::string record = default_record;
        for (const auto& r : names) {
            if (number >= r.first && number <= r.last) {
                record = r.log_record;
                break;
            }
        }
        out.push_back({out.size() + 1, std::move(record), std::string(line)});
    });
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + path.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("cannot write " + path.string());
    }
    std::filesystem::rename(tmp, path);
}

std::vector<RawLogEntry> read_corpus(const std::filesystem::path& corpus,
                                     const std::optional<std::filesystem::path>& sidecar) {
    if (!std::filesystem::is_regular_file(corpus)) throw DataError("cannot read " + corpus.string());
    std::vector<NameRange> names;
    if (sidecar) names = parse_name_ranges(read_file(*sidecar));
    return split_corpus(read_file(corpus), corpus.filename().string(), names);
}

std::string dataset_jsonl(const std::vector<DatasetRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        ojson j;
        j["id"] = r.entry_id;
        j["log_record"] = r.log_record;
        j["log"] = r.log;
        j["ttl"] = serialize(r.triples);
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string skips_jsonl(const std::vector<SkipRecord>& skips) {
    std::string out;
    for (const auto& s : skips) {
        ojson j;
        j["id"] = s.entry_id;
        j["log_record"] = s.log_record;
        j["log"] = s.log;
        j["reason"] = s.reason;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<DatasetRecord> parse_dataset(std::string_view text) {
    std::vector<DatasetRecord> out;
    for_each_line(text, [&](std::size_t number, std::string_view line) {
        if (blank(line)) return;
        auto where = "dataset line " + std::to_string(number);
        try {
            auto j = nlohmann::json::parse(line);
            DatasetRecord r;
            r.entry_id = j.at("id").get<std::uint64_t>();
            r.log_record = j.at("log_record").get<std::string>();
            r.log = j.at("log").get<std::string>();
            r.triples = parse_strict(j.at("ttl").get<std::string>());
            out.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(where + ": " + e.what());
        } catch (const ParseError& e) {
            throw DataError(where + ": ttl " + e.what());
        }
    });
    assign_sequence(out);
    return out;
}

std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path) { return parse_dataset(read_file(path)); }

std::vector<RawLogEntry> dataset_entries(const std::vector<DatasetRecord>& records) {
    std::vector<RawLogEntry> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back({r.entry_id, r.log_record, r.log});
    return out;
}

}  // namespace logkg
