#include "logkg/log_model.hpp"

#include "logkg/error.hpp"
#include "logkg/ontology.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <functional>
#include <map>
#include <set>

namespace logkg {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || is_upper(c); }
bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }
bool is_hex(char c) { return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F'); }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::size_t skip_digits(std::string_view s, std::size_t i) {
    while (i < s.size() && is_digit(s[i])) ++i;
    return i;
}

bool digits_at(std::string_view s, std::size_t i, std::size_t n) {
    if (i + n > s.size()) return false;
    for (std::size_t k = 0; k < n; ++k) {
        if (!is_digit(s[i + k])) return false;
    }
    return true;
}

int two_digits(std::string_view s, std::size_t i) { return (s[i] - '0') * 10 + (s[i + 1] - '0'); }

// Matches "YYYY-MM-DD HH:MM:SS" at i. Returns the end of the match including an
// optional ".digits" fraction, or npos.
std::size_t match_timestamp(std::string_view s, std::size_t i) {
    if (!digits_at(s, i, 4) || i + 19 > s.size()) return std::string_view::npos;
    if (s[i + 4] != '-' || !digits_at(s, i + 5, 2) || s[i + 7] != '-' || !digits_at(s, i + 8, 2) ||
        s[i + 10] != ' ' || !digits_at(s, i + 11, 2) || s[i + 13] != ':' || !digits_at(s, i + 14, 2) ||
        s[i + 16] != ':' || !digits_at(s, i + 17, 2)) {
        return std::string_view::npos;
    }
    std::size_t end = i + 19;
    if (end + 1 < s.size() && s[end] == '.' && is_digit(s[end + 1])) end = skip_digits(s, end + 1);
    return end;
}

// ---------------------------------------------------------------------------
// Message templates. A pattern is literal text interleaved with typed
// placeholders; placeholders are greedy and never backtrack.

enum class Slot : std::uint8_t { Int, Num, Ip, Method, Path, Proto, Host, Uuid, Ts, Word, EvType, EvTag };

struct Piece {
    std::string_view literal;  // empty for a slot
    Slot slot{};
};

constexpr std::array<std::pair<std::string_view, Slot>, 12> kSlotNames{{
    {"{int}", Slot::Int},   {"{num}", Slot::Num},       {"{ip}", Slot::Ip},
    {"{method}", Slot::Method}, {"{path}", Slot::Path}, {"{proto}", Slot::Proto},
    {"{host}", Slot::Host}, {"{uuid}", Slot::Uuid},     {"{ts}", Slot::Ts},
    {"{word}", Slot::Word}, {"{evtype}", Slot::EvType}, {"{evtag}", Slot::EvTag},
}};

std::vector<Piece> compile(std::string_view pattern) {
    std::vector<Piece> pieces;
    std::size_t lit_start = 0;
    std::size_t i = 0;
    while (i < pattern.size()) {
        if (pattern[i] == '{') {
            bool found = false;
            for (const auto& [name, slot] : kSlotNames) {
                if (pattern.substr(i).starts_with(name)) {
                    if (i > lit_start) pieces.push_back({pattern.substr(lit_start, i - lit_start)});
                    pieces.push_back({{}, slot});
                    i += name.size();
                    lit_start = i;
                    found = true;
                    break;
                }
            }
            if (found) continue;
        }
        ++i;
    }
    if (i > lit_start) pieces.push_back({pattern.substr(lit_start)});
    return pieces;
}

std::size_t scan_uuid(std::string_view s, std::size_t i) {
    static constexpr std::array<std::size_t, 5> kGroups{8, 4, 4, 4, 12};
    for (std::size_t g = 0; g < kGroups.size(); ++g) {
        for (std::size_t k = 0; k < kGroups[g]; ++k, ++i) {
            if (i >= s.size() || !is_hex(s[i])) return std::string_view::npos;
        }
        if (g + 1 < kGroups.size()) {
            if (i >= s.size() || s[i] != '-') return std::string_view::npos;
            ++i;
        }
    }
    if (i < s.size() && (is_hex(s[i]) || s[i] == '-')) return std::string_view::npos;
    return i;
}

std::size_t scan_ip(std::string_view s, std::size_t i) {
    for (int octet = 0; octet < 4; ++octet) {
        std::size_t start = i;
        i = skip_digits(s, i);
        if (i == start || i - start > 3) return std::string_view::npos;
        if (octet < 3) {
            if (i >= s.size() || s[i] != '.') return std::string_view::npos;
            ++i;
        }
    }
    if (i < s.size() && (is_digit(s[i]) || (s[i] == '.' && i + 1 < s.size() && is_digit(s[i + 1])))) {
        return std::string_view::npos;
    }
    return i;
}

// Returns the end of the slot starting at i, or npos.
std::size_t scan_slot(Slot slot, std::string_view s, std::size_t i) {
    constexpr auto npos = std::string_view::npos;
    if (i >= s.size()) return npos;
    std::size_t j = i;
    switch (slot) {
        case Slot::Int:
            j = skip_digits(s, i);
            return j == i ? npos : j;
        case Slot::Num:
            j = skip_digits(s, i);
            if (j == i) return npos;
            if (j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1])) j = skip_digits(s, j + 1);
            return j;
        case Slot::Ip:
            return scan_ip(s, i);
        case Slot::Method:
            while (j < s.size() && is_upper(s[j])) ++j;
            return j == i ? npos : j;
        case Slot::Path:
            if (s[i] != '/') return npos;
            while (j < s.size() && !is_space(s[j]) && s[j] != '"' && s[j] != ')') ++j;
            while (j > i + 1 && (s[j - 1] == '.' || s[j - 1] == ':' || s[j - 1] == ',')) --j;
            return j;
        case Slot::Proto:
            if (!s.substr(i).starts_with("HTTP/")) return npos;
            j = i + 5;
            while (j < s.size() && (is_digit(s[j]) || s[j] == '.')) ++j;
            return j == i + 5 ? npos : j;
        case Slot::Host:
            while (j < s.size() && (is_alnum(s[j]) || s[j] == '.' || s[j] == '-' || s[j] == '_')) ++j;
            while (j > i && s[j - 1] == '.') --j;
            if (j == i || !std::any_of(s.begin() + i, s.begin() + j, is_alpha)) return npos;
            return j;
        case Slot::Uuid:
            return scan_uuid(s, i);
        case Slot::Ts:
            return match_timestamp(s, i);
        case Slot::Word:
            while (j < s.size() && is_alpha(s[j])) ++j;
            return j == i ? npos : j;
        case Slot::EvType:
            while (j < s.size() && ((s[j] >= 'a' && s[j] <= 'z') || s[j] == '-' || s[j] == '_')) ++j;
            return j == i ? npos : j;
        case Slot::EvTag:
            while (j < s.size() && (is_alnum(s[j]) || s[j] == '-' || s[j] == '_' || s[j] == ':')) ++j;
            return j == i ? npos : j;
    }
    return npos;
}

struct Match {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::vector<std::string_view> captures;
};

std::optional<Match> match_at(const std::vector<Piece>& pieces, std::string_view s, std::size_t at) {
    Match m;
    m.begin = at;
    std::size_t i = at;
    for (const auto& piece : pieces) {
        if (!piece.literal.empty()) {
            if (s.substr(i, piece.literal.size()) != piece.literal) return std::nullopt;
            i += piece.literal.size();
        } else {
            auto end = scan_slot(piece.slot, s, i);
            if (end == std::string_view::npos) return std::nullopt;
            m.captures.push_back(s.substr(i, end - i));
            i = end;
        }
    }
    m.end = i;
    return m;
}

class FieldSink;

struct Rule {
    std::string_view pattern;
    bool anchored = false;  // must match at the start of the message body
    // Returns false to leave the match unconsumed.
    std::function<bool(FieldSink&, const std::vector<std::string_view>&)> apply;
};

// Collects candidate values. A field that receives two different values is
// ambiguous and dropped at the end.
class FieldSink {
public:
    explicit FieldSink(LogRecordFields& f) : fields_(f) {}

    void text(std::optional<std::string> LogRecordFields::*member, std::string_view value) {
        auto& slot = fields_.*member;
        if (!slot) {
            slot = std::string(value);
        } else if (*slot != value) {
            mark(conflicted_text_, member);
        }
    }

    void integer(std::optional<std::int64_t> LogRecordFields::*member, std::string_view value) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size()) return;
        auto& slot = fields_.*member;
        if (!slot) {
            slot = v;
        } else if (*slot != v) {
            mark(conflicted_int_, member);
        }
    }

    void metric(std::string_view predicate, std::string_view value) {
        auto [it, inserted] = metrics_.emplace(std::string(predicate), std::string(value));
        if (!inserted && it->second != value) conflicted_metrics_.insert(it->first);
    }

    // Returns true when some value was dropped as ambiguous.
    bool finish() {
        for (auto member : conflicted_text_) (fields_.*member).reset();
        for (auto member : conflicted_int_) (fields_.*member).reset();
        for (const auto& name : conflicted_metrics_) metrics_.erase(name);
        for (auto& [name, value] : metrics_) fields_.metrics.push_back({name, value});
        std::sort(fields_.metrics.begin(), fields_.metrics.end(), [](const auto& a, const auto& b) {
            return vocabulary_index(a.predicate) < vocabulary_index(b.predicate);
        });
        return !conflicted_text_.empty() || !conflicted_int_.empty() || !conflicted_metrics_.empty();
    }

    LogRecordFields& fields() { return fields_; }

private:
    LogRecordFields& fields_;
    std::map<std::string, std::string> metrics_;
    // Member pointers have no ordering, so these stay small vectors.
    std::vector<std::optional<std::string> LogRecordFields::*> conflicted_text_;
    std::vector<std::optional<std::int64_t> LogRecordFields::*> conflicted_int_;

    template <typename M>
    static void mark(std::vector<M>& list, M member) {
        if (std::find(list.begin(), list.end(), member) == list.end()) list.push_back(member);
    }
    std::set<std::string> conflicted_metrics_;
};

using F = LogRecordFields;
using Caps = std::vector<std::string_view>;

void file_reference(FieldSink& sink, std::string_view path) {
    if (path.find("/_base/") != std::string_view::npos) {
        sink.text(&F::base_file, path);
    } else {
        sink.text(&F::instance_file, path);
    }
}

auto metrics(std::initializer_list<std::string_view> names) {
    std::vector<std::string_view> preds(names);
    return [preds](FieldSink& sink, const Caps& caps) {
        for (std::size_t i = 0; i < preds.size() && i < caps.size(); ++i) {
            if (!preds[i].empty()) sink.metric(preds[i], caps[i]);
        }
        return true;
    };
}

// Specific phrasings come before generic ones; a span consumed by an earlier
// rule is not offered to later rules.
const std::vector<Rule>& rules() {
    static const std::vector<Rule> kRules{
        // nova.*.wsgi.server access lines
        {R"({ip},{ip} "{method} {path} {proto}")", false,
         [](FieldSink& s, const Caps& c) {
             s.text(&F::client_ip, c[0]);
             s.text(&F::server_ip, c[1]);
             s.text(&F::http_method, c[2]);
             s.text(&F::http_path, c[3]);
             return true;
         }},
        {R"({ip} "{method} {path} {proto}")", false,
         [](FieldSink& s, const Caps& c) {
             s.text(&F::client_ip, c[0]);
             s.text(&F::http_method, c[1]);
             s.text(&F::http_path, c[2]);
             return true;
         }},
        {"status: {int}", false, [](FieldSink& s, const Caps& c) { s.integer(&F::status_code, c[0]); return true; }},
        {"len: {int}", false, [](FieldSink& s, const Caps& c) { s.integer(&F::response_length, c[0]); return true; }},
        {"time: {num}", false, [](FieldSink& s, const Caps& c) { s.text(&F::response_time, c[0]); return true; }},

        // nova.compute.claims
        {"Attempting claim: memory {num} MB, disk {num} GB, vcpus {int} CPU", false,
         metrics({"requestedMemoryMB", "requestedDiskGB", "requestedVcpus"})},
        {"Total memory: {num} MB, used: {num} MB", false, metrics({"totalMemoryMB", "usedMemoryMB"})},
        {"memory limit: {num} MB, free: {num} MB", false, metrics({"hasMemoryLimitMB", "freeMemoryMB"})},
        {"Total disk: {num} GB, used: {num} GB", false, metrics({"totalDiskGB", "usedDiskGB"})},
        {"Total vcpu: {int} VCPU, used: {num} VCPU", false, metrics({"totalVcpus", "usedVcpus"})},
        {"Claim {word}", true, metrics({"claimStatus"})},

        // nova.compute.resource_tracker
        {"Total usable vcpus: {int}, total allocated vcpus: {int}", false,
         metrics({"totalUsableVcpus", "totalAllocatedVcpus"})},
        {"name={host}", false, [](FieldSink& s, const Caps& c) { s.text(&F::host, c[0]); return true; }},
        {"phys_ram={num}MB", false, metrics({"physicalRamMB"})},
        {"used_ram={num}MB", false, metrics({"usedRamMB"})},
        {"phys_disk={num}GB", false, metrics({"physicalDiskGB"})},
        {"used_disk={num}GB", false, metrics({"usedDiskGB"})},
        {"total_vcpus={int}", false, metrics({"totalVcpus"})},
        {"used_vcpus={num}", false, metrics({"usedVcpus"})},
        {"allocated_vcpus={int}", false, metrics({"allocatedVcpus"})},
        {"usable_vcpus={int}", false, metrics({"usableVcpus"})},
        {"for node {host}", false, [](FieldSink& s, const Caps& c) { s.text(&F::host, c[0]); return true; }},

        // nova.compute.manager timing
        {"Took {num} seconds to spawn the instance on the hypervisor.", false, metrics({"spawnTimeSeconds"})},
        {"Took {num} seconds to build instance.", false, metrics({"buildTimeSeconds"})},
        {"Took {num} seconds to", false, metrics({"durationSeconds"})},

        // Hourly usage audit. Audit bounds are reconstructed as dateTime readings.
        {"Running instance usage audit for host {host} from {ts} to {ts}. {int} instances.", false,
         [](FieldSink& s, const Caps& c) {
             s.text(&F::host, c[0]);
             s.metric("usageAuditStart", c[1]);
             s.metric("usageAuditEnd", c[2]);
             s.metric("instanceCount", c[3]);
             return true;
         }},
        {"from host '{host}'", false, [](FieldSink& s, const Caps& c) { s.text(&F::host, c[0]); return true; }},

        // nova.virt.libvirt.imagecache
        {"image {uuid} at ({path})", false,
         [](FieldSink& s, const Caps& c) {
             s.text(&F::image_id, c[0]);
             file_reference(s, c[1]);
             return true;
         }},
        {"in use: on this node {int} local, {int} on other nodes sharing this instance storage", false,
         metrics({"localUsageCount", "remoteUsageCount"})},

        // Events. The event type/uuid split follows the "type:uuid" and
        // "type-uuid" tags nova prints.
        {"Creating event {evtype}:{uuid} for instance {uuid}", false,
         [](FieldSink& s, const Caps& c) {
             s.text(&F::event_type, c[0]);
             s.text(&F::event_uuid, c[1]);
             s.text(&F::instance_uuid, c[2]);
             return true;
         }},
        {"Received event {evtag} for instance {uuid}", false,
         [](FieldSink& s, const Caps& c) {
             auto tag = c[0];
             if (tag.size() <= 37 || scan_uuid(tag, tag.size() - 36) != tag.size() || tag[tag.size() - 37] != '-') {
                 return false;
             }
             s.text(&F::event_id, tag);
             s.text(&F::event_type, tag.substr(0, tag.size() - 37));
             s.text(&F::event_uuid, tag.substr(tag.size() - 36));
             s.text(&F::instance_uuid, c[1]);
             return true;
         }},
        {"VM {word} (Lifecycle Event)", false, [](FieldSink& s, const Caps& c) { s.text(&F::event_type, c[0]); return true; }},

        // Any remaining nova instance-store path.
        {"{path}", false,
         [](FieldSink& s, const Caps& c) {
             if (!c[0].starts_with("/var/lib/nova/instances/")) return false;
             file_reference(s, c[0]);
             return true;
         }},
    };
    return kRules;
}

struct CompiledRule {
    std::vector<Piece> pieces;
    const Rule* rule;
};

const std::vector<CompiledRule>& compiled_rules() {
    static const std::vector<CompiledRule> kCompiled = [] {
        std::vector<CompiledRule> out;
        for (const auto& r : rules()) out.push_back({compile(r.pattern), &r});
        return out;
    }();
    return kCompiled;
}

bool overlaps(const std::vector<char>& consumed, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
        if (consumed[i]) return true;
    }
    return false;
}

void run_rules(std::string_view body, FieldSink& sink, std::vector<char>& consumed) {
    for (const auto& [pieces, rule] : compiled_rules()) {
        if (pieces.empty()) continue;
        auto try_at = [&](std::size_t at) -> std::size_t {
            auto m = match_at(pieces, body, at);
            if (!m || overlaps(consumed, m->begin, m->end)) return 0;
            if (!rule->apply(sink, m->captures)) return 0;
            std::fill(consumed.begin() + m->begin, consumed.begin() + m->end, 1);
            return m->end;
        };
        if (rule->anchored) {
            try_at(0);
            continue;
        }
        const auto& first = pieces.front();
        if (!first.literal.empty()) {
            auto pos = body.find(first.literal);
            while (pos != std::string_view::npos) {
                auto end = try_at(pos);
                pos = body.find(first.literal, end ? end : pos + 1);
            }
        } else {
            for (std::size_t i = 0; i < body.size(); ++i) {
                if (i > 0 && (is_alnum(body[i - 1]) || body[i - 1] == '/' || body[i - 1] == '.')) continue;
                if (auto end = try_at(i)) i = end - 1;
            }
        }
    }
}

bool all_hex(std::string_view s) { return !s.empty() && std::all_of(s.begin(), s.end(), is_hex); }

void parse_context(std::string_view block, LogRecordFields& fields) {
    // "[req-... user tenant - - -]"; "-" marks an absent slot.
    block = trim(block.substr(1, block.size() - 2));
    std::vector<std::string_view> parts;
    while (!block.empty()) {
        auto sp = block.find(' ');
        parts.push_back(block.substr(0, sp));
        if (sp == std::string_view::npos) break;
        block = trim(block.substr(sp));
    }
    if (parts.empty() || !parts[0].starts_with("req-")) return;
    fields.request_id = std::string(parts[0]);
    if (parts.size() > 1 && all_hex(parts[1])) fields.user_id = std::string(parts[1]);
    if (parts.size() > 2 && all_hex(parts[2])) fields.tenant_id = std::string(parts[2]);
}

}  // namespace

// ---------------------------------------------------------------------------

std::string Timestamp::to_log_form() const {
    std::string out = date + " " + time;
    if (!fraction.empty()) out += "." + fraction;
    return out;
}

std::string Timestamp::to_iso() const {
    std::string out = date + "T" + time;
    if (!fraction.empty()) out += "." + fraction;
    out += 'Z';
    return out;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    if (match_timestamp(text, 0) != text.size()) return std::nullopt;
    int month = two_digits(text, 5);
    int day = two_digits(text, 8);
    int hour = two_digits(text, 11);
    int minute = two_digits(text, 14);
    int second = two_digits(text, 17);
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
        return std::nullopt;
    }
    Timestamp ts;
    ts.date = std::string(text.substr(0, 10));
    ts.time = std::string(text.substr(11, 8));
    if (text.size() > 19) ts.fraction = std::string(text.substr(20));
    return ts;
}

const MetricValue* LogRecordFields::metric(std::string_view predicate) const {
    for (const auto& m : metrics) {
        if (m.predicate == predicate) return &m;
    }
    return nullptr;
}

LogTokens tokenize(std::string_view text) {
    constexpr auto npos = std::string_view::npos;
    text = trim(text);
    if (text.empty()) throw MalformedHeader("empty log line");

    std::size_t ts = npos;
    std::size_t ts_end = npos;
    for (std::size_t i = 0; i + 19 <= text.size(); ++i) {
        if (i > 0 && text[i - 1] != ' ') continue;
        if (auto end = match_timestamp(text, i); end != npos) {
            ts = i;
            ts_end = end;
            break;
        }
    }
    if (ts == npos) throw MalformedHeader("no timestamp in log line");

    LogTokens out;
    out.source = trim(text.substr(0, ts));
    if (out.source.find_first_of(" \t") != npos) {
        throw MalformedHeader("unexpected text before the timestamp");
    }

    auto expect_space = [&](std::size_t i) {
        if (i >= text.size() || text[i] != ' ') throw MalformedHeader("truncated log header");
        while (i < text.size() && text[i] == ' ') ++i;
        return i;
    };

    std::size_t i = expect_space(ts_end);
    std::size_t pid_end = skip_digits(text, i);
    if (pid_end == i) throw MalformedHeader("missing process id");
    i = expect_space(pid_end);
    std::size_t level_end = i;
    while (level_end < text.size() && is_upper(text[level_end])) ++level_end;
    if (level_end == i) throw MalformedHeader("missing log level");
    i = expect_space(level_end);
    std::size_t comp_end = i;
    while (comp_end < text.size() && (is_alnum(text[comp_end]) || text[comp_end] == '.' || text[comp_end] == '_')) {
        ++comp_end;
    }
    if (comp_end == i) throw MalformedHeader("missing component");
    if (comp_end < text.size() && text[comp_end] != ' ') throw MalformedHeader("malformed component");
    out.header = text.substr(ts, comp_end - ts);

    std::size_t rest = comp_end;
    while (rest < text.size() && text[rest] == ' ') ++rest;
    if (rest < text.size() && text[rest] == '[') {
        auto close = text.find(']', rest);
        if (close != npos) {
            out.context = text.substr(rest, close + 1 - rest);
            rest = close + 1;
        }
    }
    out.body = trim(text.substr(rest));
    return out;
}

LogRecordFields parse_entry(const RawLogEntry& entry) {
    auto tokens = tokenize(entry.text);
    LogRecordFields fields;
    fields.log_record = tokens.source.empty() ? entry.log_record : std::string(tokens.source);
    if (fields.log_record.empty()) throw MalformedHeader("no log record name for entry");

    // header: timestamp PID LEVEL component, single-space separated after tokenize
    auto header = tokens.header;
    auto ts_end = match_timestamp(header, 0);
    auto ts = parse_timestamp(header.substr(0, ts_end));
    if (!ts) throw MalformedHeader("invalid timestamp");
    fields.timestamp = std::move(*ts);
    auto rest = trim(header.substr(ts_end));
    auto sp = rest.find(' ');
    auto pid = rest.substr(0, sp);
    auto [ptr, ec] = std::from_chars(pid.data(), pid.data() + pid.size(), fields.process_id);
    if (ec != std::errc{}) throw MalformedHeader("process id out of range");
    rest = trim(rest.substr(sp));
    sp = rest.find(' ');
    fields.level = std::string(rest.substr(0, sp));
    fields.component = std::string(trim(rest.substr(sp)));

    if (tokens.context) parse_context(*tokens.context, fields);

    auto body = tokens.body;
    static constexpr std::string_view kInstance = "[instance: ";
    if (body.starts_with(kInstance)) {
        auto close = body.find(']');
        auto uuid = close == std::string_view::npos ? std::string_view{} : body.substr(kInstance.size(), close - kInstance.size());
        if (!uuid.empty() && scan_uuid(uuid, 0) == uuid.size()) {
            fields.instance_uuid = std::string(uuid);
            body = trim(body.substr(close + 1));
        }
    }
    if (body.empty()) return fields;

    std::vector<char> consumed(body.size(), 0);
    FieldSink sink(fields);
    run_rules(body, sink, consumed);
    bool dropped = sink.finish();

    bool residual = false;
    for (std::size_t i = 0; i < body.size() && !residual; ++i) {
        residual = !consumed[i] && is_alnum(body[i]);
    }
    if (residual || dropped) fields.message = std::string(body);
    return fields;
}

std::string normalize_line(std::string_view text) {
    auto tokens = tokenize(text);
    std::string out;
    if (!tokens.source.empty()) {
        out += tokens.source;
        out += ' ';
    }
    std::string_view header = tokens.header;
    bool space = false;
    for (char c : header) {
        if (c == ' ') {
            space = true;
            continue;
        }
        if (space) out += ' ';
        space = false;
        out += c;
    }
    if (tokens.context) {
        out += ' ';
        out += *tokens.context;
    }
    if (!tokens.body.empty()) {
        out += ' ';
        out += tokens.body;
    }
    return out;
}

}  // namespace logkg
