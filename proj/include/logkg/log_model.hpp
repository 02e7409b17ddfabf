#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logkg {

struct RawLogEntry {
    std::uint64_t entry_id = 0;  // 1-based, unique within a corpus
    std::string log_record;      // source file name, e.g. nova-api.log.1.2017-05-17_12:02:19
    std::string text;            // the full log line

    bool operator==(const RawLogEntry&) const = default;
};

/// Wall-clock timestamp as written in the log header. The zone is not recorded
/// by OpenStack; `to_iso()` marks it as UTC.
struct Timestamp {
    std::string date;      // YYYY-MM-DD
    std::string time;      // HH:MM:SS
    std::string fraction;  // digits after the dot, may be empty

    /// "YYYY-MM-DD HH:MM:SS.mmm", the form used in log lines.
    std::string to_log_form() const;
    /// "YYYY-MM-DDTHH:MM:SS.mmmZ", the xsd:dateTime lexical form.
    std::string to_iso() const;

    bool operator==(const Timestamp&) const = default;
};

/// Parses "YYYY-MM-DD HH:MM:SS[.f+]" exactly (no surrounding text).
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// One metric reading: vocabulary predicate local name and the value exactly as
/// it appears in the line.
struct MetricValue {
    std::string predicate;
    std::string lexical;

    bool operator==(const MetricValue&) const = default;
};

struct LogRecordFields {
    std::string log_record;
    Timestamp timestamp;
    std::uint64_t process_id = 0;
    std::string level;
    std::string component;

    std::optional<std::string> request_id;
    std::optional<std::string> user_id;
    std::optional<std::string> tenant_id;
    std::optional<std::string> client_ip;
    std::optional<std::string> server_ip;
    std::optional<std::string> http_method;
    std::optional<std::string> http_path;
    std::optional<std::int64_t> status_code;
    std::optional<std::int64_t> response_length;
    std::optional<std::string> response_time;  // decimal seconds, lexical
    std::optional<std::string> instance_uuid;
    std::optional<std::string> image_id;
    std::optional<std::string> base_file;
    std::optional<std::string> instance_file;
    std::optional<std::string> host;
    std::optional<std::string> event_type;
    std::optional<std::string> event_id;
    std::optional<std::string> event_uuid;

    /// Capacity, usage, timing, claim and audit readings, in vocabulary order.
    std::vector<MetricValue> metrics;
    std::optional<std::string> message;

    const MetricValue* metric(std::string_view predicate) const;

    bool operator==(const LogRecordFields&) const = default;
};

/// Lexical split of a log line.
struct LogTokens {
    std::string_view source;                    // leading file-name token, may be empty
    std::string_view header;                    // timestamp PID LEVEL component
    std::optional<std::string_view> context;    // "[req-... user tenant - - -]" incl. brackets
    std::string_view body;                      // the rest, trimmed
};

/// Views point into `text`. Throws MalformedHeader when no header can be read.
LogTokens tokenize(std::string_view text);

/// Throws MalformedHeader (propagated from tokenize).
LogRecordFields parse_entry(const RawLogEntry& entry);

/// Re-emits the tokens of `text` with single spaces between them. Parsing the
/// result yields the same fields as parsing `text`.
std::string normalize_line(std::string_view text);

}  // namespace logkg
