#pragma once

#include "logkg/annotator.hpp"
#include "logkg/log_model.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace logkg {

/// Sidecar line: "START-END<TAB>log_record", 1-based inclusive physical line
/// numbers of the corpus file. Lines starting with '#' are comments.
struct NameRange {
    std::size_t first = 0;
    std::size_t last = 0;
    std::string log_record;
};

std::vector<NameRange> parse_name_ranges(std::string_view text);

/// Splits corpus text into entries. Blank lines are skipped; entry_id counts
/// the remaining lines from 1. A line's log_record comes from the sidecar
/// range covering it, else `default_record`. A file name written in front of
/// the timestamp still wins when the line is parsed.
std::vector<RawLogEntry> split_corpus(std::string_view text, const std::string& default_record,
                                      const std::vector<NameRange>& names = {});

/// Reads a corpus file, defaulting log_record to the file's name. Throws
/// DataError when a file cannot be read or the sidecar is malformed.
std::vector<RawLogEntry> read_corpus(const std::filesystem::path& corpus,
                                     const std::optional<std::filesystem::path>& sidecar = std::nullopt);

/// Dataset JSON Lines: {"id", "log_record", "log", "ttl"} per record.
std::string dataset_jsonl(const std::vector<DatasetRecord>& records);
/// {"id", "log_record", "log", "reason"} per skipped line.
std::string skips_jsonl(const std::vector<SkipRecord>& skips);

/// Parses dataset JSON Lines; ttl must parse strictly. Throws DataError.
std::vector<DatasetRecord> parse_dataset(std::string_view text);
std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path);

/// The records as corpus entries (id, log_record, text).
std::vector<RawLogEntry> dataset_entries(const std::vector<DatasetRecord>& records);

std::string read_file(const std::filesystem::path& path);
/// Writes via a temporary sibling and rename.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace logkg
