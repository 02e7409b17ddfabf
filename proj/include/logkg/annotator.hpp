#pragma once

#include "logkg/log_model.hpp"
#include "logkg/rdf.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace logkg {

/// The reference subgraph of one parsed entry: the five header statements,
/// then one statement per present field in vocabulary order.
TripleSet annotate(const LogRecordFields& fields, std::uint64_t seq);

struct DatasetRecord {
    std::uint64_t entry_id = 0;
    std::string log_record;
    std::string log;
    std::uint64_t seq = 0;  // position within log_record, 1-based
    TripleSet triples;

    bool operator==(const DatasetRecord&) const = default;
};

struct SkipRecord {
    std::uint64_t entry_id = 0;
    std::string log_record;
    std::string log;
    std::string reason;

    bool operator==(const SkipRecord&) const = default;
};

struct ReferenceDataset {
    std::vector<DatasetRecord> records;
    std::vector<SkipRecord> skips;
};

/// Entries that fail to parse go to `skips`. Sequence numbers count only the
/// annotated entries of each log_record, in entry order.
ReferenceDataset annotate_corpus(const std::vector<RawLogEntry>& entries);

/// Fills DatasetRecord::seq from record order, grouping by log_record.
void assign_sequence(std::vector<DatasetRecord>& records);

}  // namespace logkg
