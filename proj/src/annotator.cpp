#include "logkg/annotator.hpp"

#include "logkg/error.hpp"
#include "logkg/ontology.hpp"

#include <algorithm>
#include <unordered_map>

namespace logkg {

const std::string& TripleSet::subject() const {
    static const std::string kNone;
    return triples.empty() ? kNone : triples.front().subject;
}

void TripleSet::add(std::string subject, std::string predicate, Term object) {
    triples.push_back({std::move(subject), std::move(predicate), std::move(object)});
}

namespace {

std::string xsd(Datatype d) {
    if (d == Datatype::PlainString) return {};
    return "xsd:" + std::string(to_string(d));
}

// Audit bounds are printed without the 'T'/'Z' of xsd:dateTime.
std::string as_datetime(const std::string& lexical) {
    if (auto ts = parse_timestamp(lexical)) return ts->to_iso();
    return lexical;
}

struct Builder {
    std::string subject;
    std::vector<std::pair<std::size_t, Triple>> items;

    void put(std::string_view predicate, const std::string& value) {
        const auto& def = lookup(predicate);
        Term object;
        if (def.object_kind == ObjectKind::Resource) {
            object = Term::iri(resource_uri(*def.resource_kind, value));
        } else if (def.datatype == Datatype::DateTime) {
            object = Term::literal(as_datetime(value), xsd(Datatype::DateTime));
        } else {
            object = Term::literal(value, xsd(*def.datatype));
        }
        items.push_back({vocabulary_index(def.name), {subject, std::string(def.name), std::move(object)}});
    }

    void put(std::string_view predicate, const std::optional<std::string>& value) {
        if (value) put(predicate, *value);
    }

    void put(std::string_view predicate, const std::optional<std::int64_t>& value) {
        if (value) put(predicate, std::to_string(*value));
    }
};

}  // namespace

TripleSet annotate(const LogRecordFields& f, std::uint64_t seq) {
    Builder b{subject_uri(f.log_record, seq), {}};
    b.put("logRecord", f.log_record);
    b.put("timestamp", f.timestamp.to_iso());
    b.put("processId", std::to_string(f.process_id));
    b.put("level", f.level);
    b.put("belongsToComponent", f.component);
    b.put("requestId", f.request_id);
    b.put("belongsToUser", f.user_id);
    b.put("belongsToTenant", f.tenant_id);
    b.put("belongsToInstance", f.instance_uuid);
    b.put("clientIp", f.client_ip);
    b.put("serverIp", f.server_ip);
    b.put("httpMethod", f.http_method);
    b.put("httpPath", f.http_path);
    b.put("callsPath", f.http_path);
    b.put("statusCode", f.status_code);
    b.put("responseLength", f.response_length);
    b.put("responseTime", f.response_time);
    b.put("hasImage", f.image_id);
    b.put("hasBaseFile", f.base_file);
    b.put("hasInstanceFile", f.instance_file);
    b.put("belongsToHost", f.host);
    b.put("eventType", f.event_type);
    b.put("eventId", f.event_id);
    b.put("eventUuid", f.event_uuid);
    for (const auto& m : f.metrics) b.put(m.predicate, m.lexical);
    b.put("message", f.message);

    std::stable_sort(b.items.begin(), b.items.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    TripleSet out;
    out.triples.reserve(b.items.size());
    for (auto& [index, triple] : b.items) out.triples.push_back(std::move(triple));
    return out;
}

void assign_sequence(std::vector<DatasetRecord>& records) {
    std::unordered_map<std::string, std::uint64_t> next;
    for (auto& r : records) r.seq = ++next[r.log_record];
}

ReferenceDataset annotate_corpus(const std::vector<RawLogEntry>& entries) {
    ReferenceDataset out;
    std::vector<LogRecordFields> parsed;
    for (const auto& entry : entries) {
        try {
            auto fields = parse_entry(entry);
            out.records.push_back({entry.entry_id, fields.log_record, entry.text, 0, {}});
            parsed.push_back(std::move(fields));
        } catch (const MalformedHeader& e) {
            out.skips.push_back({entry.entry_id, entry.log_record, entry.text, e.what()});
        }
    }
    assign_sequence(out.records);
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        out.records[i].triples = annotate(parsed[i], out.records[i].seq);
    }
    return out;
}

}  // namespace logkg
