#include "logkg/ontology.hpp"

#include "logkg/error.hpp"

#include <array>
#include <limits>

#include <json.hpp>

namespace logkg {

namespace {

using C = PredicateCategory;
using D = Datatype;
using R = ResourceKind;

constexpr PredicateDef literal(std::string_view name, C category, D datatype) {
    return {name, category, ObjectKind::Literal, datatype, std::nullopt};
}

constexpr PredicateDef resource(std::string_view name, C category, R kind) {
    return {name, category, ObjectKind::Resource, std::nullopt, kind};
}

// Order is the canonical statement order: metadata, context, HTTP, files/host,
// events, capacity, usage, then free text.
constexpr std::array kVocabulary{
    literal("log:logRecord", C::Metadata, D::PlainString),
    literal("log:timestamp", C::Metadata, D::DateTime),
    literal("log:processId", C::Metadata, D::Integer),
    literal("log:level", C::Metadata, D::PlainString),
    resource("log:belongsToComponent", C::Metadata, R::Component),
    literal("log:requestId", C::Metadata, D::PlainString),

    resource("log:belongsToUser", C::Context, R::User),
    resource("log:belongsToTenant", C::Context, R::Tenant),
    resource("log:belongsToInstance", C::Context, R::Instance),

    literal("log:clientIp", C::NetworkHttp, D::PlainString),
    literal("log:serverIp", C::NetworkHttp, D::PlainString),
    literal("log:httpMethod", C::NetworkHttp, D::PlainString),
    literal("log:httpPath", C::NetworkHttp, D::PlainString),
    resource("log:callsPath", C::NetworkHttp, R::Path),
    literal("log:statusCode", C::NetworkHttp, D::Integer),
    literal("log:responseLength", C::NetworkHttp, D::Integer),
    literal("log:responseTime", C::NetworkHttp, D::Decimal),

    resource("log:hasImage", C::ImageFileHost, R::Image),
    resource("log:hasBaseFile", C::ImageFileHost, R::BaseFile),
    resource("log:hasInstanceFile", C::ImageFileHost, R::InstanceFile),
    resource("log:belongsToHost", C::ImageFileHost, R::Host),

    literal("log:eventType", C::Event, D::PlainString),
    literal("log:eventId", C::Event, D::PlainString),
    literal("log:eventUuid", C::Event, D::PlainString),

    literal("log:physicalRamMB", C::ResourceCapacity, D::Decimal),
    literal("log:usedRamMB", C::ResourceCapacity, D::Decimal),
    literal("log:totalMemoryMB", C::ResourceCapacity, D::Decimal),
    literal("log:usedMemoryMB", C::ResourceCapacity, D::Decimal),
    literal("log:freeMemoryMB", C::ResourceCapacity, D::Decimal),
    literal("log:hasMemoryLimitMB", C::ResourceCapacity, D::Decimal),
    literal("log:physicalDiskGB", C::ResourceCapacity, D::Decimal),
    literal("log:usedDiskGB", C::ResourceCapacity, D::Decimal),
    literal("log:totalDiskGB", C::ResourceCapacity, D::Decimal),
    literal("log:totalVcpus", C::ResourceCapacity, D::Integer),
    literal("log:usedVcpus", C::ResourceCapacity, D::Decimal),
    literal("log:allocatedVcpus", C::ResourceCapacity, D::Integer),
    literal("log:usableVcpus", C::ResourceCapacity, D::Integer),
    literal("log:totalUsableVcpus", C::ResourceCapacity, D::Integer),
    literal("log:totalAllocatedVcpus", C::ResourceCapacity, D::Integer),

    literal("log:localUsageCount", C::UsagePerformanceClaim, D::Integer),
    literal("log:remoteUsageCount", C::UsagePerformanceClaim, D::Integer),
    literal("log:spawnTimeSeconds", C::UsagePerformanceClaim, D::Decimal),
    literal("log:buildTimeSeconds", C::UsagePerformanceClaim, D::Decimal),
    literal("log:durationSeconds", C::UsagePerformanceClaim, D::Decimal),
    literal("log:claimStatus", C::UsagePerformanceClaim, D::PlainString),
    literal("log:requestedMemoryMB", C::UsagePerformanceClaim, D::Decimal),
    literal("log:requestedDiskGB", C::UsagePerformanceClaim, D::Decimal),
    literal("log:requestedVcpus", C::UsagePerformanceClaim, D::Integer),
    literal("log:instanceCount", C::UsagePerformanceClaim, D::Integer),
    literal("log:usageAuditStart", C::UsagePerformanceClaim, D::DateTime),
    literal("log:usageAuditEnd", C::UsagePerformanceClaim, D::DateTime),

    literal("log:message", C::FreeText, D::PlainString),
};

std::string_view qualified(std::string_view name, std::string& scratch) {
    if (name.starts_with(kLogPrefix)) return name;
    scratch.assign(kLogPrefix);
    scratch.append(name);
    return scratch;
}

bool iri_safe(char c) {
    auto u = static_cast<unsigned char>(c);
    if (u <= 0x20) return false;
    switch (c) {
        case '<': case '>': case '"': case '{': case '}': case '|':
        case '^': case '`': case '\\': case '%':
            return false;
        default:
            return true;
    }
}

void append_escaped(std::string& out, std::string_view id) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    for (char c : id) {
        if (iri_safe(c)) {
            out.push_back(c);
        } else {
            auto u = static_cast<unsigned char>(c);
            out.push_back('%');
            out.push_back(kHex[u >> 4]);
            out.push_back(kHex[u & 0xF]);
        }
    }
}

}  // namespace

std::span<const PredicateDef> vocabulary() { return kVocabulary; }

const PredicateDef* find_predicate(std::string_view name) {
    std::string scratch;
    auto q = qualified(name, scratch);
    for (const auto& def : kVocabulary) {
        if (def.name == q) return &def;
    }
    return nullptr;
}

const PredicateDef& lookup(std::string_view name) {
    if (const auto* def = find_predicate(name)) return *def;
    throw NotInVocabulary(std::string(name));
}

std::size_t vocabulary_index(std::string_view name) {
    std::string scratch;
    auto q = qualified(name, scratch);
    for (std::size_t i = 0; i < kVocabulary.size(); ++i) {
        if (kVocabulary[i].name == q) return i;
    }
    return std::numeric_limits<std::size_t>::max();
}

std::string_view to_string(PredicateCategory c) {
    switch (c) {
        case C::Metadata: return "Metadata & Provenance";
        case C::Context: return "User, Tenant & Instance Context";
        case C::NetworkHttp: return "Network & HTTP Interaction";
        case C::ImageFileHost: return "Image, File & Host Information";
        case C::Event: return "Event Information";
        case C::ResourceCapacity: return "Resource & Capacity Metrics";
        case C::UsagePerformanceClaim: return "Usage, Performance & Claim";
        case C::FreeText: return "Free-Text Content";
    }
    return "?";
}

std::string_view to_string(ObjectKind k) {
    return k == ObjectKind::Resource ? "Resource" : "Literal";
}

std::string_view to_string(Datatype d) {
    switch (d) {
        case D::PlainString: return "string";
        case D::Integer: return "integer";
        case D::Decimal: return "decimal";
        case D::DateTime: return "dateTime";
    }
    return "?";
}

std::string_view to_string(ResourceKind k) {
    switch (k) {
        case R::Component: return "component";
        case R::User: return "user";
        case R::Tenant: return "tenant";
        case R::Instance: return "instance";
        case R::Image: return "image";
        case R::BaseFile: return "baseFile";
        case R::InstanceFile: return "instanceFile";
        case R::Host: return "host";
        case R::Path: return "path";
    }
    return "?";
}

std::string_view uri_segment(ResourceKind k) {
    switch (k) {
        case R::BaseFile: return "basefile";
        case R::InstanceFile: return "instancefile";
        default: return to_string(k);
    }
}

std::string subject_uri(std::string_view log_record, std::uint64_t seq) {
    std::string out(kBaseIri);
    out += "log/request/";
    append_escaped(out, log_record);
    out += '/';
    auto digits = std::to_string(seq);
    if (digits.size() < 4) out.append(4 - digits.size(), '0');
    out += digits;
    return out;
}

std::string resource_uri(ResourceKind kind, std::string_view id) {
    if (kind == R::Path || kind == R::BaseFile || kind == R::InstanceFile) {
        while (id.starts_with('/')) id.remove_prefix(1);
    }
    std::string out(kBaseIri);
    out += uri_segment(kind);
    out += '/';
    append_escaped(out, id);
    return out;
}

std::string vocabulary_schema_json() {
    nlohmann::ordered_json defs = nlohmann::ordered_json::array();
    for (const auto& def : kVocabulary) {
        nlohmann::ordered_json j;
        j["name"] = def.name;
        j["category"] = to_string(def.category);
        j["object_kind"] = to_string(def.object_kind);
        if (def.datatype) j["datatype"] = to_string(*def.datatype);
        if (def.resource_kind) {
            j["resource_kind"] = to_string(*def.resource_kind);
            j["uri_pattern"] = std::string(kBaseIri) + std::string(uri_segment(*def.resource_kind)) + "/{id}";
        }
        defs.push_back(std::move(j));
    }
    nlohmann::ordered_json root;
    root["prefix"] = "log";
    root["subject_pattern"] = std::string(kBaseIri) + "log/request/{log_record}/{seq:04}";
    root["predicates"] = std::move(defs);
    return root.dump(2);
}

}  // namespace logkg
