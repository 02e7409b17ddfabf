#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace logkg {

inline constexpr std::string_view kLogPrefix = "log:";
inline constexpr std::string_view kBaseIri = "http://openstack.org/";

enum class PredicateCategory : std::uint8_t {
    Metadata,
    Context,
    NetworkHttp,
    ImageFileHost,
    Event,
    ResourceCapacity,
    UsagePerformanceClaim,
    FreeText,
};

enum class ObjectKind : std::uint8_t { Resource, Literal };

enum class Datatype : std::uint8_t { PlainString, Integer, Decimal, DateTime };

enum class ResourceKind : std::uint8_t {
    Component,
    User,
    Tenant,
    Instance,
    Image,
    BaseFile,
    InstanceFile,
    Host,
    Path,
};

struct PredicateDef {
    std::string_view name;  // "log:httpPath"
    PredicateCategory category;
    ObjectKind object_kind;
    std::optional<Datatype> datatype;          // Literal only
    std::optional<ResourceKind> resource_kind;  // Resource only

    std::string_view local_name() const { return name.substr(kLogPrefix.size()); }
};

/// The closed predicate set, in canonical statement order.
std::span<const PredicateDef> vocabulary();

/// Accepts "log:statusCode" or "statusCode". Throws NotInVocabulary.
const PredicateDef& lookup(std::string_view name);
/// Non-throwing variant of lookup.
const PredicateDef* find_predicate(std::string_view name);
/// Position of the predicate in vocabulary(); npos-like max value when absent.
std::size_t vocabulary_index(std::string_view name);

std::string_view to_string(PredicateCategory c);
std::string_view to_string(ObjectKind k);
std::string_view to_string(Datatype d);  // xsd local name; "string" for plain
std::string_view to_string(ResourceKind k);
/// URI path segment, e.g. "basefile".
std::string_view uri_segment(ResourceKind k);

/// http://openstack.org/log/request/{log_record}/{seq, zero padded to 4}
std::string subject_uri(std::string_view log_record, std::uint64_t seq);
/// http://openstack.org/{segment}/{id}. Path-like ids lose their leading slash.
std::string resource_uri(ResourceKind kind, std::string_view id);

/// Machine-readable dump of the vocabulary (JSON text).
std::string vocabulary_schema_json();

}  // namespace logkg
