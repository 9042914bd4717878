#pragma once

#include "subcollect/index.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace subcollect {

enum class LinkMode { disconnected, connected };
enum class VersionMode { timeline, snapshot };
enum class EntityCombine { any, all };
enum class ClosurePolicy { all_links, relevant_links };

struct EntityRef {
    std::string id;
    std::string label;
    std::vector<std::string> aliases;  // case-insensitively unique

    bool operator==(const EntityRef&) const = default;
};

struct TimeScope {
    std::string from;  // timestamp14, inclusive
    std::string to;    // timestamp14, inclusive
    bool operator==(const TimeScope&) const = default;
};

inline constexpr std::string_view kDefaultScorer = "keyword-cosine-tf";

/// Declarative description of a sub-collection. Scopes combine conjunctively.
struct SubCollectionSpec {
    std::string name;

    std::optional<std::vector<std::string>> url_scope;     // canonical URLs
    std::optional<std::vector<std::string>> domain_scope;  // lowercase, no leading dot
    std::optional<TimeScope> time_scope;
    std::optional<std::vector<std::string>> keyword_scope;
    std::optional<std::vector<EntityRef>> entity_scope;
    std::optional<std::uint64_t> size_scope;

    LinkMode link_mode = LinkMode::disconnected;
    VersionMode version_mode = VersionMode::timeline;
    std::optional<double> relevance_threshold;  // present iff keyword_scope is
    EntityCombine entity_combine = EntityCombine::any;
    std::string scorer{kDefaultScorer};
    ClosurePolicy closure_policy = ClosurePolicy::all_links;
    std::optional<std::uint64_t> closure_max_depth;  // nullopt: run to fixpoint
    std::uint64_t seed = 0;

    bool has_content_scopes() const { return keyword_scope.has_value() || entity_scope.has_value(); }
    bool operator==(const SubCollectionSpec&) const = default;
};

/// Parses the JSON spec format, applies defaults, and validates. Throws
/// ValidationError naming the offending field path.
SubCollectionSpec parse_spec(std::string_view json_text);
SubCollectionSpec parse_spec_file(const std::filesystem::path& path);

/// Checks the cross-field invariants; throws ValidationError.
void validate_spec(const SubCollectionSpec& spec);

/// Canonical JSON (every field explicit, keys sorted).
std::string serialize_spec(const SubCollectionSpec& spec);
std::string spec_digest(const SubCollectionSpec& spec);

/// URL, domain and time scopes only; content scopes are not consulted.
bool in_scope_metadata(const SubCollectionSpec& spec, const IndexEntry& entry);

bool host_in_domain(std::string_view host, std::string_view domain);

}  // namespace subcollect
