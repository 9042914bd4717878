#include "subcollect/spec.hpp"

#include "subcollect/digest.hpp"
#include "subcollect/error.hpp"
#include "subcollect/text.hpp"
#include "subcollect/url.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>

namespace subcollect {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw ValidationError("spec." + path + ": " + why);
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(path.empty() ? key : path + "." + key, "unknown field");
    }
}

std::string get_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

std::vector<std::string> get_string_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of strings");
    if (v.empty()) fail(path, "must not be empty");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_string(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::uint64_t get_positive(const json& v, const std::string& path) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        fail(path, "expected a positive integer");
    const auto n = v.get<std::uint64_t>();
    if (n == 0) fail(path, "expected a positive integer");
    return n;
}

template <typename Enum>
Enum get_enum(const json& v, const std::string& path, std::initializer_list<std::pair<std::string_view, Enum>> options) {
    const std::string s = get_string(v, path);
    for (const auto& [name, value] : options)
        if (s == name) return value;
    fail(path, "unsupported value '" + s + "'");
}

std::string lower_ascii(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

EntityRef parse_entity(const json& v, const std::string& path) {
    reject_unknown(v, path, {"id", "label", "aliases"});
    EntityRef e;
    if (!v.contains("id")) fail(path + ".id", "required");
    if (!v.contains("label")) fail(path + ".label", "required");
    e.id = get_string(v["id"], path + ".id");
    e.label = get_string(v["label"], path + ".label");
    if (e.label.empty()) fail(path + ".label", "must not be empty");
    std::set<std::string> seen{lower_ascii(e.label)};
    if (v.contains("aliases")) {
        const auto& a = v["aliases"];
        if (!a.is_array()) fail(path + ".aliases", "expected an array of strings");
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::string alias = get_string(a[i], path + ".aliases[" + std::to_string(i) + "]");
            if (seen.insert(lower_ascii(alias)).second) e.aliases.push_back(std::move(alias));
        }
    }
    return e;
}

constexpr std::string_view link_mode_name(LinkMode m) { return m == LinkMode::connected ? "connected" : "disconnected"; }
constexpr std::string_view version_mode_name(VersionMode m) { return m == VersionMode::snapshot ? "snapshot" : "timeline"; }
constexpr std::string_view combine_name(EntityCombine c) { return c == EntityCombine::all ? "all" : "any"; }
constexpr std::string_view policy_name(ClosurePolicy p) {
    return p == ClosurePolicy::relevant_links ? "relevant_links" : "all_links";
}

}  // namespace

bool host_in_domain(std::string_view host, std::string_view domain) {
    if (host == domain) return true;
    return host.size() > domain.size() && host.ends_with(domain) && host[host.size() - domain.size() - 1] == '.';
}

void validate_spec(const SubCollectionSpec& spec) {
    if (!spec.url_scope && !spec.domain_scope && !spec.time_scope && !spec.keyword_scope && !spec.entity_scope &&
        !spec.size_scope)
        fail("scopes", "at least one scope is required");
    if (spec.time_scope) {
        if (!is_valid_timestamp14(spec.time_scope->from)) fail("scopes.time.from", "malformed timestamp");
        if (!is_valid_timestamp14(spec.time_scope->to)) fail("scopes.time.to", "malformed timestamp");
        if (spec.time_scope->from > spec.time_scope->to) fail("scopes.time", "from is later than to");
    }
    if (spec.keyword_scope.has_value() != spec.relevance_threshold.has_value())
        fail("relevance.threshold", "required exactly when scopes.keywords is present");
    if (spec.relevance_threshold && !(*spec.relevance_threshold >= 0.0 && *spec.relevance_threshold <= 1.0))
        fail("relevance.threshold", "must lie in [0, 1]");
    if (spec.keyword_scope) {
        if (spec.keyword_scope->empty()) fail("scopes.keywords", "must not be empty");
        for (std::size_t i = 0; i < spec.keyword_scope->size(); ++i)
            if (tokenize((*spec.keyword_scope)[i]).empty())
                fail("scopes.keywords[" + std::to_string(i) + "]", "contains no word characters");
    }
    if (spec.size_scope && *spec.size_scope == 0) fail("scopes.size", "must be positive");
    if (spec.closure_max_depth && *spec.closure_max_depth == 0) fail("closure.max_depth", "must be positive");
    if (spec.scorer != kDefaultScorer) fail("relevance.scorer", "unsupported scorer '" + spec.scorer + "'");
}

SubCollectionSpec parse_spec(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("spec: invalid JSON: ") + e.what());
    }
    reject_unknown(doc, "", {"name", "scopes", "link_mode", "version_mode", "relevance", "closure", "seed"});

    SubCollectionSpec spec;
    if (!doc.contains("name")) fail("name", "required");
    spec.name = get_string(doc["name"], "name");

    if (doc.contains("scopes")) {
        const json& scopes = doc["scopes"];
        reject_unknown(scopes, "scopes", {"urls", "domains", "time", "keywords", "entities", "size"});
        if (scopes.contains("urls")) {
            auto urls = get_string_list(scopes["urls"], "scopes.urls");
            for (std::size_t i = 0; i < urls.size(); ++i) {
                try {
                    urls[i] = canonicalize_url(urls[i]);
                } catch (const UrlError& e) {
                    fail("scopes.urls[" + std::to_string(i) + "]", e.what());
                }
            }
            spec.url_scope = std::move(urls);
        }
        if (scopes.contains("domains")) {
            auto domains = get_string_list(scopes["domains"], "scopes.domains");
            for (std::size_t i = 0; i < domains.size(); ++i) {
                std::string d = lower_ascii(domains[i]);
                while (!d.empty() && d.front() == '.') d.erase(0, 1);
                if (d.empty() || d.find_first_of("/:@ ") != std::string::npos)
                    fail("scopes.domains[" + std::to_string(i) + "]", "not a domain name");
                domains[i] = std::move(d);
            }
            spec.domain_scope = std::move(domains);
        }
        if (scopes.contains("time")) {
            const json& t = scopes["time"];
            reject_unknown(t, "scopes.time", {"from", "to"});
            if (!t.contains("from")) fail("scopes.time.from", "required");
            if (!t.contains("to")) fail("scopes.time.to", "required");
            spec.time_scope = TimeScope{get_string(t["from"], "scopes.time.from"), get_string(t["to"], "scopes.time.to")};
        }
        if (scopes.contains("keywords")) spec.keyword_scope = get_string_list(scopes["keywords"], "scopes.keywords");
        if (scopes.contains("entities")) {
            const json& ents = scopes["entities"];
            if (!ents.is_array() || ents.empty()) fail("scopes.entities", "expected a nonempty array");
            std::vector<EntityRef> out;
            for (std::size_t i = 0; i < ents.size(); ++i)
                out.push_back(parse_entity(ents[i], "scopes.entities[" + std::to_string(i) + "]"));
            spec.entity_scope = std::move(out);
        }
        if (scopes.contains("size")) spec.size_scope = get_positive(scopes["size"], "scopes.size");
    }

    if (doc.contains("link_mode"))
        spec.link_mode = get_enum<LinkMode>(doc["link_mode"], "link_mode",
                                            {{"connected", LinkMode::connected}, {"disconnected", LinkMode::disconnected}});
    if (doc.contains("version_mode"))
        spec.version_mode = get_enum<VersionMode>(doc["version_mode"], "version_mode",
                                                  {{"snapshot", VersionMode::snapshot}, {"timeline", VersionMode::timeline}});
    if (doc.contains("relevance")) {
        const json& r = doc["relevance"];
        reject_unknown(r, "relevance", {"threshold", "entity_combine", "scorer"});
        if (r.contains("threshold")) {
            if (!r["threshold"].is_number()) fail("relevance.threshold", "expected a number");
            spec.relevance_threshold = r["threshold"].get<double>();
        }
        if (r.contains("entity_combine"))
            spec.entity_combine = get_enum<EntityCombine>(r["entity_combine"], "relevance.entity_combine",
                                                          {{"any", EntityCombine::any}, {"all", EntityCombine::all}});
        if (r.contains("scorer")) spec.scorer = get_string(r["scorer"], "relevance.scorer");
    }
    if (doc.contains("closure")) {
        const json& c = doc["closure"];
        reject_unknown(c, "closure", {"policy", "max_depth"});
        if (c.contains("policy"))
            spec.closure_policy = get_enum<ClosurePolicy>(
                c["policy"], "closure.policy",
                {{"all_links", ClosurePolicy::all_links}, {"relevant_links", ClosurePolicy::relevant_links}});
        if (c.contains("max_depth")) {
            const json& d = c["max_depth"];
            if (d.is_null() || (d.is_string() && d.get<std::string>() == "unbounded")) spec.closure_max_depth.reset();
            else spec.closure_max_depth = get_positive(d, "closure.max_depth");
        }
    }
    if (doc.contains("seed")) {
        const json& s = doc["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
            fail("seed", "expected an unsigned 64-bit integer");
        spec.seed = s.get<std::uint64_t>();
    }
    validate_spec(spec);
    return spec;
}

SubCollectionSpec parse_spec_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open spec " + path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_spec(text);
}

std::string serialize_spec(const SubCollectionSpec& spec) {
    json doc;
    doc["name"] = spec.name;
    json scopes = json::object();
    if (spec.url_scope) scopes["urls"] = *spec.url_scope;
    if (spec.domain_scope) scopes["domains"] = *spec.domain_scope;
    if (spec.time_scope) scopes["time"] = {{"from", spec.time_scope->from}, {"to", spec.time_scope->to}};
    if (spec.keyword_scope) scopes["keywords"] = *spec.keyword_scope;
    if (spec.entity_scope) {
        json ents = json::array();
        for (const auto& e : *spec.entity_scope)
            ents.push_back({{"id", e.id}, {"label", e.label}, {"aliases", e.aliases}});
        scopes["entities"] = std::move(ents);
    }
    if (spec.size_scope) scopes["size"] = *spec.size_scope;
    doc["scopes"] = std::move(scopes);
    doc["link_mode"] = link_mode_name(spec.link_mode);
    doc["version_mode"] = version_mode_name(spec.version_mode);
    json relevance = {{"entity_combine", combine_name(spec.entity_combine)}, {"scorer", spec.scorer}};
    if (spec.relevance_threshold) relevance["threshold"] = *spec.relevance_threshold;
    doc["relevance"] = std::move(relevance);
    json closure = {{"policy", policy_name(spec.closure_policy)}};
    closure["max_depth"] = spec.closure_max_depth ? json(*spec.closure_max_depth) : json(nullptr);
    doc["closure"] = std::move(closure);
    doc["seed"] = spec.seed;
    return doc.dump();
}

std::string spec_digest(const SubCollectionSpec& spec) { return sha256_hex(serialize_spec(spec)); }

bool in_scope_metadata(const SubCollectionSpec& spec, const IndexEntry& entry) {
    if (spec.url_scope &&
        std::find(spec.url_scope->begin(), spec.url_scope->end(), entry.canonical_url) == spec.url_scope->end())
        return false;
    if (spec.domain_scope) {
        const std::string_view host = url_host(entry.canonical_url);
        if (std::none_of(spec.domain_scope->begin(), spec.domain_scope->end(),
                         [&](const std::string& d) { return host_in_domain(host, d); }))
            return false;
    }
    if (spec.time_scope &&
        (entry.timestamp14 < spec.time_scope->from || entry.timestamp14 > spec.time_scope->to))
        return false;
    return true;
}

}  // namespace subcollect
