#include "fixtures.hpp"

#include "subcollect/error.hpp"
#include "subcollect/spec.hpp"

#include <doctest.h>

#include <random>

using namespace subcollect;

namespace {
std::string error_of(const std::string& json) {
    try {
        parse_spec(json);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}
}  // namespace

TEST_CASE("URL and time scopes combine") {
    const auto spec = parse_spec(R"({"name": "t", "scopes": {"urls": ["http://A.de"],
        "time": {"from": "20000101000000", "to": "20011231235959"}}})");
    REQUIRE(spec.url_scope);
    CHECK(*spec.url_scope == std::vector<std::string>{"http://a.de/"});
    REQUIRE(spec.time_scope);
    CHECK(spec.time_scope->from == "20000101000000");
    CHECK(in_scope_metadata(spec, fixtures::entry("http://a.de/", "20000601000000")));
    CHECK_FALSE(in_scope_metadata(spec, fixtures::entry("http://a.de/", "20020101000000")));
    CHECK_FALSE(in_scope_metadata(spec, fixtures::entry("http://b.de/", "20000601000000")));
}

TEST_CASE("defaults are applied") {
    const auto spec = parse_spec(R"({"name": "t", "scopes": {"domains": [".A.de"]}})");
    CHECK(spec.link_mode == LinkMode::disconnected);
    CHECK(spec.version_mode == VersionMode::timeline);
    CHECK(spec.entity_combine == EntityCombine::any);
    CHECK(spec.closure_policy == ClosurePolicy::all_links);
    CHECK_FALSE(spec.closure_max_depth.has_value());
    CHECK(spec.seed == 0);
    CHECK(spec.scorer == kDefaultScorer);
    CHECK(*spec.domain_scope == std::vector<std::string>{"a.de"});
}

TEST_CASE("validation errors name the field") {
    CHECK(error_of(R"({"name": "t"})").find("scopes") != std::string::npos);
    CHECK(error_of(R"({"name": "t", "scopes": {}})").find("scopes") != std::string::npos);
    CHECK(error_of(R"({"name": "t", "scopes": {"languages": ["de"]}})").find("spec.scopes.languages") !=
          std::string::npos);
    CHECK(error_of(R"({"name": "t", "scopes": {"size": 3}, "colour": 1})").find("spec.colour") != std::string::npos);
    CHECK(error_of(R"({"name": "t", "scopes": {"time": {"from": "2000", "to": "20010101000000"}}})")
              .find("spec.scopes.time.from") != std::string::npos);
    CHECK(error_of(R"({"name": "t", "scopes": {"time": {"from": "20020101000000", "to": "20010101000000"}}})")
              .find("spec.scopes.time") != std::string::npos);
    CHECK(error_of(R"({"name": "t", "scopes": {"keywords": ["x"]}})").find("threshold") != std::string::npos);
    CHECK(error_of(R"({"name": "t", "scopes": {"size": 2}, "relevance": {"threshold": 0.5}})")
              .find("threshold") != std::string::npos);
    CHECK(error_of(R"({"name": "t", "scopes": {"keywords": ["x"]}, "relevance": {"threshold": 1.5}})")
              .find("threshold") != std::string::npos);
    CHECK(error_of(R"({"name": "t", "scopes": {"size": 0}})").find("scopes.size") != std::string::npos);
    CHECK(error_of(R"({"name": "t", "scopes": {"urls": ["ftp://x"]}})").find("scopes.urls[0]") !=
          std::string::npos);
    CHECK(error_of(R"({"name": "t", "scopes": {"size": 1}, "link_mode": "sideways"})").find("link_mode") !=
          std::string::npos);
    CHECK(error_of(R"({"name": "t", "scopes": {"entities": [{"id": "q", "label": ""}]}})").find("label") !=
          std::string::npos);
    CHECK(error_of(R"({"scopes": {"size": 1}})").find("name") != std::string::npos);
    CHECK(error_of("not json").find("JSON") != std::string::npos);
    CHECK(error_of(R"({"name": "t", "scopes": {"size": 1}, "closure": {"max_depth": 0}})").find("max_depth") !=
          std::string::npos);
}

TEST_CASE("entity aliases are deduplicated case-insensitively") {
    const auto spec = parse_spec(R"({"name": "t", "scopes": {"entities": [
        {"id": "/m/1", "label": "Angela Merkel", "aliases": ["merkel", "MERKEL", "Angela Merkel", "Kanzlerin"]}]}})");
    REQUIRE(spec.entity_scope);
    const auto& aliases = spec.entity_scope->at(0).aliases;
    CHECK(aliases == std::vector<std::string>{"merkel", "Kanzlerin"});
}

TEST_CASE("closure depth accepts a number or unbounded") {
    CHECK(parse_spec(R"({"name": "t", "scopes": {"size": 1}, "closure": {"max_depth": 3}})").closure_max_depth == 3u);
    CHECK_FALSE(parse_spec(R"({"name": "t", "scopes": {"size": 1}, "closure": {"max_depth": "unbounded"}})")
                    .closure_max_depth.has_value());
}

TEST_CASE("domain scope matches dot suffixes") {
    CHECK(host_in_domain("news.a.de", "a.de"));
    CHECK(host_in_domain("a.de", "a.de"));
    CHECK(host_in_domain("a.de", "de"));
    CHECK_FALSE(host_in_domain("aa.de", "a.de"));
    CHECK_FALSE(host_in_domain("a.de.com", "a.de"));
    SubCollectionSpec spec;
    spec.domain_scope = std::vector<std::string>{"a.de"};
    CHECK(in_scope_metadata(spec, fixtures::entry("http://news.a.de/", "20000101000000")));
}

TEST_CASE("time scope bounds are inclusive") {
    SubCollectionSpec spec;
    spec.time_scope = TimeScope{"20000101000000", "20011231235959"};
    CHECK_FALSE(in_scope_metadata(spec, fixtures::entry("http://a.de/", "19990101000000")));
    CHECK(in_scope_metadata(spec, fixtures::entry("http://a.de/", "20000101000000")));
    CHECK(in_scope_metadata(spec, fixtures::entry("http://a.de/", "20011231235959")));
}

TEST_CASE("in_scope_metadata is the conjunction of its clauses") {
    const std::vector<IndexEntry> entries = {
        fixtures::entry("http://a.de/", "20000601000000"), fixtures::entry("http://a.de/", "20050601000000"),
        fixtures::entry("http://b.de/", "20000601000000"), fixtures::entry("http://b.de/", "20050601000000")};
    for (int mask = 0; mask < 8; ++mask) {
        SubCollectionSpec spec;
        if (mask & 1) spec.url_scope = std::vector<std::string>{"http://a.de/", "http://b.de/x"};
        if (mask & 2) spec.domain_scope = std::vector<std::string>{"a.de"};
        if (mask & 4) spec.time_scope = TimeScope{"20000101000000", "20011231235959"};
        for (const auto& e : entries) {
            const bool url_ok = !(mask & 1) || e.canonical_url == "http://a.de/";
            const bool dom_ok = !(mask & 2) || e.canonical_url == "http://a.de/";
            const bool time_ok = !(mask & 4) || e.timestamp14 < "2002";
            CHECK(in_scope_metadata(spec, e) == (url_ok && dom_ok && time_ok));
        }
    }
}

TEST_CASE("parse and serialize are inverse") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        SubCollectionSpec spec;
        spec.name = "spec" + std::to_string(i);
        if (rng() % 2) spec.url_scope = std::vector<std::string>{"http://a.de/x?y=1", "https://b.de/"};
        if (rng() % 2) spec.domain_scope = std::vector<std::string>{"a.de", "de"};
        if (rng() % 2) spec.time_scope = TimeScope{"20000101000000", "20051231235959"};
        if (rng() % 2) {
            spec.keyword_scope = std::vector<std::string>{"web archive", "Wahl"};
            spec.relevance_threshold = static_cast<double>(rng() % 1000) / 999.0;
        }
        if (rng() % 2)
            spec.entity_scope = std::vector<EntityRef>{{"/m/1", "Angela Merkel", {"Merkel"}}, {"/m/2", "UN", {}}};
        if (rng() % 2 || (!spec.url_scope && !spec.domain_scope && !spec.time_scope && !spec.keyword_scope &&
                          !spec.entity_scope))
            spec.size_scope = 1 + rng() % 100;
        spec.link_mode = rng() % 2 ? LinkMode::connected : LinkMode::disconnected;
        spec.version_mode = rng() % 2 ? VersionMode::snapshot : VersionMode::timeline;
        spec.entity_combine = rng() % 2 ? EntityCombine::all : EntityCombine::any;
        spec.closure_policy = rng() % 2 ? ClosurePolicy::relevant_links : ClosurePolicy::all_links;
        if (rng() % 2) spec.closure_max_depth = 1 + rng() % 5;
        spec.seed = rng();
        validate_spec(spec);
        const SubCollectionSpec back = parse_spec(serialize_spec(spec));
        CHECK(back == spec);
        CHECK(spec_digest(back) == spec_digest(spec));
    }
}

TEST_CASE("adding a metadata scope never widens the match") {
    std::mt19937_64 rng(99);
    const char* hosts[] = {"a.de", "news.a.de", "b.de", "c.org"};
    std::vector<IndexEntry> entries;
    for (int i = 0; i < 200; ++i)
        entries.push_back(fixtures::entry(std::string("http://") + hosts[rng() % 4] + "/" + std::to_string(rng() % 3),
                                          std::to_string(1995 + rng() % 15) + "0101000000"));
    for (int round = 0; round < 200; ++round) {
        SubCollectionSpec base;
        base.size_scope = 10;
        if (rng() % 2) base.domain_scope = std::vector<std::string>{hosts[rng() % 4]};
        SubCollectionSpec narrower = base;
        switch (rng() % 3) {
            case 0: narrower.url_scope = std::vector<std::string>{entries[rng() % entries.size()].canonical_url}; break;
            case 1: narrower.domain_scope = std::vector<std::string>{hosts[rng() % 4]}; break;
            default: narrower.time_scope = TimeScope{"20000101000000", "20041231235959"};
        }
        if (base.domain_scope && narrower.domain_scope != base.domain_scope) continue;  // replacing is not adding
        for (const auto& e : entries)
            if (in_scope_metadata(narrower, e)) CHECK(in_scope_metadata(base, e));
    }
}
