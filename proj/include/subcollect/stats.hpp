#pragma once

#include "subcollect/archive.hpp"
#include "subcollect/html.hpp"
#include "subcollect/index.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace subcollect {

struct SampledPage {
    IndexEntry entry;
    PageAnalysis analysis;
    int year() const { return timestamp_year(entry.timestamp14); }
};

/// Exact capture counts per crawl year; reads only the index.
std::map<int, std::uint64_t> snapshots_per_year(const Index& index);

/// Uniform reservoir sample of min(n, #HTML entries) HTML entries, returned
/// in index order. Deterministic per seed.
std::vector<IndexEntry> sample_refs(const Index& index, std::uint64_t n, std::uint64_t seed);

/// Fetches and analyzes each sampled entry once. Corrupt records are dropped
/// and counted in `fetch_errors`.
std::vector<SampledPage> analyze_sample(std::span<const IndexEntry> sample, const Archive& archive,
                                        LinkPolicy policy = {}, unsigned workers = 1,
                                        std::uint64_t* fetch_errors = nullptr);

struct ContainmentOptions {
    /// Count a link as archived only if the target has a capture in the
    /// linking page's crawl year.
    bool same_year = false;
    /// Pool links across pages instead of averaging per-page fractions.
    bool micro_average = false;
};

struct LinkRates {
    std::optional<double> internal;  // nullopt: no page of that year had such links
    std::optional<double> external;
};

std::map<int, LinkRates> link_in_archive_rate(std::span<const SampledPage> sample, const Index& index,
                                              ContainmentOptions options = {});

struct TagAverages {
    double scripts = 0.0;
    double style_elements = 0.0;
    double linked_styles = 0.0;
    double table = 0.0;
    double div = 0.0;
};

struct TagStats {
    std::map<int, TagAverages> average;
    /// Each tag divided by its maximum yearly average; 0 where the maximum is 0.
    std::map<int, TagAverages> normalized;
};

TagStats tag_stats(std::span<const SampledPage> sample);

struct OutlinkAverages {
    double total = 0.0;
    double internal = 0.0;
    double external = 0.0;
};

std::map<int, OutlinkAverages> outlink_stats(std::span<const SampledPage> sample);

struct StatsRow {
    int year = 0;
    std::uint64_t snapshot_count = 0;
    std::uint64_t sampled_pages = 0;
    LinkRates link_rates;
    std::optional<TagAverages> tags;  // absent when no page of the year was sampled
    std::optional<TagAverages> tags_normalized;
    std::optional<OutlinkAverages> outlinks;
};

struct StatsReport {
    std::vector<StatsRow> rows;  // ascending year
    std::uint64_t fetch_errors = 0;
};

struct StatsOptions {
    std::uint64_t sample_n = 40000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    ContainmentOptions containment;
    LinkPolicy link_policy;
};

StatsReport compute_stats(const Index& index, const Archive& archive, const StatsOptions& options);

/// year,metric,value
void write_stats_long_csv(const StatsReport& report, std::ostream& out);
/// One row per year, one column per metric; empty cells for missing values.
void write_stats_wide_csv(const StatsReport& report, std::ostream& out);

}  // namespace subcollect
