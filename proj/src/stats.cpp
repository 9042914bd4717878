#include "subcollect/stats.hpp"

#include "subcollect/error.hpp"
#include "subcollect/format.hpp"
#include "subcollect/parallel.hpp"
#include "subcollect/random.hpp"
#include "subcollect/warc.hpp"

#include <algorithm>
#include <ostream>

namespace subcollect {

namespace {

struct Fraction {
    std::uint64_t hit = 0;
    std::uint64_t total = 0;
};

struct RateAccumulator {
    double fraction_sum = 0.0;  // macro: sum of per-page fractions
    std::uint64_t pages = 0;
    Fraction pooled;            // micro

    void add(const Fraction& page) {
        if (page.total == 0) return;
        fraction_sum += static_cast<double>(page.hit) / static_cast<double>(page.total);
        ++pages;
        pooled.hit += page.hit;
        pooled.total += page.total;
    }

    std::optional<double> rate(bool micro) const {
        if (pages == 0) return std::nullopt;
        if (micro) return static_cast<double>(pooled.hit) / static_cast<double>(pooled.total);
        return fraction_sum / static_cast<double>(pages);
    }
};

double safe_ratio(double v, double max) { return max > 0.0 ? v / max : 0.0; }

}  // namespace

std::map<int, std::uint64_t> snapshots_per_year(const Index& index) {
    std::map<int, std::uint64_t> out;
    for (const auto& e : index.entries()) ++out[timestamp_year(e.timestamp14)];
    return out;
}

std::vector<IndexEntry> sample_refs(const Index& index, std::uint64_t n, std::uint64_t seed) {
    if (n == 0) throw ValidationError("sample size must be positive");
    Rng rng(seed);
    std::vector<std::size_t> reservoir;
    std::uint64_t seen = 0;
    const auto& entries = index.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!is_html_media_type(entries[i].mime)) continue;
        ++seen;
        if (reservoir.size() < n) {
            reservoir.push_back(i);
        } else if (const std::uint64_t j = rng.below(seen); j < n) {
            reservoir[j] = i;
        }
    }
    std::sort(reservoir.begin(), reservoir.end());
    std::vector<IndexEntry> out;
    out.reserve(reservoir.size());
    for (const std::size_t i : reservoir) out.push_back(entries[i]);
    return out;
}

std::vector<SampledPage> analyze_sample(std::span<const IndexEntry> sample, const Archive& archive, LinkPolicy policy,
                                        unsigned workers, std::uint64_t* fetch_errors) {
    std::vector<std::optional<SampledPage>> slots(sample.size());
    parallel_for(sample.size(), workers, [&](std::size_t i) {
        try {
            Snapshot snap = archive.fetch(sample[i]);
            slots[i] = SampledPage{sample[i], analyze_snapshot(snap, policy)};
        } catch (const CorruptionError&) {
        }
    });
    std::vector<SampledPage> out;
    out.reserve(sample.size());
    std::uint64_t errors = 0;
    for (auto& s : slots) {
        if (s) out.push_back(std::move(*s));
        else ++errors;
    }
    if (fetch_errors) *fetch_errors = errors;
    return out;
}

std::map<int, LinkRates> link_in_archive_rate(std::span<const SampledPage> sample, const Index& index,
                                              ContainmentOptions options) {
    auto contained = [&](const std::string& target, int year) {
        const auto caps = index.captures_of(target);
        if (!options.same_year) return !caps.empty();
        return std::any_of(caps.begin(), caps.end(),
                           [&](const IndexEntry& e) { return timestamp_year(e.timestamp14) == year; });
    };
    std::map<int, std::pair<RateAccumulator, RateAccumulator>> acc;
    for (const auto& page : sample) {
        const int year = page.year();
        Fraction internal, external;
        for (const auto& link : page.analysis.outlinks) {
            Fraction& f = link.kind == LinkKind::internal ? internal : external;
            ++f.total;
            f.hit += contained(link.target, year);
        }
        auto& [in_acc, ex_acc] = acc[year];
        in_acc.add(internal);
        ex_acc.add(external);
    }
    std::map<int, LinkRates> out;
    for (const auto& [year, a] : acc)
        out[year] = {a.first.rate(options.micro_average), a.second.rate(options.micro_average)};
    return out;
}

TagStats tag_stats(std::span<const SampledPage> sample) {
    std::map<int, std::pair<TagAverages, std::uint64_t>> sums;
    for (const auto& page : sample) {
        auto& [s, n] = sums[page.year()];
        const TagCounts& c = page.analysis.tag_counts;
        s.scripts += c.script;
        s.style_elements += c.style_element;
        s.linked_styles += c.linked_style;
        s.table += c.table;
        s.div += c.div;
        ++n;
    }
    TagStats out;
    TagAverages max;
    for (const auto& [year, sn] : sums) {
        const auto& [s, n] = sn;
        const double d = static_cast<double>(n);
        const TagAverages avg{s.scripts / d, s.style_elements / d, s.linked_styles / d, s.table / d, s.div / d};
        max.scripts = std::max(max.scripts, avg.scripts);
        max.style_elements = std::max(max.style_elements, avg.style_elements);
        max.linked_styles = std::max(max.linked_styles, avg.linked_styles);
        max.table = std::max(max.table, avg.table);
        max.div = std::max(max.div, avg.div);
        out.average[year] = avg;
    }
    for (const auto& [year, a] : out.average) {
        out.normalized[year] = {safe_ratio(a.scripts, max.scripts), safe_ratio(a.style_elements, max.style_elements),
                                safe_ratio(a.linked_styles, max.linked_styles), safe_ratio(a.table, max.table),
                                safe_ratio(a.div, max.div)};
    }
    return out;
}

std::map<int, OutlinkAverages> outlink_stats(std::span<const SampledPage> sample) {
    struct Sums {
        std::uint64_t internal = 0, external = 0, pages = 0;
    };
    std::map<int, Sums> sums;
    for (const auto& page : sample) {
        auto& s = sums[page.year()];
        for (const auto& link : page.analysis.outlinks) ++(link.kind == LinkKind::internal ? s.internal : s.external);
        ++s.pages;
    }
    std::map<int, OutlinkAverages> out;
    for (const auto& [year, s] : sums) {
        const double n = static_cast<double>(s.pages);
        const double internal = static_cast<double>(s.internal) / n;
        const double external = static_cast<double>(s.external) / n;
        // Every link is exactly one of the two kinds.
        out[year] = {internal + external, internal, external};
    }
    return out;
}

StatsReport compute_stats(const Index& index, const Archive& archive, const StatsOptions& options) {
    StatsReport report;
    const auto counts = snapshots_per_year(index);
    const auto sample = sample_refs(index, options.sample_n, options.seed);
    const auto pages = analyze_sample(sample, archive, options.link_policy, options.workers, &report.fetch_errors);
    const auto rates = link_in_archive_rate(pages, index, options.containment);
    const auto tags = tag_stats(pages);
    const auto links = outlink_stats(pages);

    std::map<int, std::uint64_t> sampled;
    for (const auto& p : pages) ++sampled[p.year()];

    for (const auto& [year, count] : counts) {
        StatsRow row;
        row.year = year;
        row.snapshot_count = count;
        if (auto it = sampled.find(year); it != sampled.end()) row.sampled_pages = it->second;
        if (auto it = rates.find(year); it != rates.end()) row.link_rates = it->second;
        if (auto it = tags.average.find(year); it != tags.average.end()) {
            row.tags = it->second;
            row.tags_normalized = tags.normalized.at(year);
        }
        if (auto it = links.find(year); it != links.end()) row.outlinks = it->second;
        report.rows.push_back(row);
    }
    return report;
}

namespace {

struct Column {
    std::string_view name;
    std::optional<std::string> (*get)(const StatsRow&);
};

template <typename T>
std::optional<std::string> opt_real(const std::optional<T>& v, double T::*field) {
    if (!v) return std::nullopt;
    return format_real((*v).*field);
}

std::optional<std::string> opt_real(const std::optional<double>& v) {
    return v ? std::optional<std::string>(format_real(*v)) : std::nullopt;
}

// Fixed metric vocabulary, in output order.
const Column kColumns[] = {
    {"snapshot_count", [](const StatsRow& r) { return std::optional<std::string>(std::to_string(r.snapshot_count)); }},
    {"sampled_pages", [](const StatsRow& r) { return std::optional<std::string>(std::to_string(r.sampled_pages)); }},
    {"internal_link_rate", [](const StatsRow& r) { return opt_real(r.link_rates.internal); }},
    {"external_link_rate", [](const StatsRow& r) { return opt_real(r.link_rates.external); }},
    {"avg_scripts", [](const StatsRow& r) { return opt_real(r.tags, &TagAverages::scripts); }},
    {"avg_style_elements", [](const StatsRow& r) { return opt_real(r.tags, &TagAverages::style_elements); }},
    {"avg_linked_styles", [](const StatsRow& r) { return opt_real(r.tags, &TagAverages::linked_styles); }},
    {"avg_table", [](const StatsRow& r) { return opt_real(r.tags, &TagAverages::table); }},
    {"avg_div", [](const StatsRow& r) { return opt_real(r.tags, &TagAverages::div); }},
    {"norm_scripts", [](const StatsRow& r) { return opt_real(r.tags_normalized, &TagAverages::scripts); }},
    {"norm_style_elements", [](const StatsRow& r) { return opt_real(r.tags_normalized, &TagAverages::style_elements); }},
    {"norm_linked_styles", [](const StatsRow& r) { return opt_real(r.tags_normalized, &TagAverages::linked_styles); }},
    {"norm_table", [](const StatsRow& r) { return opt_real(r.tags_normalized, &TagAverages::table); }},
    {"norm_div", [](const StatsRow& r) { return opt_real(r.tags_normalized, &TagAverages::div); }},
    {"avg_outlinks_total", [](const StatsRow& r) { return opt_real(r.outlinks, &OutlinkAverages::total); }},
    {"avg_outlinks_internal", [](const StatsRow& r) { return opt_real(r.outlinks, &OutlinkAverages::internal); }},
    {"avg_outlinks_external", [](const StatsRow& r) { return opt_real(r.outlinks, &OutlinkAverages::external); }},
};

}  // namespace

void write_stats_long_csv(const StatsReport& report, std::ostream& out) {
    out << "year,metric,value\n";
    for (const auto& row : report.rows)
        for (const auto& col : kColumns)
            if (auto v = col.get(row)) out << row.year << ',' << col.name << ',' << *v << '\n';
}

void write_stats_wide_csv(const StatsReport& report, std::ostream& out) {
    out << "year";
    for (const auto& col : kColumns) out << ',' << col.name;
    out << '\n';
    for (const auto& row : report.rows) {
        out << row.year;
        for (const auto& col : kColumns) out << ',' << col.get(row).value_or("");
        out << '\n';
    }
}

}  // namespace subcollect
