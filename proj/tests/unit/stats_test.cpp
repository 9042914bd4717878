#include "fixtures.hpp"

#include "subcollect/archive.hpp"
#include "subcollect/error.hpp"
#include "subcollect/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace subcollect;

namespace {

SampledPage page(const std::string& url, const std::string& ts, std::vector<LinkRecord> links, TagCounts tags = {}) {
    SampledPage p;
    p.entry = fixtures::entry(url, ts);
    p.analysis.outlinks = std::move(links);
    p.analysis.tag_counts = tags;
    return p;
}

LinkRecord internal(const std::string& t) { return {t, LinkKind::internal}; }
LinkRecord external(const std::string& t) { return {t, LinkKind::external}; }

}  // namespace

TEST_CASE("snapshots per year") {
    const Index index({fixtures::entry("http://a.de/1", "19990101000000"), fixtures::entry("http://a.de/2", "19990601000000"),
                       fixtures::entry("http://a.de/1", "20000101000000"), fixtures::entry("http://b.de/", "20000101000000"),
                       fixtures::entry("http://c.de/", "20001231235959", "image/gif")});
    const auto h = snapshots_per_year(index);
    CHECK(h == std::map<int, std::uint64_t>{{1999, 2}, {2000, 3}});
    CHECK(snapshots_per_year(Index{}).empty());
}

TEST_CASE("sample_refs returns HTML entries deterministically") {
    std::vector<IndexEntry> entries;
    for (int i = 0; i < 50; ++i)
        entries.push_back(fixtures::entry("http://a.de/" + std::to_string(i), "20000101000000", i % 5 ? "text/html" : "image/png"));
    const Index index(entries);
    const auto all = sample_refs(index, 1000, 3);
    CHECK(all.size() == 40);
    for (const auto& e : all) CHECK(e.mime == "text/html");
    CHECK(sample_refs(index, 10, 7) == sample_refs(index, 10, 7));
    CHECK(sample_refs(index, 10, 7).size() == 10);
    CHECK(sample_refs(index, 10, 7) != sample_refs(index, 10, 8));
    const auto s = sample_refs(index, 10, 7);
    CHECK(std::is_sorted(s.begin(), s.end(), entry_less));
    CHECK_THROWS_AS(sample_refs(index, 0, 1), ValidationError);
}

TEST_CASE("sample_refs is uniform") {
    // 10^4 entries, 10^3 seeds, n = 1000: each entry is included with p = 0.1.
    constexpr int kEntries = 10000, kSeeds = 1000, kN = 1000;
    std::vector<IndexEntry> entries;
    for (int i = 0; i < kEntries; ++i) entries.push_back(fixtures::entry("http://a.de/" + std::to_string(i), "20000101000000"));
    const Index index(entries);
    std::map<std::string, int> hits;
    for (int seed = 0; seed < kSeeds; ++seed)
        for (const auto& e : sample_refs(index, kN, static_cast<std::uint64_t>(seed))) ++hits[e.canonical_url];

    const double p = static_cast<double>(kN) / kEntries;
    const double mean = kSeeds * p;
    const double sigma = std::sqrt(kSeeds * p * (1 - p));
    int beyond3 = 0;
    double chi2 = 0;
    double worst = 0;
    for (const auto& e : index.entries()) {
        const double d = (hits[e.canonical_url] - mean) / sigma;
        beyond3 += std::abs(d) > 3;
        worst = std::max(worst, std::abs(d));
        chi2 += d * d;
    }
    // Under a binomial model about 0.27 % of entries land outside 3 sigma.
    CHECK(beyond3 <= kEntries / 100);
    CHECK(worst < 5.0);
    CHECK(std::abs(chi2 - kEntries) < 5 * std::sqrt(2.0 * kEntries));
}

TEST_CASE("link containment rates") {
    const Index index({fixtures::entry("http://a.de/in", "20010101000000"), fixtures::entry("http://b.de/", "19990101000000")});
    const std::vector<SampledPage> sample = {
        page("http://a.de/", "20000101000000", {internal("http://a.de/in"), internal("http://a.de/out")}),
        page("http://a.de/2", "20000101000000", {internal("http://a.de/in"), external("http://b.de/")}),
        page("http://a.de/3", "20000101000000", {}),
        page("http://a.de/4", "20010101000000", {external("http://c.de/")})};
    const auto rates = link_in_archive_rate(sample, index);
    CHECK(*rates.at(2000).internal == doctest::Approx(0.75));
    CHECK(*rates.at(2000).external == 1.0);
    CHECK_FALSE(rates.at(2001).internal.has_value());
    CHECK(*rates.at(2001).external == 0.0);

    const auto micro = link_in_archive_rate(sample, index, {false, true});
    CHECK(*micro.at(2000).internal == doctest::Approx(2.0 / 3.0));

    const auto same_year = link_in_archive_rate(sample, index, {true, false});
    CHECK(*same_year.at(2000).internal == 0.0);
    CHECK(*same_year.at(2000).external == 0.0);
}

TEST_CASE("all-indexed targets give rate 1") {
    const Index index({fixtures::entry("http://a.de/x", "20000101000000"), fixtures::entry("http://b.de/y", "20000101000000")});
    const std::vector<SampledPage> sample = {page("http://a.de/", "20000101000000", {internal("http://a.de/x"), external("http://b.de/y")})};
    const auto r = link_in_archive_rate(sample, index);
    CHECK(*r.at(2000).internal == 1.0);
    CHECK(*r.at(2000).external == 1.0);
}

TEST_CASE("tag averages and normalized series") {
    TagCounts two_scripts;
    two_scripts.script = 2;
    const std::vector<SampledPage> flat = {page("http://a.de/", "20000101000000", {}, two_scripts),
                                           page("http://b.de/", "20050101000000", {}, two_scripts)};
    const auto s = tag_stats(flat);
    CHECK(s.average.at(2000).scripts == 2.0);
    CHECK(s.normalized.at(2000).scripts == 1.0);
    CHECK(s.normalized.at(2005).scripts == 1.0);
    CHECK(s.normalized.at(2000).div == 0.0);

    TagCounts one_div, four_div, seven_div;
    one_div.div = 1;
    four_div.div = 4;
    seven_div.div = 7;
    const std::vector<SampledPage> growing = {page("http://a.de/", "20000101000000", {}, one_div),
                                              page("http://a.de/", "20050101000000", {}, one_div),
                                              page("http://b.de/", "20050101000000", {}, seven_div)};
    const auto g = tag_stats(growing);
    CHECK(g.average.at(2005).div == 4.0);
    CHECK(g.normalized.at(2000).div == 0.25);
    CHECK(g.normalized.at(2005).div == 1.0);
}

TEST_CASE("outlink averages") {
    const std::vector<SampledPage> sample = {
        page("http://a.de/", "20000101000000", {internal("http://a.de/1"), external("http://b.de/")}),
        page("http://a.de/2", "20000101000000", {internal("http://a.de/1"), internal("http://a.de/3"), external("http://c.de/"), external("http://d.de/")}),
        page("http://a.de/", "20010101000000", {internal("http://a.de/1"), internal("http://a.de/2"), external("http://b.de/"), external("http://c.de/"), external("http://d.de/")})};
    const auto o = outlink_stats(sample);
    CHECK(o.at(2000).total == 3.0);
    CHECK(o.at(2001).total == 5.0);
    CHECK(o.at(2001).internal == 2.0);
    CHECK(o.at(2001).external == 3.0);
}

TEST_CASE("outlink identity on random pages") {
    std::mt19937_64 rng(31);
    std::vector<SampledPage> sample;
    for (int i = 0; i < 300; ++i) {
        std::vector<LinkRecord> links;
        for (int j = 0, n = static_cast<int>(rng() % 12); j < n; ++j)
            links.push_back(rng() % 3 ? internal("http://a.de/") : external("http://b.de/"));
        sample.push_back(page("http://a.de/" + std::to_string(i), std::to_string(1996 + rng() % 10) + "0101000000", links));
    }
    const auto o = outlink_stats(sample);
    std::map<int, std::pair<double, int>> totals;
    for (const auto& p : sample) {
        totals[p.year()].first += static_cast<double>(p.analysis.outlinks.size());
        totals[p.year()].second++;
    }
    for (const auto& [year, avg] : o) {
        CHECK(avg.total == avg.internal + avg.external);
        CHECK(avg.total == doctest::Approx(totals[year].first / totals[year].second).epsilon(1e-12));
    }
}

TEST_CASE("compute_stats on an archive fixture") {
    fixtures::TempDir dir;
    const auto entries = fixtures::write_warc(
        dir.path(), "f.warc",
        {{"http://a.de/", "20000101000000", "<script></script><script></script><div><a href=/x>x</a><a href=http://b.de/>b</a></div>"},
         {"http://a.de/x", "20000601000000", "<table></table><a href=/y>y</a>"},
         {"http://b.de/", "20050101000000", "<div></div><div></div><a href=http://a.de/>a</a>"},
         {"http://b.de/logo", "20050101000000", "GIF89a", "image/gif"}});
    const Index index(entries);
    const Archive archive(dir.path());
    StatsOptions options;
    options.sample_n = 100;
    const StatsReport report = compute_stats(index, archive, options);
    CHECK(archive.counter().fetches == 3);
    REQUIRE(report.rows.size() == 2);
    const StatsRow& y2000 = report.rows[0];
    CHECK(y2000.year == 2000);
    CHECK(y2000.snapshot_count == 2);
    CHECK(y2000.sampled_pages == 2);
    // a.de/: internal {x: indexed} -> 1, external {b.de: indexed} -> 1; a.de/x: internal {y} -> 0.
    CHECK(*y2000.link_rates.internal == 0.5);
    CHECK(*y2000.link_rates.external == 1.0);
    CHECK(y2000.tags->scripts == 1.0);
    CHECK(y2000.tags->table == 0.5);
    CHECK(y2000.tags->div == 0.5);
    CHECK(y2000.tags_normalized->div == 0.25);
    CHECK(y2000.outlinks->total == 1.5);
    const StatsRow& y2005 = report.rows[1];
    CHECK(y2005.snapshot_count == 2);
    CHECK(y2005.sampled_pages == 1);
    CHECK(y2005.tags->div == 2.0);
    CHECK(y2005.tags_normalized->div == 1.0);
    CHECK(y2005.tags_normalized->scripts == 0.0);
    CHECK_FALSE(y2005.link_rates.internal.has_value());

    std::ostringstream long_csv, wide_csv;
    write_stats_long_csv(report, long_csv);
    write_stats_wide_csv(report, wide_csv);
    CHECK(long_csv.str().find("2000,avg_table,0.5\n") != std::string::npos);
    CHECK(long_csv.str().find("2005,internal_link_rate") == std::string::npos);
    const std::string wide = wide_csv.str();
    CHECK(wide.rfind("year,snapshot_count,sampled_pages,internal_link_rate,external_link_rate,avg_scripts", 0) == 0);
    CHECK(std::count(wide.begin(), wide.end(), '\n') == 3);
}
