#include "subcollect/evaluation.hpp"

#include "subcollect/error.hpp"
#include "subcollect/format.hpp"
#include "subcollect/parallel.hpp"
#include "subcollect/url.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

namespace subcollect {

namespace {

std::map<std::string, double> distribution(std::span<const IndexEntry> entries, Facet facet) {
    std::map<std::string, double> counts;
    for (const auto& e : entries) counts[facet_value(e, facet)] += 1.0;
    return counts;
}

double kl_to_mixture(const std::map<std::string, double>& p, double p_total, const std::map<std::string, double>& q,
                     double q_total) {
    double d = 0.0;
    for (const auto& [value, count] : p) {
        const double pi = count / p_total;
        if (pi == 0.0) continue;
        const auto it = q.find(value);
        const double qi = it == q.end() ? 0.0 : it->second / q_total;
        d += pi * std::log2(pi / (0.5 * (pi + qi)));
    }
    return d;
}

std::string stratum_label(const CaptureKey& k) {
    return std::string(url_host(k.first)) + ":" + k.second.substr(0, 4);
}

}  // namespace

std::string_view facet_name(Facet facet) {
    switch (facet) {
        case Facet::host: return "host";
        case Facet::year: return "year";
        case Facet::mime: return "mime";
    }
    return "";
}

std::string facet_value(const IndexEntry& entry, Facet facet) {
    switch (facet) {
        case Facet::host: return std::string(url_host(entry.canonical_url));
        case Facet::year: return entry.timestamp14.substr(0, 4);
        case Facet::mime: return entry.mime;
    }
    return {};
}

TruthSet read_truth(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kTruthHeader)
        throw ValidationError("truth: missing '" + std::string(kTruthHeader) + "' header");
    TruthSet truth;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::vector<std::string> f{std::istream_iterator<std::string>(fields), std::istream_iterator<std::string>()};
        if (f.size() != 2 || !is_valid_timestamp14(f[1]))
            throw ValidationError("truth line " + std::to_string(line_no) + ": expected 'canonical_url timestamp14'");
        std::string url;
        try {
            url = canonicalize_url(f[0]);
        } catch (const UrlError& e) {
            throw ValidationError("truth line " + std::to_string(line_no) + ": " + e.what());
        }
        truth.relevant_refs.emplace(std::move(url), f[1]);
    }
    return truth;
}

TruthSet read_truth_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open truth file " + path.string());
    return read_truth(in);
}

void check_truth_against_index(const TruthSet& truth, const Index& index) {
    for (const auto& [url, ts] : truth.relevant_refs) {
        const auto caps = index.captures_of(url);
        if (std::none_of(caps.begin(), caps.end(), [&](const IndexEntry& e) { return e.timestamp14 == ts; }))
            throw ValidationError("truth pair not in index: " + url + " " + ts);
    }
}

std::optional<double> precision(std::span<const IndexEntry> result, const TruthSet& truth) {
    if (result.empty()) return std::nullopt;
    std::size_t hits = 0;
    for (const auto& e : result) hits += truth.relevant_refs.contains({e.canonical_url, e.timestamp14});
    return static_cast<double>(hits) / static_cast<double>(result.size());
}

std::optional<double> recall(std::span<const IndexEntry> result, const TruthSet& truth) {
    if (truth.relevant_refs.empty()) return std::nullopt;
    std::set<CaptureKey> retrieved;
    for (const auto& e : result)
        if (truth.relevant_refs.contains({e.canonical_url, e.timestamp14})) retrieved.emplace(e.canonical_url, e.timestamp14);
    return static_cast<double>(retrieved.size()) / static_cast<double>(truth.relevant_refs.size());
}

std::map<std::string, double> stratum_recall(std::span<const IndexEntry> result, const TruthSet& truth) {
    std::set<CaptureKey> in_result;
    for (const auto& e : result) in_result.emplace(e.canonical_url, e.timestamp14);
    std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // label -> (hits, total)
    for (const auto& key : truth.relevant_refs) {
        auto& [hits, total] = tally[stratum_label(key)];
        ++total;
        hits += in_result.contains(key);
    }
    std::map<std::string, double> out;
    for (const auto& [label, t] : tally) out[label] = static_cast<double>(t.first) / static_cast<double>(t.second);
    return out;
}

OutlinkOracle default_outlink_oracle(const Index& index, const SubCollectionSpec* spec) {
    return [&index, spec](const std::string& target) {
        const auto caps = index.captures_of(target);
        if (!spec) return !caps.empty();
        return std::any_of(caps.begin(), caps.end(), [&](const IndexEntry& e) { return in_scope_metadata(*spec, e); });
    };
}

LinkCompleteness link_completeness(std::span<const std::vector<std::string>> member_outlinks,
                                   const std::unordered_set<std::string>& collection_urls,
                                   const OutlinkOracle& relevant) {
    LinkCompleteness lc;
    for (const auto& outlinks : member_outlinks) {
        std::set<std::string> targets(outlinks.begin(), outlinks.end());
        std::size_t rel = 0;
        std::size_t got = 0;
        for (const auto& t : targets) {
            if (!relevant(t)) continue;
            ++rel;
            got += collection_urls.contains(t);
        }
        if (rel == 0) continue;
        lc.sum += static_cast<double>(got) / static_cast<double>(rel);
        ++lc.contributing;
    }
    if (lc.contributing > 0) lc.mean = lc.sum / static_cast<double>(lc.contributing);
    return lc;
}

LinkCompleteness link_completeness(std::span<const IndexEntry> result, const Archive& archive,
                                   const OutlinkOracle& relevant, LinkPolicy policy, unsigned workers) {
    std::vector<std::vector<std::string>> outlinks(result.size());
    parallel_for(result.size(), workers, [&](std::size_t i) {
        const PageAnalysis a = analyze_snapshot(archive.fetch(result[i]), policy);
        for (const auto& link : a.outlinks) outlinks[i].push_back(link.target);
    });
    std::unordered_set<std::string> urls;
    for (const auto& e : result) urls.insert(e.canonical_url);
    return link_completeness(outlinks, urls, relevant);
}

EpochSeconds temporal_width(std::span<const IndexEntry> result) {
    if (result.empty()) return 0;
    const auto [lo, hi] = std::minmax_element(result.begin(), result.end(), [](const auto& a, const auto& b) {
        return a.timestamp14 < b.timestamp14;
    });
    return hi->crawl_time() - lo->crawl_time();
}

double jensen_shannon_divergence(const std::map<std::string, double>& p, const std::map<std::string, double>& q) {
    double p_total = 0.0, q_total = 0.0;
    for (const auto& [k, v] : p) p_total += v;
    for (const auto& [k, v] : q) q_total += v;
    if (p_total == 0.0 || q_total == 0.0) return 1.0;
    const double jsd = 0.5 * kl_to_mixture(p, p_total, q, q_total) + 0.5 * kl_to_mixture(q, q_total, p, p_total);
    return std::clamp(jsd, 0.0, 1.0);
}

std::optional<double> representativeness(std::span<const IndexEntry> result, const Index& index, Facet facet) {
    if (result.empty()) return std::nullopt;
    return 1.0 - jensen_shannon_divergence(distribution(result, facet), distribution(index.entries(), facet));
}

double facet_entropy(std::span<const IndexEntry> result, Facet facet) {
    const auto dist = distribution(result, facet);
    if (dist.size() < 2) return 0.0;
    double h = 0.0;
    const auto n = static_cast<double>(result.size());
    for (const auto& [value, count] : dist) {
        const double p = count / n;
        h -= p * std::log2(p);
    }
    return std::clamp(h / std::log2(static_cast<double>(dist.size())), 0.0, 1.0);
}

EvaluationReport evaluate(std::span<const IndexEntry> result, const Index& index, const Archive& archive,
                          const EvaluateOptions& options) {
    const AccessCounter before = archive.counter();
    EvaluationReport r;
    r.members = result.size();
    if (options.truth) {
        r.has_truth = true;
        r.precision = precision(result, *options.truth);
        r.recall = recall(result, *options.truth);
        r.stratum_recall = stratum_recall(result, *options.truth);
    }
    const OutlinkOracle oracle = options.oracle ? options.oracle : default_outlink_oracle(index, options.spec);
    r.link_completeness = link_completeness(result, archive, oracle, options.link_policy, options.workers);
    r.temporal_width_seconds = temporal_width(result);
    for (const Facet f : kAllFacets) {
        r.representativeness[f] = representativeness(result, index, f);
        r.facet_entropy[f] = facet_entropy(result, f);
    }
    r.fetches = archive.counter().fetches - before.fetches;
    return r;
}

namespace {

std::string value_or_na(const std::optional<double>& v) { return v ? format_real(*v) : "n/a"; }

}  // namespace

void write_report_kv(const EvaluationReport& r, std::ostream& out) {
    out << "members=" << r.members << '\n';
    if (r.has_truth) {
        out << "precision=" << value_or_na(r.precision) << '\n';
        out << "recall=" << value_or_na(r.recall) << '\n';
        for (const auto& [label, v] : r.stratum_recall) out << "recall.stratum." << label << '=' << format_real(v) << '\n';
    }
    out << "lc_sum=" << format_real(r.link_completeness.sum) << '\n';
    out << "lc_mean=" << value_or_na(r.link_completeness.mean) << '\n';
    out << "lc_contributing=" << r.link_completeness.contributing << '\n';
    out << "temporal_width_seconds=" << r.temporal_width_seconds << '\n';
    for (const auto& [f, v] : r.representativeness) out << "representativeness." << facet_name(f) << '=' << value_or_na(v) << '\n';
    for (const auto& [f, v] : r.facet_entropy) out << "facet_entropy." << facet_name(f) << '=' << format_real(v) << '\n';
    out << "fetches=" << r.fetches << '\n';
}

void write_report_csv(const EvaluationReport& r, std::ostream& out) {
    out << "metric,facet,value\n";
    out << "members,," << r.members << '\n';
    if (r.has_truth) {
        out << "precision,," << value_or_na(r.precision) << '\n';
        out << "recall,," << value_or_na(r.recall) << '\n';
        for (const auto& [label, v] : r.stratum_recall) out << "recall_stratum," << label << ',' << format_real(v) << '\n';
    }
    out << "lc_sum,," << format_real(r.link_completeness.sum) << '\n';
    out << "lc_mean,," << value_or_na(r.link_completeness.mean) << '\n';
    out << "temporal_width_seconds,," << r.temporal_width_seconds << '\n';
    for (const auto& [f, v] : r.representativeness) out << "representativeness," << facet_name(f) << ',' << value_or_na(v) << '\n';
    for (const auto& [f, v] : r.facet_entropy) out << "facet_entropy," << facet_name(f) << ',' << format_real(v) << '\n';
    out << "fetches,," << r.fetches << '\n';
}

}  // namespace subcollect
