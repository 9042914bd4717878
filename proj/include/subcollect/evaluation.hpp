#pragma once

#include "subcollect/archive.hpp"
#include "subcollect/html.hpp"
#include "subcollect/index.hpp"
#include "subcollect/spec.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace subcollect {

enum class Facet { host, year, mime };
inline constexpr Facet kAllFacets[] = {Facet::host, Facet::year, Facet::mime};

std::string_view facet_name(Facet facet);
std::string facet_value(const IndexEntry& entry, Facet facet);

/// (canonical_url, timestamp14)
using CaptureKey = std::pair<std::string, std::string>;

struct TruthSet {
    std::set<CaptureKey> relevant_refs;
};

inline constexpr std::string_view kTruthHeader = "SUBCOLLECT-TRUTH 1";

TruthSet read_truth(std::istream& in);
TruthSet read_truth_file(const std::filesystem::path& path);
/// Throws ValidationError naming the first pair absent from the index.
void check_truth_against_index(const TruthSet& truth, const Index& index);

// nullopt means "not applicable" (empty denominator), never 0 or 1.
std::optional<double> precision(std::span<const IndexEntry> result, const TruthSet& truth);
std::optional<double> recall(std::span<const IndexEntry> result, const TruthSet& truth);
/// Recall restricted to each "host:year" stratum of the truth set.
std::map<std::string, double> stratum_recall(std::span<const IndexEntry> result, const TruthSet& truth);

struct LinkCompleteness {
    double sum = 0.0;
    std::optional<double> mean;     // nullopt when no member has relevant outlinks
    std::size_t contributing = 0;   // members with at least one relevant outlink
};

/// Decides whether an outlink target counts as relevant.
using OutlinkOracle = std::function<bool(const std::string& target)>;

/// Targets with a capture in the index that passes the spec's metadata
/// scopes; any capture at all when `spec` is null.
OutlinkOracle default_outlink_oracle(const Index& index, const SubCollectionSpec* spec);

/// Per member: retrieved relevant outlinks / relevant outlinks, where a
/// target is retrieved if any capture of it is in the collection. Members
/// without relevant outlinks add nothing and are left out of the mean.
LinkCompleteness link_completeness(std::span<const std::vector<std::string>> member_outlinks,
                                   const std::unordered_set<std::string>& collection_urls,
                                   const OutlinkOracle& relevant);

/// Fetches and analyzes every member to obtain its outlinks.
LinkCompleteness link_completeness(std::span<const IndexEntry> result, const Archive& archive,
                                   const OutlinkOracle& relevant, LinkPolicy policy = {}, unsigned workers = 1);

/// Latest minus earliest crawl time; 0 for fewer than two members.
EpochSeconds temporal_width(std::span<const IndexEntry> result);

/// 1 - JSD (base 2) between the facet distributions of the result and the
/// whole index. nullopt for an empty result.
std::optional<double> representativeness(std::span<const IndexEntry> result, const Index& index, Facet facet);

/// Shannon entropy of the facet distribution over log2(#values); 0 when
/// fewer than two values occur.
double facet_entropy(std::span<const IndexEntry> result, Facet facet);

/// Base-2 Jensen-Shannon divergence of two count distributions.
double jensen_shannon_divergence(const std::map<std::string, double>& p, const std::map<std::string, double>& q);

struct EvaluationReport {
    std::size_t members = 0;
    bool has_truth = false;
    std::optional<double> precision;
    std::optional<double> recall;
    std::map<std::string, double> stratum_recall;
    LinkCompleteness link_completeness;
    EpochSeconds temporal_width_seconds = 0;
    std::map<Facet, std::optional<double>> representativeness;
    std::map<Facet, double> facet_entropy;
    std::uint64_t fetches = 0;
};

struct EvaluateOptions {
    const TruthSet* truth = nullptr;
    const SubCollectionSpec* spec = nullptr;  // scopes the default outlink oracle
    OutlinkOracle oracle;                     // overrides the default when set
    LinkPolicy link_policy;
    unsigned workers = 1;
};

EvaluationReport evaluate(std::span<const IndexEntry> result, const Index& index, const Archive& archive,
                          const EvaluateOptions& options = {});

/// Flat key=value lines; precision/recall keys only with a truth set.
void write_report_kv(const EvaluationReport& report, std::ostream& out);
/// metric,facet,value rows.
void write_report_csv(const EvaluationReport& report, std::ostream& out);

}  // namespace subcollect
