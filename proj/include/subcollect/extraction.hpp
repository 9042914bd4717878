#pragma once

#include "subcollect/archive.hpp"
#include "subcollect/html.hpp"
#include "subcollect/index.hpp"
#include "subcollect/spec.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace subcollect {

enum class Origin { scan, closure };

struct Member {
    IndexEntry entry;
    Origin origin = Origin::scan;
    bool operator==(const Member&) const = default;
};

struct ExtractionCounters {
    std::uint64_t candidates_scanned = 0;
    std::uint64_t fetches = 0;
    std::uint64_t closure_added = 0;
    std::uint64_t fetch_errors = 0;
    std::uint64_t size_removed = 0;
};

struct SubCollection {
    std::vector<Member> members;  // sorted by entry_less
    std::string spec_digest;
    ExtractionCounters counters;
    LinkMode link_mode = LinkMode::disconnected;
    VersionMode version_mode = VersionMode::timeline;
};

struct ExtractOptions {
    unsigned workers = 1;
    LinkPolicy link_policy;
};

/// Entries passing the metadata scopes, in index order, without touching the
/// archive. A URL scope is answered by direct index lookups.
std::vector<IndexEntry> index_prefilter(const Index& index, const SubCollectionSpec& spec);

struct ScannedCandidate {
    IndexEntry entry;
    std::vector<std::string> outlinks;  // distinct canonical targets, first-seen order
};

struct ScanResult {
    std::vector<ScannedCandidate> kept;  // index order
    std::uint64_t candidates_scanned = 0;
    std::uint64_t fetch_errors = 0;
};

/// Fetches every prefiltered candidate exactly once and keeps those passing
/// the content scopes. Corrupt records are skipped and tallied; I/O errors
/// propagate. Output does not depend on `options.workers`.
ScanResult scan_extract(const Archive& archive, const Index& index, const SubCollectionSpec& spec,
                        const ExtractOptions& options = {});

struct WindowSelection {
    EpochSeconds start = 0;
    EpochSeconds end = 0;
    std::vector<EpochSeconds> chosen;  // one per input list, same order

    EpochSeconds width() const { return end - start; }
};

/// Smallest closed window holding at least one value of every (nonempty,
/// ascending) list; the earliest such window on ties. Each list contributes
/// its earliest value inside the window. O(N log k) via a k-way merge.
WindowSelection min_window_select(std::span<const std::vector<EpochSeconds>> lists);

/// Keyed variant: one chosen time per URL.
std::map<std::string, EpochSeconds> min_window_select(const std::map<std::string, std::vector<EpochSeconds>>& captures);

/// Timeline keeps everything; snapshot keeps one capture per URL, chosen
/// jointly by min_window_select. Input and output in index order.
std::vector<ScannedCandidate> select_versions(std::vector<ScannedCandidate> candidates, VersionMode mode);

struct ClosureResult {
    std::vector<Member> members;  // inputs first, then additions in the order they were made
    std::uint64_t added = 0;
    std::uint64_t fetch_errors = 0;
};

/// Adds, for each member's in-archive outlink target not yet represented,
/// the target capture nearest in time to the linking member (earlier on
/// ties). Repeats on the additions until fixpoint or `closure_max_depth`.
ClosureResult connect_closure(std::vector<ScannedCandidate> members, const Archive& archive, const Index& index,
                              const SubCollectionSpec& spec, const ExtractOptions& options = {});

/// Seeded stratified sample of exactly `size` members over (host, crawl year)
/// strata, with quotas proportional to the strata of `archive_facets`
/// (largest remainder; shortfalls refilled from the strata with the most
/// members left). When `peel_closure_first` is set, closure additions are
/// dropped newest-first before sampling. Identity if size >= members.size().
std::vector<Member> enforce_size(std::vector<Member> members, std::uint64_t size, const Index& archive_facets,
                                 std::uint64_t seed, bool peel_closure_first = false);

/// prefilter -> scan -> versions -> closure -> size.
SubCollection extract(const Archive& archive, const Index& index, const SubCollectionSpec& spec,
                      const ExtractOptions& options = {});

}  // namespace subcollect
