#include "subcollect/extraction.hpp"

#include "subcollect/error.hpp"
#include "subcollect/parallel.hpp"
#include "subcollect/random.hpp"
#include "subcollect/relevance.hpp"
#include "subcollect/url.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace subcollect {

namespace {

std::vector<std::string> distinct_targets(const PageAnalysis& analysis) {
    std::vector<std::string> out;
    std::unordered_set<std::string_view> seen;
    for (const auto& link : analysis.outlinks)
        if (seen.insert(link.target).second) out.push_back(link.target);
    return out;
}

using Stratum = std::pair<std::string, int>;

Stratum stratum_of(const IndexEntry& e) {
    return {std::string(url_host(e.canonical_url)), timestamp_year(e.timestamp14)};
}

std::string capture_key(const IndexEntry& e) { return e.canonical_url + ' ' + e.timestamp14 + ' ' + e.digest; }

}  // namespace

std::vector<IndexEntry> index_prefilter(const Index& index, const SubCollectionSpec& spec) {
    std::vector<IndexEntry> out;
    if (spec.url_scope) {
        std::set<std::string> urls(spec.url_scope->begin(), spec.url_scope->end());
        for (const auto& url : urls)
            for (const auto& e : index.captures_of(url))
                if (in_scope_metadata(spec, e)) out.push_back(e);
        return out;
    }
    for (const auto& e : index.entries())
        if (in_scope_metadata(spec, e)) out.push_back(e);
    return out;
}

ScanResult scan_extract(const Archive& archive, const Index& index, const SubCollectionSpec& spec,
                        const ExtractOptions& options) {
    const std::vector<IndexEntry> candidates = index_prefilter(index, spec);
    const RelevanceFilter filter(spec);
    const bool keep_links = spec.link_mode == LinkMode::connected;

    struct Slot {
        bool kept = false;
        bool error = false;
        std::vector<std::string> outlinks;
    };
    std::vector<Slot> slots(candidates.size());
    parallel_for(candidates.size(), options.workers, [&](std::size_t i) {
        Snapshot snap;
        try {
            snap = archive.fetch(candidates[i]);
        } catch (const CorruptionError&) {
            slots[i].error = true;
            return;
        }
        const PageAnalysis analysis = analyze_snapshot(snap, options.link_policy);
        if (!filter.evaluate(analysis).relevant) return;
        slots[i].kept = true;
        if (keep_links) slots[i].outlinks = distinct_targets(analysis);
    });

    ScanResult result;
    result.candidates_scanned = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (slots[i].error) ++result.fetch_errors;
        if (slots[i].kept) result.kept.push_back({candidates[i], std::move(slots[i].outlinks)});
    }
    return result;
}

WindowSelection min_window_select(std::span<const std::vector<EpochSeconds>> lists) {
    WindowSelection best;
    if (lists.empty()) return best;

    // (value, list, position) min-heap; `hi` tracks the largest current head.
    using Head = std::tuple<EpochSeconds, std::size_t, std::size_t>;
    std::priority_queue<Head, std::vector<Head>, std::greater<>> heap;
    EpochSeconds hi = lists[0].front();
    for (std::size_t k = 0; k < lists.size(); ++k) {
        heap.emplace(lists[k].front(), k, 0);
        hi = std::max(hi, lists[k].front());
    }
    bool found = false;
    while (true) {
        const auto [lo, k, pos] = heap.top();
        if (!found || hi - lo < best.end - best.start) {
            best.start = lo;
            best.end = hi;
            found = true;
        }
        if (pos + 1 == lists[k].size()) break;
        heap.pop();
        const EpochSeconds next = lists[k][pos + 1];
        heap.emplace(next, k, pos + 1);
        hi = std::max(hi, next);
    }

    best.chosen.reserve(lists.size());
    for (const auto& list : lists) best.chosen.push_back(*std::lower_bound(list.begin(), list.end(), best.start));
    return best;
}

std::map<std::string, EpochSeconds> min_window_select(const std::map<std::string, std::vector<EpochSeconds>>& captures) {
    std::vector<std::vector<EpochSeconds>> lists;
    lists.reserve(captures.size());
    for (const auto& [url, times] : captures) lists.push_back(times);
    const WindowSelection sel = min_window_select(lists);
    std::map<std::string, EpochSeconds> out;
    std::size_t i = 0;
    for (const auto& [url, times] : captures) out.emplace(url, sel.chosen[i++]);
    return out;
}

std::vector<ScannedCandidate> select_versions(std::vector<ScannedCandidate> candidates, VersionMode mode) {
    if (mode == VersionMode::timeline || candidates.empty()) return candidates;

    // Candidates arrive in index order, so each URL's captures are contiguous
    // and ascending.
    std::vector<std::pair<std::size_t, std::size_t>> groups;  // [begin, end) per URL
    std::vector<std::vector<EpochSeconds>> lists;
    for (std::size_t i = 0; i < candidates.size();) {
        std::size_t j = i;
        std::vector<EpochSeconds> times;
        while (j < candidates.size() && candidates[j].entry.canonical_url == candidates[i].entry.canonical_url)
            times.push_back(candidates[j++].entry.crawl_time());
        groups.emplace_back(i, j);
        lists.push_back(std::move(times));
        i = j;
    }
    const WindowSelection sel = min_window_select(lists);

    std::vector<ScannedCandidate> out;
    out.reserve(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto [b, e] = groups[g];
        for (std::size_t i = b; i < e; ++i) {
            if (lists[g][i - b] == sel.chosen[g]) {
                out.push_back(std::move(candidates[i]));
                break;
            }
        }
    }
    return out;
}

ClosureResult connect_closure(std::vector<ScannedCandidate> members, const Archive& archive, const Index& index,
                              const SubCollectionSpec& spec, const ExtractOptions& options) {
    const RelevanceFilter filter(spec);
    const bool check_relevance = spec.closure_policy == ClosurePolicy::relevant_links && filter.has_content_scopes();

    struct Working {
        IndexEntry entry;
        Origin origin;
        std::optional<std::vector<std::string>> outlinks;  // unknown until fetched
    };
    std::vector<Working> work;
    work.reserve(members.size());
    std::unordered_set<std::string> present;
    for (auto& m : members) {
        present.insert(m.entry.canonical_url);
        work.push_back({std::move(m.entry), Origin::scan, std::move(m.outlinks)});
    }

    ClosureResult result;
    // Capture key -> (relevant, outlinks); nullopt marks an unreadable record.
    std::unordered_map<std::string, std::optional<std::pair<bool, std::vector<std::string>>>> analyzed;
    auto analyze = [&](const IndexEntry& e) -> const std::optional<std::pair<bool, std::vector<std::string>>>& {
        const std::string key = capture_key(e);
        if (auto it = analyzed.find(key); it != analyzed.end()) return it->second;
        std::optional<std::pair<bool, std::vector<std::string>>> value;
        try {
            const PageAnalysis a = analyze_snapshot(archive.fetch(e), options.link_policy);
            value.emplace(filter.evaluate(a).relevant, distinct_targets(a));
        } catch (const CorruptionError&) {
            ++result.fetch_errors;
        }
        return analyzed.emplace(key, std::move(value)).first->second;
    };

    std::vector<std::size_t> frontier(work.size());
    for (std::size_t i = 0; i < work.size(); ++i) frontier[i] = i;
    std::uint64_t depth = 0;
    while (!frontier.empty() && (!spec.closure_max_depth || depth < *spec.closure_max_depth)) {
        std::vector<std::size_t> next;
        for (const std::size_t idx : frontier) {
            if (!work[idx].outlinks) {
                const auto& a = analyze(work[idx].entry);
                work[idx].outlinks = a ? a->second : std::vector<std::string>{};
            }
            const EpochSeconds when = work[idx].entry.crawl_time();
            const std::vector<std::string> targets = *work[idx].outlinks;
            for (const auto& target : targets) {
                if (present.contains(target)) continue;
                auto capture = index.nearest_capture(target, when);
                if (!capture) continue;
                std::optional<std::vector<std::string>> links;
                if (check_relevance) {
                    const auto& a = analyze(*capture);
                    if (!a || !a->first) continue;
                    links = a->second;
                }
                present.insert(target);
                work.push_back({std::move(*capture), Origin::closure, std::move(links)});
                next.push_back(work.size() - 1);
                ++result.added;
            }
        }
        frontier = std::move(next);
        ++depth;
    }

    result.members.reserve(work.size());
    for (auto& w : work) result.members.push_back({std::move(w.entry), w.origin});
    return result;
}

std::vector<Member> enforce_size(std::vector<Member> members, std::uint64_t size, const Index& archive_facets,
                                 std::uint64_t seed, bool peel_closure_first) {
    if (size >= members.size()) return members;

    if (peel_closure_first) {
        // Members are in addition order, so the newest closure additions sit
        // at the back and are leaves of the closure tree.
        for (std::size_t i = members.size(); i-- > 0 && members.size() > size;)
            if (members[i].origin == Origin::closure) members.erase(members.begin() + static_cast<std::ptrdiff_t>(i));
        if (members.size() <= size) return members;
    }

    std::sort(members.begin(), members.end(),
              [](const Member& a, const Member& b) { return entry_less(a.entry, b.entry); });

    std::map<Stratum, std::uint64_t> archive_counts;
    for (const auto& e : archive_facets.entries()) ++archive_counts[stratum_of(e)];
    std::map<Stratum, std::vector<std::size_t>> by_stratum;
    for (std::size_t i = 0; i < members.size(); ++i) {
        auto s = stratum_of(members[i].entry);
        archive_counts.try_emplace(s, 0);
        by_stratum[std::move(s)].push_back(i);
    }
    std::uint64_t archive_total = 0;
    for (const auto& [s, n] : archive_counts) archive_total += n;

    // Largest-remainder apportionment of `size` over the archive strata.
    std::map<Stratum, std::uint64_t> quota;
    std::vector<std::tuple<unsigned __int128, Stratum>> remainders;
    std::uint64_t assigned = 0;
    for (const auto& [s, n] : archive_counts) {
        const unsigned __int128 scaled = static_cast<unsigned __int128>(size) * n;
        const auto q = archive_total ? static_cast<std::uint64_t>(scaled / archive_total) : 0;
        quota[s] = q;
        assigned += q;
        remainders.emplace_back(archive_total ? scaled % archive_total : 0, s);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
    for (std::size_t i = 0; assigned < size && i < remainders.size(); ++i, ++assigned) ++quota[std::get<1>(remainders[i])];

    // Cap by availability, then refill the shortfall.
    std::map<Stratum, std::uint64_t> take;
    std::uint64_t taken = 0;
    for (const auto& [s, idx] : by_stratum) {
        take[s] = std::min<std::uint64_t>(quota[s], idx.size());
        taken += take[s];
    }
    using Spare = std::pair<std::uint64_t, Stratum>;
    auto spare_less = [](const Spare& a, const Spare& b) {
        return a.first != b.first ? a.first < b.first : a.second > b.second;
    };
    std::priority_queue<Spare, std::vector<Spare>, decltype(spare_less)> spare(spare_less);
    for (const auto& [s, idx] : by_stratum)
        if (idx.size() > take[s]) spare.emplace(idx.size() - take[s], s);
    while (taken < size && !spare.empty()) {
        auto [left, s] = spare.top();
        spare.pop();
        ++take[s];
        ++taken;
        if (left > 1) spare.emplace(left - 1, s);
    }

    Rng rng(seed);
    std::vector<Member> out;
    out.reserve(size);
    for (auto& [s, idx] : by_stratum) {
        const std::uint64_t k = take[s];
        // Partial Fisher-Yates: the first k slots become a uniform sample.
        for (std::uint64_t i = 0; i < k; ++i) {
            const std::uint64_t j = i + rng.below(idx.size() - i);
            std::swap(idx[i], idx[j]);
        }
        for (std::uint64_t i = 0; i < k; ++i) out.push_back(std::move(members[idx[i]]));
    }
    std::sort(out.begin(), out.end(), [](const Member& a, const Member& b) { return entry_less(a.entry, b.entry); });
    return out;
}

SubCollection extract(const Archive& archive, const Index& index, const SubCollectionSpec& spec,
                      const ExtractOptions& options) {
    validate_spec(spec);
    const AccessCounter before = archive.counter();

    SubCollection result;
    result.spec_digest = spec_digest(spec);
    result.link_mode = spec.link_mode;
    result.version_mode = spec.version_mode;

    ScanResult scan = scan_extract(archive, index, spec, options);
    result.counters.candidates_scanned = scan.candidates_scanned;
    result.counters.fetch_errors = scan.fetch_errors;

    std::vector<ScannedCandidate> selected = select_versions(std::move(scan.kept), spec.version_mode);

    std::vector<Member> members;
    if (spec.link_mode == LinkMode::connected) {
        ClosureResult closure = connect_closure(std::move(selected), archive, index, spec, options);
        result.counters.closure_added = closure.added;
        result.counters.fetch_errors += closure.fetch_errors;
        members = std::move(closure.members);
    } else {
        members.reserve(selected.size());
        for (auto& c : selected) members.push_back({std::move(c.entry), Origin::scan});
    }

    if (spec.size_scope && *spec.size_scope < members.size()) {
        const std::size_t before_size = members.size();
        members = enforce_size(std::move(members), *spec.size_scope, index, spec.seed,
                               spec.link_mode == LinkMode::connected);
        result.counters.size_removed = before_size - members.size();
    }

    std::sort(members.begin(), members.end(), [](const Member& a, const Member& b) { return entry_less(a.entry, b.entry); });
    result.members = std::move(members);
    result.counters.fetches = archive.counter().fetches - before.fetches;
    return result;
}

}  // namespace subcollect
