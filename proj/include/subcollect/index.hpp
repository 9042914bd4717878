#pragma once

#include "subcollect/timestamp.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace subcollect {

/// One archived capture: where it lives and what it is.
struct IndexEntry {
    std::string canonical_url;
    std::string timestamp14;
    std::string original_url;
    std::string mime;
    int http_status = 0;
    std::string digest;  // SHA-256 of the HTTP payload body
    std::string file_id;
    std::uint64_t offset = 0;
    std::uint64_t length = 0;

    EpochSeconds crawl_time() const { return timestamp14_to_epoch(timestamp14); }
    bool operator==(const IndexEntry&) const = default;
};

/// Total order used throughout: (canonical_url, timestamp14, digest, file_id, offset).
bool entry_less(const IndexEntry& a, const IndexEntry& b);

struct IngestResult {
    std::vector<IndexEntry> entries;
    std::uint64_t records = 0;   // all WARC records seen
    std::uint64_t skipped = 0;   // non-response records and non-HTTP payloads
    std::uint64_t warnings = 0;  // response records missing or mangling URI/date/status
    std::uint64_t bytes = 0;
};

/// Indexes every response record carrying an HTTP response. Throws IoError
/// naming the offset of a truncated record.
IngestResult ingest_warc(std::string_view file_bytes, const std::string& file_id);
IngestResult ingest_warc_file(const std::filesystem::path& path);

/// Sorted, deduplicated capture index. (canonical_url, timestamp14, digest)
/// identifies an entry; later duplicates are dropped.
class Index {
public:
    Index() = default;
    explicit Index(std::vector<IndexEntry> entries);

    const std::vector<IndexEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// All captures of an already-canonical URL, ascending by time.
    std::span<const IndexEntry> captures_of(std::string_view canonical_url) const;
    bool contains_url(std::string_view canonical_url) const { return !captures_of(canonical_url).empty(); }

    /// Capture of `url` closest in time to `target`; ties go to the earlier
    /// capture. nullopt when the URL has no captures.
    std::optional<IndexEntry> lookup_nearest(std::string_view url, std::string_view target) const;
    std::optional<IndexEntry> nearest_capture(std::string_view canonical_url, EpochSeconds target) const;

    /// Ascending crawl times of `url`; equal times appear once per distinct digest.
    std::vector<std::string> snapshots_of(std::string_view url) const;

    const IndexEntry* find(std::string_view canonical_url, std::string_view timestamp14,
                           std::string_view digest) const;

private:
    std::vector<IndexEntry> entries_;
};

inline constexpr std::string_view kIndexHeader = "SUBCOLLECT-CDX 1";

void write_index(const Index& index, std::ostream& out);
/// Throws ValidationError with the line number on malformed input. The text
/// format carries no original URL; it is restored as the canonical URL.
Index read_index(std::istream& in);
Index read_index_file(const std::filesystem::path& path);

}  // namespace subcollect
