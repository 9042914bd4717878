#pragma once

#include "subcollect/index.hpp"
#include "subcollect/warc.hpp"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>

namespace subcollect {

struct Snapshot {
    IndexEntry ref;
    HeaderList http_headers;
    std::string body;
};

/// Disk-access tally: one fetch per record read, bytes as stored on disk.
struct AccessCounter {
    std::uint64_t fetches = 0;
    std::uint64_t bytes_read = 0;
};

/// Read-only view over a directory of WARC files named by IndexEntry::file_id.
/// Every method is safe to call concurrently.
class Archive {
public:
    explicit Archive(std::filesystem::path directory) : dir_(std::move(directory)) {}
    Archive(const Archive&) = delete;
    Archive& operator=(const Archive&) = delete;

    /// Throws IoError if the byte range is unreadable, CorruptionError if the
    /// stored record does not hash to `ref.digest`.
    Snapshot fetch(const IndexEntry& ref) const;

    /// The stored record bytes, verbatim (still gzip-compressed if they were).
    std::string read_raw(const IndexEntry& ref) const;

    AccessCounter counter() const { return {fetches_.load(), bytes_read_.load()}; }
    const std::filesystem::path& directory() const { return dir_; }

private:
    std::string read_range(const IndexEntry& ref) const;

    std::filesystem::path dir_;
    mutable std::atomic<std::uint64_t> fetches_{0};
    mutable std::atomic<std::uint64_t> bytes_read_{0};
};

}  // namespace subcollect
