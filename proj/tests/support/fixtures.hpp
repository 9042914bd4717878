#pragma once

#include "subcollect/index.hpp"
#include "subcollect/warc.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fixtures {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

struct Page {
    std::string url;
    std::string timestamp14;
    std::string body;
    std::string content_type = "text/html; charset=utf-8";
    int status = 200;
};

/// "20051130143000" -> "2005-11-30T14:30:00Z"
std::string iso_date(const std::string& timestamp14);

std::string response_record(const Page& page);
std::string request_record(const std::string& url, const std::string& timestamp14);

/// Minimal HTML document with the given text and one anchor per link.
std::string html_page(const std::string& text, const std::vector<std::string>& links = {});

void write_file(const fs::path& path, const std::string& bytes);
std::string read_file(const fs::path& path);

/// Writes `pages` as response records to `dir/file_name` (every other record
/// gzipped when `mixed_gzip`) and returns the index entries.
std::vector<subcollect::IndexEntry> write_warc(const fs::path& dir, const std::string& file_name,
                                               const std::vector<Page>& pages, bool mixed_gzip = false);

/// Index-only entry with a synthetic digest and no backing record.
subcollect::IndexEntry entry(const std::string& url, const std::string& timestamp14,
                             const std::string& mime = "text/html");

}  // namespace fixtures
