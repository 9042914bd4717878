#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace subcollect {

using HeaderList = std::vector<std::pair<std::string, std::string>>;

/// Case-insensitive header lookup; returns the first match.
std::optional<std::string_view> find_header(const HeaderList& headers, std::string_view name);

struct WarcRecord {
    std::uint64_t offset = 0;  // first byte of the record (or its gzip member) in the file
    std::uint64_t length = 0;  // stored bytes, including the trailing CRLF CRLF or the whole gzip member
    bool gzipped = false;
    HeaderList headers;
    std::string block;

    std::optional<std::string_view> header(std::string_view name) const { return find_header(headers, name); }
};

/// Sequential reader over an in-memory WARC file. Each record may be plain or
/// an individual gzip member; the two can be mixed within a file.
class WarcReader {
public:
    explicit WarcReader(std::string_view file_bytes) : data_(file_bytes) {}

    /// Throws IoError naming the record offset on truncated or malformed records.
    std::optional<WarcRecord> next();

private:
    std::string_view data_;
    std::size_t pos_ = 0;
};

/// Parses exactly one record stored at the start of `stored` (plain or gzip).
WarcRecord parse_warc_record(std::string_view stored, std::uint64_t offset);

struct HttpResponse {
    int status = 0;
    HeaderList headers;
    std::string body;
};

/// Splits an HTTP/1.x response message. A well-formed Content-Length shorter
/// than the available bytes truncates the body; no chunked decoding.
std::optional<HttpResponse> parse_http_response(std::string_view message);

/// Media type of a Content-Type value: lowercased, parameters stripped.
std::string media_type(std::string_view content_type);
/// The charset parameter of a Content-Type value, if any.
std::optional<std::string> charset_param(std::string_view content_type);

bool is_html_media_type(std::string_view mime);

// Record construction, used for exports and synthetic archives.

std::string make_http_response(int status, const HeaderList& headers, std::string_view body);

struct WarcRecordSpec {
    std::string type;        // response, request, warcinfo, metadata...
    std::string target_uri;  // omitted when empty
    std::string date;        // ISO 8601, omitted when empty
    std::string content_type;
    std::string block;
};

std::string make_warc_record(const WarcRecordSpec& spec);
std::string gzip_member(std::string_view bytes);

}  // namespace subcollect
