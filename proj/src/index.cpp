#include "subcollect/index.hpp"

#include "subcollect/digest.hpp"
#include "subcollect/error.hpp"
#include "subcollect/url.hpp"
#include "subcollect/warc.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <tuple>

namespace subcollect {

namespace {

std::string strip_angle_brackets(std::string_view uri) {
    if (uri.size() >= 2 && uri.front() == '<' && uri.back() == '>') uri = uri.substr(1, uri.size() - 2);
    return std::string(uri);
}

auto key_of(const IndexEntry& e) {
    return std::tie(e.canonical_url, e.timestamp14, e.digest, e.file_id, e.offset);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size() && !s.empty();
}

bool is_hex64(std::string_view s) {
    return s.size() == 64 && std::all_of(s.begin(), s.end(), [](char c) {
               return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
           });
}

}  // namespace

bool entry_less(const IndexEntry& a, const IndexEntry& b) { return key_of(a) < key_of(b); }

IngestResult ingest_warc(std::string_view file_bytes, const std::string& file_id) {
    if (file_id.empty() || file_id.find_first_of(" \t\r\n") != std::string::npos)
        throw ValidationError("archive file id '" + file_id + "' must be nonempty and contain no whitespace");
    IngestResult result;
    result.bytes = file_bytes.size();
    WarcReader reader(file_bytes);
    while (auto rec = reader.next()) {
        ++result.records;
        const auto type = rec->header("WARC-Type");
        if (!type || *type != "response") {
            ++result.skipped;
            continue;
        }
        const auto uri = rec->header("WARC-Target-URI");
        const auto date = rec->header("WARC-Date");
        if (!uri || !date) {
            ++result.warnings;
            continue;
        }
        auto http = parse_http_response(rec->block);
        if (!http) {
            ++result.skipped;
            continue;
        }
        const auto ts = iso8601_to_timestamp14(*date);
        if (!ts) {
            ++result.warnings;
            continue;
        }
        IndexEntry e;
        e.original_url = strip_angle_brackets(*uri);
        try {
            e.canonical_url = canonicalize_url(e.original_url);
        } catch (const UrlError&) {
            ++result.warnings;
            continue;
        }
        e.timestamp14 = *ts;
        const auto ct = find_header(http->headers, "Content-Type");
        e.mime = media_type(ct ? *ct : std::string_view{});
        e.http_status = http->status;
        e.digest = sha256_hex(http->body);
        e.file_id = file_id;
        e.offset = rec->offset;
        e.length = rec->length;
        result.entries.push_back(std::move(e));
    }
    return result;
}

IngestResult ingest_warc_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path.string());
    return ingest_warc(bytes, path.filename().string());
}

Index::Index(std::vector<IndexEntry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), entry_less);
    auto same_identity = [](const IndexEntry& a, const IndexEntry& b) {
        return a.canonical_url == b.canonical_url && a.timestamp14 == b.timestamp14 && a.digest == b.digest;
    };
    entries_.erase(std::unique(entries_.begin(), entries_.end(), same_identity), entries_.end());
}

std::span<const IndexEntry> Index::captures_of(std::string_view canonical_url) const {
    auto lo = std::lower_bound(entries_.begin(), entries_.end(), canonical_url,
                               [](const IndexEntry& e, std::string_view u) { return e.canonical_url < u; });
    auto hi = std::upper_bound(lo, entries_.end(), canonical_url,
                               [](std::string_view u, const IndexEntry& e) { return u < e.canonical_url; });
    return {lo, hi};
}

std::optional<IndexEntry> Index::nearest_capture(std::string_view canonical_url, EpochSeconds target) const {
    const auto caps = captures_of(canonical_url);
    if (caps.empty()) return std::nullopt;
    // First capture at or after the target.
    auto after = std::partition_point(caps.begin(), caps.end(),
                                      [&](const IndexEntry& e) { return e.crawl_time() < target; });
    if (after == caps.begin()) return *after;
    auto before = std::prev(after);
    while (before != caps.begin() && std::prev(before)->timestamp14 == before->timestamp14) --before;
    if (after == caps.end()) return *before;
    const EpochSeconds d_before = target - before->crawl_time();
    const EpochSeconds d_after = after->crawl_time() - target;
    return d_after < d_before ? *after : *before;
}

std::optional<IndexEntry> Index::lookup_nearest(std::string_view url, std::string_view target) const {
    return nearest_capture(canonicalize_url(url), timestamp14_to_epoch(target));
}

std::vector<std::string> Index::snapshots_of(std::string_view url) const {
    std::string canonical;
    try {
        canonical = canonicalize_url(url);
    } catch (const UrlError&) {
        return {};
    }
    std::vector<std::string> out;
    for (const auto& e : captures_of(canonical)) out.push_back(e.timestamp14);
    return out;
}

const IndexEntry* Index::find(std::string_view canonical_url, std::string_view timestamp14,
                              std::string_view digest) const {
    for (const auto& e : captures_of(canonical_url))
        if (e.timestamp14 == timestamp14 && e.digest == digest) return &e;
    return nullptr;
}

void write_index(const Index& index, std::ostream& out) {
    out << kIndexHeader << '\n';
    for (const auto& e : index.entries()) {
        out << e.canonical_url << ' ' << e.timestamp14 << ' ' << e.mime << ' ' << e.http_status << ' ' << e.digest
            << ' ' << e.file_id << ' ' << e.offset << ' ' << e.length << '\n';
    }
}

Index read_index(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kIndexHeader)
        throw ValidationError("index: missing '" + std::string(kIndexHeader) + "' header");
    std::vector<IndexEntry> entries;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fail = [&](const std::string& why) {
            throw ValidationError("index line " + std::to_string(line_no) + ": " + why);
        };
        std::istringstream fields(line);
        std::vector<std::string> f{std::istream_iterator<std::string>(fields), std::istream_iterator<std::string>()};
        if (f.size() != 8) fail("expected 8 fields, got " + std::to_string(f.size()));
        IndexEntry e;
        e.canonical_url = f[0];
        e.original_url = f[0];
        e.timestamp14 = f[1];
        e.mime = f[2];
        e.digest = f[4];
        e.file_id = f[5];
        if (!is_valid_timestamp14(e.timestamp14)) fail("bad timestamp '" + e.timestamp14 + "'");
        if (!parse_number(f[3], e.http_status) || e.http_status < 100 || e.http_status > 599) fail("bad status");
        if (!is_hex64(e.digest)) fail("bad digest");
        if (!parse_number(f[6], e.offset)) fail("bad offset");
        if (!parse_number(f[7], e.length) || e.length == 0) fail("bad length");
        entries.push_back(std::move(e));
    }
    return Index(std::move(entries));
}

Index read_index_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open index " + path.string());
    return read_index(in);
}

}  // namespace subcollect
