#include "subcollect/warc.hpp"

#include "subcollect/digest.hpp"
#include "subcollect/error.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>

namespace subcollect {

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Reads "Name: value" lines up to an empty line. Returns the offset just past
/// the blank line, or npos if the header block never ends.
std::size_t read_header_block(std::string_view data, std::size_t pos, HeaderList& out) {
    while (pos < data.size()) {
        const std::size_t eol = data.find('\n', pos);
        if (eol == std::string_view::npos) return std::string_view::npos;
        std::string_view line = data.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        if (line.empty()) return pos;
        if ((line.front() == ' ' || line.front() == '\t') && !out.empty()) {
            out.back().second += ' ';
            out.back().second += trim(line);
            continue;
        }
        const std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) continue;
        out.emplace_back(std::string(trim(line.substr(0, colon))), std::string(trim(line.substr(colon + 1))));
    }
    return std::string_view::npos;
}

std::optional<std::uint64_t> parse_uint(std::string_view s) {
    s = trim(s);
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

[[noreturn]] void truncated(std::uint64_t offset, std::string_view what) {
    throw IoError("truncated or malformed WARC record at offset " + std::to_string(offset) + ": " +
                  std::string(what));
}

/// Parses a plain record at the start of `data`. Returns the record and the
/// number of bytes consumed, including trailing newlines.
std::pair<WarcRecord, std::size_t> parse_plain(std::string_view data, std::uint64_t offset) {
    const std::size_t eol = data.find('\n');
    if (eol == std::string_view::npos) truncated(offset, "missing version line");
    std::string_view version = data.substr(0, eol);
    if (!version.empty() && version.back() == '\r') version.remove_suffix(1);
    if (!version.starts_with("WARC/")) truncated(offset, "missing WARC version line");

    WarcRecord rec;
    rec.offset = offset;
    const std::size_t body_start = read_header_block(data, eol + 1, rec.headers);
    if (body_start == std::string_view::npos) truncated(offset, "unterminated header block");
    const auto length_header = rec.header("Content-Length");
    if (!length_header) truncated(offset, "missing Content-Length");
    const auto content_length = parse_uint(*length_header);
    if (!content_length) truncated(offset, "bad Content-Length");
    if (*content_length > data.size() - body_start) truncated(offset, "block shorter than Content-Length");
    rec.block = std::string(data.substr(body_start, *content_length));

    std::size_t end = body_start + *content_length;
    // Records end with CRLF CRLF; tolerate bare LFs and missing terminators.
    for (int i = 0; i < 4 && end < data.size() && (data[end] == '\r' || data[end] == '\n'); ++i) ++end;
    return {std::move(rec), end};
}

/// Inflates one gzip member at the start of `data`. Returns the decompressed
/// bytes and the compressed size.
std::pair<std::string, std::size_t> inflate_member(std::string_view data, std::uint64_t offset) {
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) throw IoError("zlib initialization failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(std::min<std::size_t>(data.size(), 0xffffffffu));
    std::string out;
    char buf[1 << 15];
    int rc = Z_OK;
    while (rc == Z_OK) {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof buf;
        rc = inflate(&zs, Z_NO_FLUSH);
        out.append(buf, sizeof buf - zs.avail_out);
        if (rc == Z_BUF_ERROR && zs.avail_in == 0) break;
    }
    const std::size_t consumed = zs.total_in;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END) truncated(offset, "incomplete gzip member");
    return {std::move(out), consumed};
}

bool is_gzip_at(std::string_view data, std::size_t pos) {
    return pos + 1 < data.size() && static_cast<unsigned char>(data[pos]) == 0x1f &&
           static_cast<unsigned char>(data[pos + 1]) == 0x8b;
}

}  // namespace

std::optional<std::string_view> find_header(const HeaderList& headers, std::string_view name) {
    for (const auto& [k, v] : headers)
        if (iequals(k, name)) return std::string_view(v);
    return std::nullopt;
}

WarcRecord parse_warc_record(std::string_view stored, std::uint64_t offset) {
    if (is_gzip_at(stored, 0)) {
        auto [plain, consumed] = inflate_member(stored, offset);
        auto [rec, used] = parse_plain(plain, offset);
        (void)used;
        rec.length = consumed;
        rec.gzipped = true;
        return std::move(rec);
    }
    auto [rec, used] = parse_plain(stored, offset);
    rec.length = used;
    return std::move(rec);
}

std::optional<WarcRecord> WarcReader::next() {
    while (pos_ < data_.size() && (data_[pos_] == '\r' || data_[pos_] == '\n')) ++pos_;
    if (pos_ >= data_.size()) return std::nullopt;
    WarcRecord rec = parse_warc_record(data_.substr(pos_), pos_);
    pos_ += rec.length;
    return rec;
}

std::optional<HttpResponse> parse_http_response(std::string_view message) {
    if (!message.starts_with("HTTP/")) return std::nullopt;
    const std::size_t eol = message.find('\n');
    if (eol == std::string_view::npos) return std::nullopt;
    std::string_view status_line = trim(message.substr(0, eol));
    const std::size_t sp = status_line.find(' ');
    if (sp == std::string_view::npos) return std::nullopt;
    std::string_view code = status_line.substr(sp + 1, 3);
    int status = 0;
    const auto [p, ec] = std::from_chars(code.data(), code.data() + code.size(), status);
    if (ec != std::errc{} || p != code.data() + code.size() || status < 100 || status > 599) return std::nullopt;

    HttpResponse resp;
    resp.status = status;
    std::size_t body_start = read_header_block(message, eol + 1, resp.headers);
    if (body_start == std::string_view::npos) body_start = message.size();
    std::string_view body = message.substr(body_start);
    if (const auto cl = find_header(resp.headers, "Content-Length")) {
        if (const auto n = parse_uint(*cl); n && *n < body.size()) body = body.substr(0, *n);
    }
    resp.body = std::string(body);
    return resp;
}

std::string media_type(std::string_view content_type) {
    std::string_view mt = trim(content_type.substr(0, std::min(content_type.find(';'), content_type.size())));
    std::string out;
    for (char c : mt) {
        if (c == ' ' || c == '\t' || static_cast<unsigned char>(c) < 0x21 || static_cast<unsigned char>(c) > 0x7e)
            return "application/octet-stream";
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out.empty() ? "application/octet-stream" : out;
}

std::optional<std::string> charset_param(std::string_view content_type) {
    std::size_t pos = content_type.find(';');
    while (pos != std::string_view::npos) {
        std::string_view param = content_type.substr(pos + 1);
        const std::size_t next = param.find(';');
        param = trim(param.substr(0, std::min(next, param.size())));
        const std::size_t eq = param.find('=');
        if (eq != std::string_view::npos && iequals(trim(param.substr(0, eq)), "charset")) {
            std::string_view value = trim(param.substr(eq + 1));
            if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
            if (!value.empty()) return std::string(value);
        }
        pos = next == std::string_view::npos ? next : pos + 1 + next;
    }
    return std::nullopt;
}

bool is_html_media_type(std::string_view mime) { return mime == "text/html" || mime == "application/xhtml+xml"; }

std::string make_http_response(int status, const HeaderList& headers, std::string_view body) {
    std::string out = "HTTP/1.1 " + std::to_string(status) + (status == 200 ? " OK" : " Status") + "\r\n";
    for (const auto& [k, v] : headers) out += k + ": " + v + "\r\n";
    out += "\r\n";
    out.append(body);
    return out;
}

std::string make_warc_record(const WarcRecordSpec& spec) {
    const std::string id = sha256_hex(spec.type + '\n' + spec.target_uri + '\n' + spec.date + '\n' + spec.block);
    std::string out = "WARC/1.0\r\n";
    out += "WARC-Type: " + spec.type + "\r\n";
    out += "WARC-Record-ID: <urn:uuid:" + id.substr(0, 8) + '-' + id.substr(8, 4) + '-' + id.substr(12, 4) + '-' +
           id.substr(16, 4) + '-' + id.substr(20, 12) + ">\r\n";
    if (!spec.target_uri.empty()) out += "WARC-Target-URI: " + spec.target_uri + "\r\n";
    if (!spec.date.empty()) out += "WARC-Date: " + spec.date + "\r\n";
    if (!spec.content_type.empty()) out += "Content-Type: " + spec.content_type + "\r\n";
    out += "Content-Length: " + std::to_string(spec.block.size()) + "\r\n\r\n";
    out += spec.block;
    out += "\r\n\r\n";
    return out;
}

std::string gzip_member(std::string_view bytes) {
    z_stream zs{};
    if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        throw IoError("zlib initialization failed");
    std::string out(deflateBound(&zs, static_cast<uLong>(bytes.size())) + 32, '\0');
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
    zs.avail_in = static_cast<uInt>(bytes.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = deflate(&zs, Z_FINISH);
    out.resize(zs.total_out);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw IoError("gzip compression failed");
    return out;
}

}  // namespace subcollect
