#include "subcollect/archive.hpp"

#include "subcollect/digest.hpp"
#include "subcollect/error.hpp"

#include <fstream>

namespace subcollect {

namespace {

std::string describe(const IndexEntry& ref) {
    return ref.canonical_url + " " + ref.timestamp14 + " (" + ref.file_id + "@" + std::to_string(ref.offset) + ")";
}

}  // namespace

std::string Archive::read_range(const IndexEntry& ref) const {
    const auto path = dir_ / ref.file_id;
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (ec) throw IoError("cannot stat " + path.string() + ": " + ec.message());
    if (ref.offset > size || ref.length > size - ref.offset)
        throw IoError("byte range out of file bounds for " + describe(ref));
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string bytes(ref.length, '\0');
    in.seekg(static_cast<std::streamoff>(ref.offset));
    in.read(bytes.data(), static_cast<std::streamsize>(ref.length));
    if (static_cast<std::uint64_t>(in.gcount()) != ref.length) throw IoError("short read for " + describe(ref));
    fetches_.fetch_add(1, std::memory_order_relaxed);
    bytes_read_.fetch_add(ref.length, std::memory_order_relaxed);
    return bytes;
}

Snapshot Archive::fetch(const IndexEntry& ref) const {
    const std::string stored = read_range(ref);
    WarcRecord rec;
    try {
        rec = parse_warc_record(stored, ref.offset);
    } catch (const IoError& e) {
        throw CorruptionError(std::string("unparseable record for ") + describe(ref) + ": " + e.what());
    }
    auto http = parse_http_response(rec.block);
    if (!http) throw CorruptionError("record is not an HTTP response: " + describe(ref));
    if (sha256_hex(http->body) != ref.digest) throw CorruptionError("digest mismatch for " + describe(ref));

    Snapshot snap{ref, std::move(http->headers), std::move(http->body)};
    if (const auto uri = rec.header("WARC-Target-URI")) {
        std::string_view u = *uri;
        if (u.size() >= 2 && u.front() == '<' && u.back() == '>') u = u.substr(1, u.size() - 2);
        snap.ref.original_url = std::string(u);
    }
    return snap;
}

std::string Archive::read_raw(const IndexEntry& ref) const { return read_range(ref); }

}  // namespace subcollect
