#include "subcollect/manifest.hpp"

#include "subcollect/error.hpp"

#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

namespace subcollect {

void write_manifest(const SubCollection& collection, std::ostream& out) {
    out << kManifestHeader << '\n';
    out << "spec-digest " << collection.spec_digest << '\n';
    for (const auto& m : collection.members) {
        out << m.entry.canonical_url << ' ' << m.entry.timestamp14 << ' ' << m.entry.digest << ' '
            << (m.origin == Origin::closure ? "closure" : "scan") << '\n';
    }
}

void write_manifest_file(const SubCollection& collection, const std::filesystem::path& path) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        write_manifest(collection, out);
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp);
            throw IoError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot move manifest into place: " + ec.message());
    }
}

Manifest read_manifest(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kManifestHeader)
        throw ValidationError("manifest: missing '" + std::string(kManifestHeader) + "' header");
    Manifest m;
    if (!std::getline(in, line) || !line.starts_with("spec-digest "))
        throw ValidationError("manifest: missing spec-digest line");
    m.spec_digest = line.substr(12);
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::vector<std::string> f{std::istream_iterator<std::string>(fields), std::istream_iterator<std::string>()};
        if (f.size() != 4 || (f[3] != "scan" && f[3] != "closure") || !is_valid_timestamp14(f[1]))
            throw ValidationError("manifest line " + std::to_string(line_no) + ": malformed");
        m.members.push_back({f[0], f[1], f[2], f[3] == "closure" ? Origin::closure : Origin::scan});
    }
    return m;
}

Manifest read_manifest_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());
    return read_manifest(in);
}

std::vector<IndexEntry> resolve_manifest(const Manifest& manifest, const Index& index) {
    std::vector<IndexEntry> out;
    out.reserve(manifest.members.size());
    for (const auto& line : manifest.members) {
        const IndexEntry* e = index.find(line.canonical_url, line.timestamp14, line.digest);
        if (!e)
            throw IoError("manifest member not in index: " + line.canonical_url + " " + line.timestamp14 + " " +
                          line.digest);
        out.push_back(*e);
    }
    return out;
}

void export_warc(const SubCollection& collection, const Archive& archive, std::ostream& out) {
    for (const auto& m : collection.members) {
        const std::string raw = archive.read_raw(m.entry);
        out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
    }
}

}  // namespace subcollect
