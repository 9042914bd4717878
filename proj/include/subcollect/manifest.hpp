#pragma once

#include "subcollect/archive.hpp"
#include "subcollect/extraction.hpp"
#include "subcollect/index.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace subcollect {

inline constexpr std::string_view kManifestHeader = "SUBCOLLECT-MANIFEST 1";

struct ManifestLine {
    std::string canonical_url;
    std::string timestamp14;
    std::string digest;
    Origin origin = Origin::scan;
    bool operator==(const ManifestLine&) const = default;
};

struct Manifest {
    std::string spec_digest;
    std::vector<ManifestLine> members;
};

void write_manifest(const SubCollection& collection, std::ostream& out);
/// Writes through a temporary file and renames, so a failed run never
/// leaves a partial manifest behind.
void write_manifest_file(const SubCollection& collection, const std::filesystem::path& path);

Manifest read_manifest(std::istream& in);
Manifest read_manifest_file(const std::filesystem::path& path);

/// Looks every line up in the index. Throws IoError naming the first line
/// with no matching entry.
std::vector<IndexEntry> resolve_manifest(const Manifest& manifest, const Index& index);

/// Copies each member's stored record verbatim, in manifest order.
void export_warc(const SubCollection& collection, const Archive& archive, std::ostream& out);

}  // namespace subcollect
