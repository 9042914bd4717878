#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace subcollect {

struct Snapshot;

enum class LinkKind { internal, external };

struct LinkRecord {
    std::string target;  // canonical absolute URL
    LinkKind kind = LinkKind::external;
    bool operator==(const LinkRecord&) const = default;
};

enum class TagClass { script, style_element, linked_style, table, div, anchor };

/// Occurrence counts. `anchor` counts only anchors that produced an outlink.
struct TagCounts {
    std::uint32_t script = 0;
    std::uint32_t style_element = 0;
    std::uint32_t linked_style = 0;
    std::uint32_t table = 0;
    std::uint32_t div = 0;
    std::uint32_t anchor = 0;

    std::uint32_t operator[](TagClass c) const;
    bool operator==(const TagCounts&) const = default;
};

struct PageAnalysis {
    std::vector<std::string> tokens;
    std::vector<LinkRecord> outlinks;
    TagCounts tag_counts;
    bool operator==(const PageAnalysis&) const = default;
};

struct LinkPolicy {
    /// Treat "www.a.de" and "a.de" as the same site.
    bool strip_www = true;
};

/// Same host (ignoring port and, per policy, one leading "www.") means internal.
/// Unparseable URLs are external.
LinkKind classify_link(std::string_view target, std::string_view page_url, LinkPolicy policy = {});

/// Tolerant single-pass HTML scan. Never throws on malformed markup.
/// Charset precedence: `charset_hint`, then <meta> charset, then Latin-1.
PageAnalysis parse_html(std::string_view body, std::string_view page_url,
                        std::optional<std::string_view> charset_hint = std::nullopt, LinkPolicy policy = {});

/// parse_html for HTML snapshots using the Content-Type charset; empty for
/// other media types.
PageAnalysis analyze_snapshot(const Snapshot& snapshot, LinkPolicy policy = {});

}  // namespace subcollect
