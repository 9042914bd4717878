#include "subcollect/html.hpp"

#include "subcollect/archive.hpp"
#include "subcollect/error.hpp"
#include "subcollect/text.hpp"
#include "subcollect/url.hpp"
#include "subcollect/warc.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>

namespace subcollect {

namespace {

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

std::string lowered(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
    return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

std::size_t find_ci(std::string_view hay, std::string_view needle, std::size_t from) {
    if (needle.size() > hay.size()) return std::string_view::npos;
    for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < needle.size() && match; ++k) match = ascii_lower(hay[i + k]) == needle[k];
        if (match) return i;
    }
    return std::string_view::npos;
}

const std::unordered_map<std::string_view, char32_t>& entity_table() {
    static const std::unordered_map<std::string_view, char32_t> table = [] {
        std::unordered_map<std::string_view, char32_t> t = {
            {"amp", '&'},        {"lt", '<'},         {"gt", '>'},         {"quot", '"'},      {"apos", '\''},
            {"ndash", 0x2013},   {"mdash", 0x2014},   {"lsquo", 0x2018},   {"rsquo", 0x2019},  {"sbquo", 0x201A},
            {"ldquo", 0x201C},   {"rdquo", 0x201D},   {"bdquo", 0x201E},   {"bull", 0x2022},   {"hellip", 0x2026},
            {"euro", 0x20AC},    {"trade", 0x2122},   {"OElig", 0x152},    {"oelig", 0x153},   {"Scaron", 0x160},
            {"scaron", 0x161},   {"Yuml", 0x178},
        };
        // ISO-8859-1 entities, U+00A0..U+00FF in code point order.
        static constexpr std::string_view latin1[] = {
            "nbsp",   "iexcl",  "cent",   "pound",  "curren", "yen",    "brvbar", "sect",   "uml",    "copy",
            "ordf",   "laquo",  "not",    "shy",    "reg",    "macr",   "deg",    "plusmn", "sup2",   "sup3",
            "acute",  "micro",  "para",   "middot", "cedil",  "sup1",   "ordm",   "raquo",  "frac14", "frac12",
            "frac34", "iquest", "Agrave", "Aacute", "Acirc",  "Atilde", "Auml",   "Aring",  "AElig",  "Ccedil",
            "Egrave", "Eacute", "Ecirc",  "Euml",   "Igrave", "Iacute", "Icirc",  "Iuml",   "ETH",    "Ntilde",
            "Ograve", "Oacute", "Ocirc",  "Otilde", "Ouml",   "times",  "Oslash", "Ugrave", "Uacute", "Ucirc",
            "Uuml",   "Yacute", "THORN",  "szlig",  "agrave", "aacute", "acirc",  "atilde", "auml",   "aring",
            "aelig",  "ccedil", "egrave", "eacute", "ecirc",  "euml",   "igrave", "iacute", "icirc",  "iuml",
            "eth",    "ntilde", "ograve", "oacute", "ocirc",  "otilde", "ouml",   "divide", "oslash", "ugrave",
            "uacute", "ucirc",  "uuml",   "yacute", "thorn",  "yuml"};
        for (std::size_t i = 0; i < std::size(latin1); ++i) t.emplace(latin1[i], static_cast<char32_t>(0xA0 + i));
        return t;
    }();
    return table;
}

char32_t numeric_reference(std::u32string_view digits, bool hex) {
    std::uint64_t v = 0;
    for (char32_t d : digits) {
        int x = 0;
        if (d >= '0' && d <= '9') x = static_cast<int>(d - '0');
        else if (hex && d >= 'a' && d <= 'f') x = static_cast<int>(d - 'a' + 10);
        else if (hex && d >= 'A' && d <= 'F') x = static_cast<int>(d - 'A' + 10);
        v = v * (hex ? 16 : 10) + x;
        if (v > 0x10FFFF) return U'�';
    }
    if (v == 0 || (v >= 0xD800 && v <= 0xDFFF)) return U'�';
    if (v >= 0x80 && v <= 0x9F) {
        const auto mapped = decode_text(std::string(1, static_cast<char>(v)), Charset::windows1252);
        return mapped.empty() ? U'�' : mapped[0];
    }
    return static_cast<char32_t>(v);
}

/// Replaces character references in decoded text. Named references without a
/// trailing ';' are accepted when the whole name is known (legacy pages).
std::u32string decode_entities(std::u32string_view in) {
    std::u32string out;
    out.reserve(in.size());
    std::size_t i = 0;
    while (i < in.size()) {
        if (in[i] != '&') {
            out += in[i++];
            continue;
        }
        std::size_t j = i + 1;
        if (j < in.size() && in[j] == '#') {
            ++j;
            const bool hex = j < in.size() && (in[j] == 'x' || in[j] == 'X');
            if (hex) ++j;
            const std::size_t start = j;
            while (j < in.size() && j - start < 8 &&
                   ((in[j] >= '0' && in[j] <= '9') ||
                    (hex && ((in[j] >= 'a' && in[j] <= 'f') || (in[j] >= 'A' && in[j] <= 'F')))))
                ++j;
            if (j == start) {
                out += in[i++];
                continue;
            }
            out += numeric_reference(in.substr(start, j - start), hex);
            if (j < in.size() && in[j] == ';') ++j;
            i = j;
            continue;
        }
        const std::size_t start = j;
        while (j < in.size() && j - start < 10 && in[j] < 0x80 && std::isalnum(static_cast<int>(in[j]))) ++j;
        std::string name;
        for (std::size_t k = start; k < j; ++k) name += static_cast<char>(in[k]);
        const auto& table = entity_table();
        if (auto it = table.find(name); !name.empty() && it != table.end()) {
            out += it->second;
            if (j < in.size() && in[j] == ';') ++j;
            i = j;
        } else {
            out += in[i++];
        }
    }
    return out;
}

// Raw non-ASCII attribute bytes ride through entity decoding in a private-use
// window so they can be told apart from decoded references.
constexpr char32_t kRawByteBase = 0xF700;

std::string utf8_entities(std::string_view bytes) {
    std::u32string raw;
    raw.reserve(bytes.size());
    for (char ch : bytes) {
        const auto b = static_cast<unsigned char>(ch);
        raw += b < 0x80 ? static_cast<char32_t>(b) : kRawByteBase + b;
    }
    std::string out;
    for (char32_t c : decode_entities(raw)) {
        if (c >= kRawByteBase + 0x80 && c <= kRawByteBase + 0xFF) out += static_cast<char>(c - kRawByteBase);
        else append_utf8(out, c);
    }
    return out;
}

struct Tag {
    std::string name;  // lowercased
    bool closing = false;
    std::vector<std::pair<std::string, std::string>> attrs;  // names lowercased, values entity-decoded

    std::optional<std::string_view> attr(std::string_view n) const {
        for (const auto& [k, v] : attrs)
            if (k == n) return std::string_view(v);
        return std::nullopt;
    }
};

/// Parses a tag starting at `pos` (which points at '<'). Returns the offset
/// just past the closing '>' (or the input end for unterminated tags).
std::size_t parse_tag(std::string_view s, std::size_t pos, Tag& tag) {
    std::size_t i = pos + 1;
    if (i < s.size() && s[i] == '/') {
        tag.closing = true;
        ++i;
    }
    const std::size_t name_start = i;
    while (i < s.size() && !is_space(s[i]) && s[i] != '>' && s[i] != '/') ++i;
    tag.name = lowered(s.substr(name_start, i - name_start));
    while (i < s.size()) {
        while (i < s.size() && (is_space(s[i]) || s[i] == '/')) ++i;
        if (i >= s.size()) break;
        if (s[i] == '>') return i + 1;
        const std::size_t an = i;
        while (i < s.size() && !is_space(s[i]) && s[i] != '=' && s[i] != '>' && s[i] != '/') ++i;
        if (i == an) {
            ++i;
            continue;
        }
        std::string name = lowered(s.substr(an, i - an));
        while (i < s.size() && is_space(s[i])) ++i;
        std::string value;
        if (i < s.size() && s[i] == '=') {
            ++i;
            while (i < s.size() && is_space(s[i])) ++i;
            if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
                const char q = s[i++];
                std::size_t end = s.find(q, i);
                if (end == std::string_view::npos) {
                    // Unbalanced quote: the value runs to the end of the tag.
                    end = std::min(s.find('>', i), s.size());
                    value = utf8_entities(s.substr(i, end - i));
                    i = end;
                } else {
                    value = utf8_entities(s.substr(i, end - i));
                    i = end + 1;
                }
            } else {
                const std::size_t vs = i;
                while (i < s.size() && !is_space(s[i]) && s[i] != '>') ++i;
                value = utf8_entities(s.substr(vs, i - vs));
            }
        }
        if (!tag.attr(name)) tag.attrs.emplace_back(std::move(name), std::move(value));
    }
    return s.size();
}

bool contains_ci(std::string_view hay, std::string_view needle_lower) {
    return find_ci(hay, needle_lower, 0) != std::string_view::npos;
}

std::optional<std::string> meta_charset(const Tag& tag) {
    if (auto cs = tag.attr("charset"); cs && !cs->empty()) return std::string(*cs);
    const auto equiv = tag.attr("http-equiv");
    const auto content = tag.attr("content");
    if (equiv && content && lowered(*equiv) == "content-type") return charset_param(*content);
    return std::nullopt;
}

bool has_scheme(std::string_view href, std::string_view scheme) {
    std::size_t i = 0;
    while (i < href.size() && is_space(href[i])) ++i;
    return find_ci(href.substr(i, scheme.size()), scheme, 0) == 0;
}

std::string_view strip_www(std::string_view host) {
    return host.starts_with("www.") && host.size() > 4 ? host.substr(4) : host;
}

}  // namespace

std::uint32_t TagCounts::operator[](TagClass c) const {
    switch (c) {
        case TagClass::script: return script;
        case TagClass::style_element: return style_element;
        case TagClass::linked_style: return linked_style;
        case TagClass::table: return table;
        case TagClass::div: return div;
        case TagClass::anchor: return anchor;
    }
    return 0;
}

LinkKind classify_link(std::string_view target, std::string_view page_url, LinkPolicy policy) {
    std::string t, p;
    try {
        t = canonicalize_url(target);
        p = canonicalize_url(page_url);
    } catch (const UrlError&) {
        return LinkKind::external;
    }
    std::string_view th = url_host(t);
    std::string_view ph = url_host(p);
    if (policy.strip_www) {
        th = strip_www(th);
        ph = strip_www(ph);
    }
    return th == ph ? LinkKind::internal : LinkKind::external;
}

PageAnalysis parse_html(std::string_view body, std::string_view page_url, std::optional<std::string_view> charset_hint,
                        LinkPolicy policy) {
    PageAnalysis result;
    std::string text;  // raw text bytes, segments separated by spaces
    std::vector<std::string> hrefs;
    std::optional<std::string> base_href;
    std::optional<Charset> meta;

    std::size_t i = 0;
    while (i < body.size()) {
        const std::size_t lt = body.find('<', i);
        const std::size_t text_end = lt == std::string_view::npos ? body.size() : lt;
        if (text_end > i) {
            text.append(body.substr(i, text_end - i));
            text += ' ';
        }
        if (lt == std::string_view::npos) break;
        i = lt;

        if (body.substr(i, 4) == "<!--") {
            const std::size_t end = body.find("-->", i + 4);
            i = end == std::string_view::npos ? body.size() : end + 3;
            continue;
        }
        const char next = i + 1 < body.size() ? body[i + 1] : '\0';
        if (next == '!' || next == '?') {
            const std::size_t end = body.find('>', i);
            i = end == std::string_view::npos ? body.size() : end + 1;
            continue;
        }
        const bool starts_tag = std::isalpha(static_cast<unsigned char>(next)) ||
                                (next == '/' && i + 2 < body.size() &&
                                 std::isalpha(static_cast<unsigned char>(body[i + 2])));
        if (!starts_tag) {
            text += '<';
            ++i;
            continue;
        }

        Tag tag;
        i = parse_tag(body, i, tag);
        if (tag.closing) continue;

        if (tag.name == "script" || tag.name == "style") {
            (tag.name == "script" ? result.tag_counts.script : result.tag_counts.style_element)++;
            const std::string close = "</" + tag.name;
            const std::size_t end = find_ci(body, close, i);
            if (end == std::string_view::npos) {
                i = body.size();
            } else {
                const std::size_t gt = body.find('>', end);
                i = gt == std::string_view::npos ? body.size() : gt + 1;
            }
        } else if (tag.name == "a") {
            if (auto href = tag.attr("href")) hrefs.emplace_back(*href);
        } else if (tag.name == "link") {
            if (auto rel = tag.attr("rel"); rel && contains_ci(*rel, "stylesheet")) ++result.tag_counts.linked_style;
        } else if (tag.name == "table") {
            ++result.tag_counts.table;
        } else if (tag.name == "div") {
            ++result.tag_counts.div;
        } else if (tag.name == "base") {
            if (auto href = tag.attr("href"); href && !base_href) base_href = std::string(*href);
        } else if (tag.name == "meta") {
            if (auto label = meta_charset(tag); label && !meta) meta = charset_from_label(*label);
        }
    }

    std::optional<Charset> charset;
    if (charset_hint) charset = charset_from_label(*charset_hint);
    if (!charset) charset = meta;
    append_tokens(decode_entities(decode_text(text, charset.value_or(Charset::latin1))), result.tokens);

    std::string page;
    try {
        page = canonicalize_url(page_url);
    } catch (const UrlError&) {
        return result;
    }
    std::string base = page;
    if (base_href) {
        if (std::string resolved = resolve_url(page, *base_href); !resolved.empty()) base = std::move(resolved);
    }
    for (const auto& href : hrefs) {
        if (has_scheme(href, "javascript:") || has_scheme(href, "mailto:") || has_scheme(href, "data:")) continue;
        std::string target = resolve_url(base, href);
        if (target.empty()) continue;
        const LinkKind kind = classify_link(target, page, policy);
        result.outlinks.push_back({std::move(target), kind});
        ++result.tag_counts.anchor;
    }
    return result;
}

PageAnalysis analyze_snapshot(const Snapshot& snapshot, LinkPolicy policy) {
    if (!is_html_media_type(snapshot.ref.mime)) return {};
    std::optional<std::string> charset;
    if (const auto ct = find_header(snapshot.http_headers, "Content-Type")) charset = charset_param(*ct);
    return parse_html(snapshot.body, snapshot.ref.canonical_url, charset ? std::optional<std::string_view>(*charset) : std::nullopt, policy);
}

}  // namespace subcollect
