#include "subcollect/url.hpp"

#include "subcollect/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace subcollect {

namespace {

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_forbidden_byte(unsigned char c) { return c <= 0x20 || c >= 0x7f; }

bool is_host_byte(char c) {
    return is_alpha(c) || is_digit(c) || c == '-' || c == '.' || c == '_' || c == '~' || c == '%';
}

/// Length of a leading "scheme:" (excluding the colon), or 0 if there is none.
std::size_t scheme_length(std::string_view s) {
    if (s.empty() || !is_alpha(s[0])) return 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const char c = s[i];
        if (c == ':') return i;
        if (!(is_alpha(c) || is_digit(c) || c == '+' || c == '-' || c == '.')) return 0;
    }
    return 0;
}

struct Parts {
    std::string_view origin;  // scheme://authority
    std::string_view path;
    std::string_view query;  // including '?', possibly empty
};

Parts split_canonical(std::string_view url) {
    const std::size_t auth = url.find("://") + 3;
    const std::size_t path_start = std::min(url.find_first_of("/?", auth), url.size());
    const std::size_t q = std::min(url.find('?', path_start), url.size());
    return {url.substr(0, path_start), url.substr(path_start, q - path_start), url.substr(q)};
}

std::string remove_dot_segments(std::string_view in) {
    std::string out;
    while (!in.empty()) {
        if (in.starts_with("../")) {
            in.remove_prefix(3);
        } else if (in.starts_with("./")) {
            in.remove_prefix(2);
        } else if (in.starts_with("/./")) {
            in.remove_prefix(2);
        } else if (in == "/.") {
            in = "/";
        } else if (in.starts_with("/../") || in == "/..") {
            in = in.size() == 3 ? std::string_view("/") : in.substr(3);
            const auto cut = out.rfind('/');
            out.erase(cut == std::string::npos ? 0 : cut);
        } else if (in == "." || in == "..") {
            in = {};
        } else {
            const std::size_t next = in.find('/', in[0] == '/' ? 1 : 0);
            const std::size_t n = next == std::string_view::npos ? in.size() : next;
            out.append(in.substr(0, n));
            in.remove_prefix(n);
        }
    }
    return out;
}

std::string clean_reference(std::string_view ref) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; };
    while (!ref.empty() && is_space(ref.front())) ref.remove_prefix(1);
    while (!ref.empty() && is_space(ref.back())) ref.remove_suffix(1);
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(ref.size());
    for (char ch : ref) {
        const auto c = static_cast<unsigned char>(ch);
        if (c == '\t' || c == '\n' || c == '\r') continue;
        if (is_forbidden_byte(c)) {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xf];
        } else {
            out += ch;
        }
    }
    return out;
}

}  // namespace

std::string canonicalize_url(std::string_view url) {
    for (std::size_t i = 0; i < url.size(); ++i)
        if (is_forbidden_byte(static_cast<unsigned char>(url[i]))) throw UrlError(std::string(url), i);

    const std::size_t slen = scheme_length(url);
    if (slen == 0) throw UrlError(std::string(url), 0);
    std::string scheme(url.substr(0, slen));
    std::transform(scheme.begin(), scheme.end(), scheme.begin(), lower);
    if (scheme != "http" && scheme != "https") throw UrlError(std::string(url), 0);
    if (url.substr(slen, 3) != "://") throw UrlError(std::string(url), slen);

    const std::size_t auth_start = slen + 3;
    const std::size_t auth_end = std::min(url.find_first_of("/?#", auth_start), url.size());
    std::string_view authority = url.substr(auth_start, auth_end - auth_start);

    std::string out = scheme + "://";
    std::size_t host_offset = auth_start;
    if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
        out.append(authority.substr(0, at + 1));
        authority.remove_prefix(at + 1);
        host_offset += at + 1;
    }

    std::string_view host = authority;
    std::string_view port;
    if (!host.empty() && host.front() == '[') {
        const auto close = host.find(']');
        if (close == std::string_view::npos) throw UrlError(std::string(url), host_offset);
        for (std::size_t i = 1; i < close; ++i) {
            const char c = host[i];
            if (!(std::isxdigit(static_cast<unsigned char>(c)) || c == ':' || c == '.'))
                throw UrlError(std::string(url), host_offset + i);
        }
        if (close + 1 < host.size()) {
            if (host[close + 1] != ':') throw UrlError(std::string(url), host_offset + close + 1);
            port = host.substr(close + 2);
        }
        host = host.substr(0, close + 1);
    } else {
        if (const auto colon = host.find(':'); colon != std::string_view::npos) {
            port = host.substr(colon + 1);
            host = host.substr(0, colon);
        }
        for (std::size_t i = 0; i < host.size(); ++i)
            if (!is_host_byte(host[i])) throw UrlError(std::string(url), host_offset + i);
    }
    if (host.empty()) throw UrlError(std::string(url), host_offset);

    const std::size_t port_offset = host_offset + host.size() + 1;
    for (std::size_t i = 0; i < port.size(); ++i)
        if (!is_digit(port[i])) throw UrlError(std::string(url), port_offset + i);
    unsigned port_value = 0;
    if (!port.empty()) {
        const auto [p, ec] = std::from_chars(port.data(), port.data() + port.size(), port_value);
        if (ec != std::errc{} || port_value > 65535) throw UrlError(std::string(url), port_offset);
    }

    for (char c : host) out += lower(c);
    const bool default_port = (scheme == "http" && port_value == 80) || (scheme == "https" && port_value == 443);
    if (!port.empty() && !default_port) {
        out += ':';
        out += std::to_string(port_value);
    }

    std::string_view rest = url.substr(auth_end);
    if (const auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
    if (rest.empty() || rest.front() != '/') out += '/';
    out.append(rest);
    return out;
}

std::string_view url_host(std::string_view canonical_url) {
    const auto sep = canonical_url.find("://");
    if (sep == std::string_view::npos) return {};
    std::string_view auth = canonical_url.substr(sep + 3);
    auth = auth.substr(0, std::min(auth.find_first_of("/?#"), auth.size()));
    if (const auto at = auth.rfind('@'); at != std::string_view::npos) auth.remove_prefix(at + 1);
    if (!auth.empty() && auth.front() == '[') return auth.substr(0, auth.find(']') + 1);
    return auth.substr(0, std::min(auth.find(':'), auth.size()));
}

std::string resolve_url(std::string_view base, std::string_view reference) {
    const std::string ref = clean_reference(reference);
    try {
        const std::string canonical_base = canonicalize_url(base);
        const Parts b = split_canonical(canonical_base);
        std::string target;

        if (const std::size_t slen = scheme_length(ref); slen > 0) {
            std::string scheme(ref.substr(0, slen));
            std::transform(scheme.begin(), scheme.end(), scheme.begin(), lower);
            if (scheme != "http" && scheme != "https") return {};
            const std::string canonical = canonicalize_url(ref);
            const Parts r = split_canonical(canonical);
            target = std::string(r.origin) + remove_dot_segments(r.path) + std::string(r.query);
        } else if (ref.starts_with("//")) {
            const std::string scheme(b.origin.substr(0, b.origin.find(':')));
            const std::string canonical = canonicalize_url(scheme + ":" + ref);
            const Parts r = split_canonical(canonical);
            target = std::string(r.origin) + remove_dot_segments(r.path) + std::string(r.query);
        } else if (ref.empty() || ref.front() == '#') {
            target = canonical_base;
        } else if (ref.front() == '?') {
            target = std::string(b.origin) + std::string(b.path) + ref;
        } else {
            const std::size_t q = std::min(ref.find_first_of("?#"), ref.size());
            const std::string_view ref_path = std::string_view(ref).substr(0, q);
            const std::string_view tail = std::string_view(ref).substr(q);
            std::string merged;
            if (ref_path.front() == '/') {
                merged = std::string(ref_path);
            } else {
                merged = std::string(b.path.substr(0, b.path.rfind('/') + 1));
                merged += ref_path;
            }
            target = std::string(b.origin) + remove_dot_segments(merged) + std::string(tail);
        }
        return canonicalize_url(target);
    } catch (const UrlError&) {
        return {};
    }
}

}  // namespace subcollect
