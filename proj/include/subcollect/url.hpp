#pragma once

#include <string>
#include <string_view>

namespace subcollect {

/// Lowercases scheme and host, drops the fragment and default ports, turns
/// an empty path into "/". Path and query bytes are kept verbatim.
/// Throws UrlError carrying the offset of the first offending byte.
std::string canonicalize_url(std::string_view url);

/// Host of a canonical URL, without port.
std::string_view url_host(std::string_view canonical_url);

/// Resolves `reference` against an absolute `base`. Returns an empty string
/// when the reference has a non-http(s) scheme or cannot be made canonical.
std::string resolve_url(std::string_view base, std::string_view reference);

}  // namespace subcollect
