#pragma once

#include <charconv>
#include <string>

namespace subcollect {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_real(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

}  // namespace subcollect
