#include "subcollect/timestamp.hpp"

#include "subcollect/error.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>

namespace subcollect {

namespace {

struct Civil {
    int year, month, day, hour, minute, second;
};

int digits(std::string_view s, std::size_t pos, std::size_t n) {
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) v = v * 10 + (s[i] - '0');
    return v;
}

std::optional<EpochSeconds> civil_to_epoch(const Civil& c) {
    using namespace std::chrono;
    const year_month_day ymd{year{c.year}, month{static_cast<unsigned>(c.month)},
                             day{static_cast<unsigned>(c.day)}};
    if (!ymd.ok() || c.hour > 23 || c.minute > 59 || c.second > 59) return std::nullopt;
    const auto days = sys_days{ymd}.time_since_epoch().count();
    return static_cast<EpochSeconds>(days) * 86400 + c.hour * 3600 + c.minute * 60 + c.second;
}

std::optional<EpochSeconds> parse14(std::string_view ts) {
    if (ts.size() != 14 || !std::all_of(ts.begin(), ts.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
        return std::nullopt;
    return civil_to_epoch({digits(ts, 0, 4), digits(ts, 4, 2), digits(ts, 6, 2), digits(ts, 8, 2),
                           digits(ts, 10, 2), digits(ts, 12, 2)});
}

}  // namespace

bool is_valid_timestamp14(std::string_view ts) { return parse14(ts).has_value(); }

EpochSeconds timestamp14_to_epoch(std::string_view ts) {
    if (auto t = parse14(ts)) return *t;
    throw ValidationError("invalid timestamp14 '" + std::string(ts) + "'");
}

std::string epoch_to_timestamp14(EpochSeconds t) {
    using namespace std::chrono;
    const auto day_count = static_cast<int>((t >= 0 ? t : t - 86399) / 86400);
    const EpochSeconds rem = t - static_cast<EpochSeconds>(day_count) * 86400;
    const year_month_day ymd{sys_days{days{day_count}}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d%02u%02u%02d%02d%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
    return buf;
}

std::optional<std::string> iso8601_to_timestamp14(std::string_view iso) {
    // YYYY-MM-DDThh:mm:ss[.fff]Z
    if (iso.size() < 20) return std::nullopt;
    static constexpr std::string_view shape = "dddd-dd-ddTdd:dd:dd";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        const char want = shape[i];
        const char got = iso[i];
        if (want == 'd' ? (got < '0' || got > '9') : got != want) return std::nullopt;
    }
    std::size_t pos = shape.size();
    if (iso[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < iso.size() && iso[pos] >= '0' && iso[pos] <= '9') ++pos;
        if (pos == start) return std::nullopt;
    }
    if (pos + 1 != iso.size() || iso[pos] != 'Z') return std::nullopt;
    std::string ts;
    ts.reserve(14);
    for (std::size_t i = 0; i < shape.size(); ++i)
        if (shape[i] == 'd') ts += iso[i];
    if (!is_valid_timestamp14(ts)) return std::nullopt;
    return ts;
}

int timestamp_year(std::string_view ts) {
    int year = 0;
    std::from_chars(ts.data(), ts.data() + std::min<std::size_t>(4, ts.size()), year);
    return year;
}

}  // namespace subcollect
