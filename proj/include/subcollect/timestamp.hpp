#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace subcollect {

/// Seconds since the Unix epoch, UTC.
using EpochSeconds = std::int64_t;

bool is_valid_timestamp14(std::string_view ts);

/// Throws ValidationError unless `ts` is 14 digits naming a real UTC instant.
EpochSeconds timestamp14_to_epoch(std::string_view ts);
std::string epoch_to_timestamp14(EpochSeconds t);

/// "YYYY-MM-DDThh:mm:ssZ" (fractional seconds tolerated and dropped) -> timestamp14.
std::optional<std::string> iso8601_to_timestamp14(std::string_view iso);

int timestamp_year(std::string_view ts);

}  // namespace subcollect
