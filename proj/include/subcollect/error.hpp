#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace subcollect {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: spec files, flags, malformed identifiers.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Unreadable, truncated, or out-of-range archive data.
class IoError : public Error {
public:
    using Error::Error;
};

/// Archive bytes that were read but do not match their index entry.
class CorruptionError : public Error {
public:
    using Error::Error;
};

class UrlError : public ValidationError {
public:
    UrlError(const std::string& url, std::size_t position)
        : ValidationError("malformed URL '" + url + "' at byte " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace subcollect
