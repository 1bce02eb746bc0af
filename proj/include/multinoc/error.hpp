// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace multinoc {

// Base class for all errors raised by the simulator libraries.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument to a pure operation (out-of-range coordinate, bad size, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Invalid system or tool configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed input while parsing (packets, frames, object files, scripts).
// `offset` is the byte/flit/line position of the offending element when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long offset = -1)
        : Error(offset >= 0 ? what + " (at offset " + std::to_string(offset) + ")" : what),
          offset_(offset) {}
    long offset() const { return offset_; }

private:
    long offset_;
};

} // namespace multinoc
