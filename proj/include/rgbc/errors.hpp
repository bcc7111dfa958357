#pragma once

#include <stdexcept>
#include <string>

namespace rgbc {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem-level failures: missing files, unreadable or unwritable paths.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

/// Malformed file contents: bad magic, version mismatch, truncation,
/// checksum failure, unparsable records.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& what) : Error(what) {}
};

/// Invalid or inconsistent configuration, including query/archive
/// parameter mismatches.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace rgbc
