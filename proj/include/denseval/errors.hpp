#pragma once

#include <stdexcept>
#include <string>

namespace denseval {

// File could not be read or decoded; message carries the location.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Well-formed input that violates a documented invariant.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Persisted artifact written by an incompatible format version.
class VersionError : public std::runtime_error {
public:
  explicit VersionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace denseval
