#pragma once

#include <stdexcept>
#include <string>

namespace oran {

// Invalid argument or broken contract (bad index, value out of domain).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Operation called in the wrong lifecycle state (uninitialized env, stale cache).
class StateError : public std::runtime_error {
 public:
  explicit StateError(const std::string& what) : std::runtime_error(what) {}
};

// Queueing instability: arrival rate at or above service capacity.
class InstabilityError : public std::runtime_error {
 public:
  explicit InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite value surfaced during a numeric update.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Bad experiment configuration (missing checkpoint, empty input set, bad key).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Stored data violates an integrity requirement (e.g. zero behavior probability).
class DataIntegrityError : public std::runtime_error {
 public:
  explicit DataIntegrityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace oran
