#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lfcbf {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Formula text could not be parsed. `position` is a 0-based character
/// offset into the input string.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

/// A temporal interval with a > b, or a nested temporal operator outside
/// the supported fragment.
class FormulaError : public Error {
 public:
  using Error::Error;
};

/// Scenario cross-validation failed; `violations` lists every problem found.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations(std::move(violations)) {}
  std::vector<std::string> violations;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "scenario validation failed:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
};

/// Vector or matrix dimension does not match the network layout.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Barrier or controller queried past the end of the switching schedule.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

/// Raw-inequality mode hit an input singularity (a_u = 0) with a strictly
/// positive requirement; no finite input satisfies the constraint.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Trajectory does not cover the horizon needed by a formula.
class HorizonError : public Error {
 public:
  using Error::Error;
};

}  // namespace lfcbf
