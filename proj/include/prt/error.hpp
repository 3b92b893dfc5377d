#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prt {

/// Invalid argument to an engine operation (out-of-range band, mismatched
/// degrees, non-orthonormal rotation, ...).
class ArgumentError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A numeric quantity that must be finite was not.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input stream. `offset()` is the byte position where decoding
/// failed.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string &what, std::size_t offset)
        : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
          detail_(what), offset_(offset) {}

    std::size_t offset() const { return offset_; }
    /// Message without the offset suffix.
    const std::string &detail() const { return detail_; }

  private:
    std::string detail_;
    std::size_t offset_;
};

/// File could not be opened or a required element is missing.
class LoadError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NormalizationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace prt
