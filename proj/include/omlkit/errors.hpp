#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace omlkit {

/// Malformed MMP / graph / condition text. Carries the byte offset of the
/// first offending character.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// An operation was called on an input outside its domain (e.g. a
/// non-3-regular hypergraph passed to dualize).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A node/time/tuple budget ran out before the operation finished.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace omlkit
