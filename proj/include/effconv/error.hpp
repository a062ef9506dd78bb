#pragma once

#include <stdexcept>
#include <string>

namespace effconv {

enum class ErrorKind {
  NameViolation,
  MonotonicityViolation,
  MalformedInterval,
  EmptyCompact,
  InsufficientNameProgress,
  UnsupportedMeasure,
  SearchExhausted,
  DivergenceDetected,
  DuplicateEnumeration,
  CoverSearchExhausted,
  Precondition,
  Parse,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace effconv
