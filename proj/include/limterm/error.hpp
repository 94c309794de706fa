#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace limterm {

enum class ErrorKind {
  Underflow,
  IndexOutOfRange,
  LengthMismatch,
  InvalidSequence,
  UnboundVariable,
  DivergentSum,
  TheoryMismatch,
  InfiniteCarrier,
  InvalidAlpha,
  NotHomomorphism,
  LevelwiseNotEpi,
  DepthExceeded,
  Parse,
  Internal,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// that callers (and the CLI exit-code mapping) can dispatch on it.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace limterm
