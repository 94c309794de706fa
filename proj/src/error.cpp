#include "limterm/error.hpp"

namespace limterm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::Underflow: return "Underflow";
  case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
  case ErrorKind::LengthMismatch: return "LengthMismatch";
  case ErrorKind::InvalidSequence: return "InvalidSequence";
  case ErrorKind::UnboundVariable: return "UnboundVariable";
  case ErrorKind::DivergentSum: return "DivergentSum";
  case ErrorKind::TheoryMismatch: return "TheoryMismatch";
  case ErrorKind::InfiniteCarrier: return "InfiniteCarrier";
  case ErrorKind::InvalidAlpha: return "InvalidAlpha";
  case ErrorKind::NotHomomorphism: return "NotHomomorphism";
  case ErrorKind::LevelwiseNotEpi: return "LevelwiseNotEpi";
  case ErrorKind::DepthExceeded: return "DepthExceeded";
  case ErrorKind::Parse: return "ParseError";
  case ErrorKind::Internal: return "InternalError";
  }
  return "Unknown";
}

} // namespace limterm
