#include "anderson/error.hpp"

namespace anderson {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::NonpositiveSlope: return "nonpositive-slope";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace anderson
