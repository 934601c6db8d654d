#include "lognl/error.hpp"

namespace lognl {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Argument: return "argument";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Contract: return "contract";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::KernelDefect: return "kernel-defect";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Diagnostic: return "diagnostic";
    case ErrorKind::Fit: return "fit";
    case ErrorKind::Numerical: return "numerical";
  }
  return "unknown";
}

}  // namespace lognl
