#include "circlaw/error.hpp"

namespace circlaw {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_spec: return "invalid-spec";
    case ErrorCode::domain: return "domain";
    case ErrorCode::eigensolver: return "eigensolver";
    case ErrorCode::branch_failure: return "branch-failure";
    case ErrorCode::tolerance: return "tolerance";
    case ErrorCode::resolution: return "resolution";
    case ErrorCode::singularity: return "singularity";
    case ErrorCode::invariant_violation: return "invariant-violation";
    case ErrorCode::not_implemented: return "not-implemented";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace circlaw
