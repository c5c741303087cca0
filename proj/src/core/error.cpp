#include "structdae/error.hpp"

namespace structdae {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Dimension: return "dimension";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Singular: return "singular";
    case ErrorCode::Rank: return "rank";
    case ErrorCode::Structure: return "structure";
    case ErrorCode::Regularity: return "regularity";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace structdae
