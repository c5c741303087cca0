#pragma once

#include <stdexcept>
#include <string>

namespace structdae {

/// Failure categories shared by every module. The C API maps each one onto an
/// `sdae_status` value, and the CLI maps those onto exit codes.
enum class ErrorCode {
  InvalidArgument,  // bad parameter value or usage
  Domain,           // time outside the interval of a function
  Dimension,        // shape mismatch
  Parse,            // malformed model / JSON input
  Singular,         // pointwise singular matrix where nonsingularity is required
  Rank,             // rank change or rank deficiency
  Structure,        // structural precondition (adjointness, definiteness, ...) violated
  Regularity,       // irregular pencil or non-regular algebraic block
  Unsupported,      // operation not defined for this kind of input
  Internal,         // internal consistency check failed
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace structdae
