#pragma once

#include <stdexcept>
#include <string>

namespace decoy {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidPair,
  kZeroRate,
  kNegativeBound,
  kNoSolution,
  kOverflow,
  kNoData,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status without string matching.
class DecoyError : public std::runtime_error {
 public:
  DecoyError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace decoy
