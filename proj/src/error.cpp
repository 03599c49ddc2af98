#include "decoy/error.h"

namespace decoy {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidPair: return "InvalidPair";
    case ErrorCode::kZeroRate: return "ZeroRate";
    case ErrorCode::kNegativeBound: return "NegativeBound";
    case ErrorCode::kNoSolution: return "NoSolution";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kNoData: return "NoData";
  }
  return "Unknown";
}

}  // namespace decoy
