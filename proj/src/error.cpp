#include "netml/error.hpp"

namespace netml {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kMalformedSpectra: return "MalformedSpectra";
    case ErrorCode::kMissingSpectra: return "MissingSpectra";
    case ErrorCode::kMissingLabels: return "MissingLabels";
    case ErrorCode::kMissingFaulty: return "MissingFaulty";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kEmptyHistory: return "EmptyHistory";
    case ErrorCode::kTooFewPairs: return "TooFewPairs";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kNonFiniteState: return "NonFiniteState";
  }
  return "Error";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig: return 2;
    case ErrorCode::kNonFiniteState: return 4;
    default: return 3;
  }
}

}  // namespace netml
