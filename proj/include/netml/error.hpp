#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netml {

enum class ErrorCode {
  kConfig,
  kMalformedInput,
  kMalformedSpectra,
  kMissingSpectra,
  kMissingLabels,
  kMissingFaulty,
  kDegenerateLabels,
  kEmptyHistory,
  kTooFewPairs,
  kUnknownId,
  kNonFiniteState,
};

std::string_view to_string(ErrorCode code);

/// Process exit status for an error: 2 config, 3 data, 4 numerical abort.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the error-code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace netml
