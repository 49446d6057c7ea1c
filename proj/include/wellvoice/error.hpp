#pragma once

#include <stdexcept>
#include <string>

namespace wellvoice {

enum class ErrorCode {
  kUnsupportedFormat,
  kEmptyAudio,
  kIoFailure,
  kEmptyReference,
  kEmptyTranscript,
  kMissingPrompt,
  kIncompleteSession,
  kLengthMismatch,
  kTooFewRows,
  kNTooLarge,
  kDimensionMismatch,
  kNonFiniteLoss,
  kTooFewSubjects,
  kInvalidArgument,
  kMalformedManifest,
  kMalformedFile,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wellvoice
