#include "wellvoice/error.hpp"

namespace wellvoice {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kEmptyTranscript: return "EmptyTranscript";
    case ErrorCode::kMissingPrompt: return "MissingPrompt";
    case ErrorCode::kIncompleteSession: return "IncompleteSession";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooFewRows: return "TooFewRows";
    case ErrorCode::kNTooLarge: return "NTooLarge";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kTooFewSubjects: return "TooFewSubjects";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMalformedManifest: return "MalformedManifest";
    case ErrorCode::kMalformedFile: return "MalformedFile";
  }
  return "Unknown";
}

}  // namespace wellvoice
