// Copyright 2026  The snrbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SNRBENCH_ERROR_H_
#define SNRBENCH_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace snrbench {

enum class ErrorCode {
  // audio_io
  kMalformedContainer,
  kUnsupportedEncoding,
  kEmptyPayload,
  kIoFailure,
  kClippingDetected,
  // snr_mixer
  kSilentInput,
  // corpus_manifest
  kMalformedLine,
  kUnknownLabel,
  kDuplicateUttId,
  kEmptyCatalog,
  kSchemaViolation,
  // condition_sampler
  kEmptyNoiseCatalog,
  // baseline_features
  kTooShort,
  kDegenerateLabels,
  kDimMismatch,
  // metrics
  kSingleClass,
  // generic
  kInvalidArgument,
  kConfigError,
};

// Coarse grouping used to pick CLI exit codes.
enum class ErrorKind { kConfig, kData, kInternal };

std::string_view ErrorCodeName(ErrorCode code);
ErrorKind KindOf(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }
  ErrorKind kind() const { return KindOf(code_); }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedContainer: return "MalformedContainer";
    case ErrorCode::kUnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::kEmptyPayload: return "EmptyPayload";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kClippingDetected: return "ClippingDetected";
    case ErrorCode::kSilentInput: return "SilentInput";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kDuplicateUttId: return "DuplicateUttId";
    case ErrorCode::kEmptyCatalog: return "EmptyCatalog";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kEmptyNoiseCatalog: return "EmptyNoiseCatalog";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

inline ErrorKind KindOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kConfigError:
      return ErrorKind::kConfig;
    default:
      return ErrorKind::kData;
  }
}

}  // namespace snrbench

#endif  // SNRBENCH_ERROR_H_
