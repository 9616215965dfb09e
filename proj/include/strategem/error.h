// Copyright 2026 The Strategem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STRATEGEM_ERROR_H_
#define STRATEGEM_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace strategem {

// Every failure surfaced by the library carries one of these codes so callers
// (and the CLI exit-code mapping) can branch without parsing messages.
enum class ErrorCode {
  kInvalidSpec,
  kInfeasibleAction,
  kUnsupportedGame,
  kAsymmetricGame,
  kNoSymmetricEquilibrium,
  kMissingResponseTag,
  kUnparseableContent,
  kMalformedTrace,
  kMissingFinalDecision,
  kNoMatchingStep,
  kNoClassifiedTrials,
  kEmptyRun,
  kMismatchedSupport,
  kMissingPlaceholder,
  kUnknownPlaceholder,
  kTimeout,
  kTransportError,
  kRateLimited,
  kMalformedEndpointReply,
  kConfigError,
  kOutputPathUnwritable,
  kAllTrialsFailed,
  kIoError,
  kCorruptLog,
  kMissingTraces,
  kMissingReferenceFile,
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kInfeasibleAction: return "InfeasibleAction";
    case ErrorCode::kUnsupportedGame: return "UnsupportedGame";
    case ErrorCode::kAsymmetricGame: return "AsymmetricGame";
    case ErrorCode::kNoSymmetricEquilibrium: return "NoSymmetricEquilibrium";
    case ErrorCode::kMissingResponseTag: return "MissingResponseTag";
    case ErrorCode::kUnparseableContent: return "UnparseableContent";
    case ErrorCode::kMalformedTrace: return "MalformedTrace";
    case ErrorCode::kMissingFinalDecision: return "MissingFinalDecision";
    case ErrorCode::kNoMatchingStep: return "NoMatchingStep";
    case ErrorCode::kNoClassifiedTrials: return "NoClassifiedTrials";
    case ErrorCode::kEmptyRun: return "EmptyRun";
    case ErrorCode::kMismatchedSupport: return "MismatchedSupport";
    case ErrorCode::kMissingPlaceholder: return "MissingPlaceholder";
    case ErrorCode::kUnknownPlaceholder: return "UnknownPlaceholder";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kTransportError: return "TransportError";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kMalformedEndpointReply: return "MalformedEndpointReply";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kOutputPathUnwritable: return "OutputPathUnwritable";
    case ErrorCode::kAllTrialsFailed: return "AllTrialsFailed";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kCorruptLog: return "CorruptLog";
    case ErrorCode::kMissingTraces: return "MissingTraces";
    case ErrorCode::kMissingReferenceFile: return "MissingReferenceFile";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace strategem

#endif  // STRATEGEM_ERROR_H_
