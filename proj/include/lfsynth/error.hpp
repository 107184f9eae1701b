// Copyright 2026 The lfsynth Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lfs {

// Every failure the library reports. The C API mirrors these one-to-one.
enum class Errc {
  kInvalidArgument = 1,
  kIoFailure,
  kMalformedHeader,
  kUnsupportedEncoding,
  kInvalidRate,
  kSilentSignal,
  kRateMismatch,
  kOverlapTooLong,
  kEmptyImpulse,
  kAllSilent,
  kNoActivity,
  kTooShort,
  kCodecProcessFailed,
  kOutputMissing,
  kTimeout,
  kSilentInput,
  kSilentNoise,
  kInsufficientPool,
  kInvalidCounts,
  kMissingSegment,
  kSchemaMismatch,
  kMalformedLine,
  kUnknownUtterance,
  kEmptyFile,
  kOneClassOnly,
  kMissingRatio,
  kEmptyInput,
  kEmptyList,
  kUnknownPartition,
  kConfigError,
  kMissingScores,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lfs
