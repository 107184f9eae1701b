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

#include "lfsynth/error.hpp"

namespace lfs {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kIoFailure: return "IoFailure";
    case Errc::kMalformedHeader: return "MalformedHeader";
    case Errc::kUnsupportedEncoding: return "UnsupportedEncoding";
    case Errc::kInvalidRate: return "InvalidRate";
    case Errc::kSilentSignal: return "SilentSignal";
    case Errc::kRateMismatch: return "RateMismatch";
    case Errc::kOverlapTooLong: return "OverlapTooLong";
    case Errc::kEmptyImpulse: return "EmptyImpulse";
    case Errc::kAllSilent: return "AllSilent";
    case Errc::kNoActivity: return "NoActivity";
    case Errc::kTooShort: return "TooShort";
    case Errc::kCodecProcessFailed: return "CodecProcessFailed";
    case Errc::kOutputMissing: return "OutputMissing";
    case Errc::kTimeout: return "Timeout";
    case Errc::kSilentInput: return "SilentInput";
    case Errc::kSilentNoise: return "SilentNoise";
    case Errc::kInsufficientPool: return "InsufficientPool";
    case Errc::kInvalidCounts: return "InvalidCounts";
    case Errc::kMissingSegment: return "MissingSegment";
    case Errc::kSchemaMismatch: return "SchemaMismatch";
    case Errc::kMalformedLine: return "MalformedLine";
    case Errc::kUnknownUtterance: return "UnknownUtterance";
    case Errc::kEmptyFile: return "EmptyFile";
    case Errc::kOneClassOnly: return "OneClassOnly";
    case Errc::kMissingRatio: return "MissingRatio";
    case Errc::kEmptyInput: return "EmptyInput";
    case Errc::kEmptyList: return "EmptyList";
    case Errc::kUnknownPartition: return "UnknownPartition";
    case Errc::kConfigError: return "ConfigError";
    case Errc::kMissingScores: return "MissingScores";
  }
  return "Unknown";
}

}  // namespace lfs
