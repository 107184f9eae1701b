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

#include <cstdint>

#include "lfsynth/audio.hpp"

namespace lfs {

enum class G711Law { kALaw, kMuLaw };

namespace g711 {

// Sample-level codec on full-scale-normalized values. Segmented tables as in
// the G.711 reference: A-law on 13-bit magnitudes (A = 87.6), mu-law on
// 14-bit magnitudes with bias 33 (mu = 255). Codewords carry the standard
// even-bit (A-law) and bit-inversion (mu-law) transmission masks.
//
// The mu-law negative-zero codeword 0x7F decodes to -0.0 so its sign
// survives a decode/encode cycle.
std::uint8_t encode(double x, G711Law law);
double decode(std::uint8_t codeword, G711Law law);

}  // namespace g711

// Resamples to 8 kHz, quantizes every sample through the 8-bit codec and
// back, then resamples to the input rate.
Waveform compand_g711(const Waveform& w, G711Law law);

}  // namespace lfs
