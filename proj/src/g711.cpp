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

#include "lfsynth/g711.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace lfs {

namespace {

constexpr std::uint8_t kSignBit = 0x80;
constexpr std::uint8_t kQuantMask = 0x0f;
constexpr std::uint8_t kSegMask = 0x70;
constexpr int kSegShift = 4;

constexpr std::array<int, 8> kALawSegEnd = {0x1f, 0x3f, 0x7f, 0xff,
                                            0x1ff, 0x3ff, 0x7ff, 0xfff};
constexpr std::array<int, 8> kMuLawSegEnd = {0x3f, 0x7f, 0xff, 0x1ff,
                                             0x3ff, 0x7ff, 0xfff, 0x1fff};
constexpr int kMuLawBias = 0x84;  // 16-bit domain
constexpr int kMuLawClip = 8159;  // 14-bit domain

int segment_of(int value, const std::array<int, 8>& ends) {
  for (int i = 0; i < 8; ++i) {
    if (value <= ends[i]) return i;
  }
  return 8;
}

std::uint8_t alaw_encode(double x) {
  // 13-bit two's-complement sample, then magnitude as in the reference
  // (negative values use the one's complement).
  const double scaled = std::floor(std::clamp(x, -1.0, 1.0) * 4096.0);
  std::uint8_t mask;
  int mag;
  if (scaled >= 0.0) {
    mask = 0xd5;
    mag = static_cast<int>(scaled);
  } else {
    mask = 0x55;
    mag = static_cast<int>(-scaled) - 1;
  }
  const int seg = segment_of(mag, kALawSegEnd);
  if (seg >= 8) return static_cast<std::uint8_t>(0x7f ^ mask);
  int aval = seg << kSegShift;
  aval |= seg < 2 ? (mag >> 1) & kQuantMask : (mag >> seg) & kQuantMask;
  return static_cast<std::uint8_t>(aval ^ mask);
}

double alaw_decode(std::uint8_t codeword) {
  const int a = codeword ^ 0x55;
  int t = (a & kQuantMask) << 4;
  const int seg = (a & kSegMask) >> kSegShift;
  switch (seg) {
    case 0:
      t += 8;
      break;
    case 1:
      t += 0x108;
      break;
    default:
      t += 0x108;
      t <<= seg - 1;
  }
  return ((a & kSignBit) ? t : -t) / 32768.0;
}

std::uint8_t ulaw_encode(double x) {
  const bool negative = std::signbit(x);
  const double mag_d = std::floor(std::min(std::abs(x), 1.0) * 8192.0);
  int mag = std::min(static_cast<int>(mag_d), kMuLawClip);
  const std::uint8_t mask = negative ? 0x7f : 0xff;
  mag += kMuLawBias >> 2;
  const int seg = segment_of(mag, kMuLawSegEnd);
  if (seg >= 8) return static_cast<std::uint8_t>(0x7f ^ mask);
  const int uval = (seg << kSegShift) | ((mag >> (seg + 1)) & kQuantMask);
  return static_cast<std::uint8_t>(uval ^ mask);
}

double ulaw_decode(std::uint8_t codeword) {
  const int u = ~codeword & 0xff;
  int t = ((u & kQuantMask) << 3) + kMuLawBias;
  t <<= (u & kSegMask) >> kSegShift;
  const double magnitude = static_cast<double>(t - kMuLawBias) / 32768.0;
  return (u & kSignBit) ? -magnitude : magnitude;
}

}  // namespace

namespace g711 {

std::uint8_t encode(double x, G711Law law) {
  return law == G711Law::kALaw ? alaw_encode(x) : ulaw_encode(x);
}

double decode(std::uint8_t codeword, G711Law law) {
  return law == G711Law::kALaw ? alaw_decode(codeword) : ulaw_decode(codeword);
}

}  // namespace g711

Waveform compand_g711(const Waveform& w, G711Law law) {
  constexpr int kCodecRate = 8000;
  const Waveform narrow = resample(w, kCodecRate);
  std::vector<double> coded(narrow.size());
  for (std::size_t i = 0; i < narrow.size(); ++i) {
    coded[i] = g711::decode(g711::encode(narrow[i], law), law);
  }
  // Rounding in both resampling legs can drift by a few samples at rates
  // that are not multiples of 8 kHz; pin the length to the input.
  std::vector<double> out = resample(Waveform(std::move(coded), kCodecRate), w.sample_rate()).samples();
  out.resize(w.size(), 0.0);
  return Waveform(std::move(out), w.sample_rate());
}

}  // namespace lfs
