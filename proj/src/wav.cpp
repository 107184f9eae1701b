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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "lfsynth/audio.hpp"
#include "lfsynth/error.hpp"

namespace lfs {

namespace {

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xfffe;

}  // namespace

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoFailure, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::kIoFailure, "read failed: " + path.string());

  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t n = bytes.size();
  if (n < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0) {
    throw Error(Errc::kMalformedHeader, path.string() + " is not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= n) {
    const unsigned char* chunk = p + pos;
    const std::uint32_t len = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (len < 16 || body + 16 > n) {
        throw Error(Errc::kMalformedHeader, "truncated fmt chunk in " + path.string());
      }
      const std::uint16_t format = le16(p + body);
      const std::uint16_t channels = le16(p + body + 2);
      rate = le32(p + body + 4);
      const std::uint16_t bits = le16(p + body + 14);
      std::uint16_t effective = format;
      if (format == kFormatExtensible && len >= 26 && body + 26 <= n) {
        effective = le16(p + body + 24);
      }
      if (effective != kFormatPcm) {
        throw Error(Errc::kUnsupportedEncoding,
                    path.string() + ": format tag " + std::to_string(effective) +
                        " is not integer PCM");
      }
      if (channels != 1) {
        throw Error(Errc::kUnsupportedEncoding,
                    path.string() + ": " + std::to_string(channels) +
                        " channels, only mono is supported");
      }
      if (bits != 16) {
        throw Error(Errc::kUnsupportedEncoding,
                    path.string() + ": " + std::to_string(bits) +
                        "-bit samples, only 16-bit is supported");
      }
      if (rate == 0) throw Error(Errc::kMalformedHeader, "zero sample rate in " + path.string());
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = p + body;
      // Streaming writers sometimes leave the length unset; take what exists.
      data_len = std::min<std::size_t>(len, n - std::min(n, body));
      break;
    }
    pos = body + len + (len & 1u);
  }
  if (!have_fmt) throw Error(Errc::kMalformedHeader, "missing fmt chunk in " + path.string());
  if (data == nullptr) throw Error(Errc::kMalformedHeader, "missing data chunk in " + path.string());

  std::vector<double> samples(data_len / 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto v = static_cast<std::int16_t>(le16(data + 2 * i));
    samples[i] = static_cast<double>(v) / 32768.0;
  }
  return Waveform(std::move(samples), static_cast<int>(rate));
}

std::size_t write_wav(const Waveform& w, const std::filesystem::path& path) {
  std::size_t clipped = 0;
  const std::uint32_t data_len = static_cast<std::uint32_t>(w.size() * 2);

  std::string out;
  out.reserve(44 + data_len);
  out.append("RIFF");
  put32(out, 36 + data_len);
  out.append("WAVE");
  out.append("fmt ");
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(w.sample_rate()));
  put32(out, static_cast<std::uint32_t>(w.sample_rate()) * 2);
  put16(out, 2);
  put16(out, 16);
  out.append("data");
  put32(out, data_len);
  for (double s : w.samples()) {
    if (s > 1.0 || s < -1.0) ++clipped;
    const double q = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp(q, -32768.0, 32767.0));
    put16(out, static_cast<std::uint16_t>(v));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::kIoFailure, "cannot create " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(Errc::kIoFailure, "write failed: " + path.string());
  return clipped;
}

}  // namespace lfs
