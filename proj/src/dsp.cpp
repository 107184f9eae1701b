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
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "lfsynth/audio.hpp"
#include "lfsynth/error.hpp"

namespace lfs {

namespace {

// Zero crossings of the sinc on each side of the kernel centre.
constexpr int kHalfZeroCrossings = 32;
constexpr double kKaiserBeta = 8.6;
// Passband edge as a fraction of the lower Nyquist frequency.
constexpr double kRolloff = 0.945;

double kaiser(double x, double inv_i0_beta) {
  // x in [-1, 1]
  const double arg = 1.0 - x * x;
  if (arg <= 0.0) return 0.0;
  return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(arg)) * inv_i0_beta;
}

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// fftw planning is not thread-safe; execution on distinct plans is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> direct_convolve(std::span<const double> x,
                                    std::span<const double> h,
                                    std::size_t out_len) {
  std::vector<double> y(out_len, 0.0);
  for (std::size_t n = 0; n < out_len; ++n) {
    double acc = 0.0;
    const std::size_t kmax = std::min(h.size() - 1, n);
    for (std::size_t k = 0; k <= kmax; ++k) {
      if (n - k < x.size()) acc += h[k] * x[n - k];
    }
    y[n] = acc;
  }
  return y;
}

std::vector<double> fft_convolve(std::span<const double> x,
                                 std::span<const double> h,
                                 std::size_t out_len) {
  const std::size_t full = x.size() + h.size() - 1;
  const std::size_t n = next_pow2(full);
  const std::size_t bins = n / 2 + 1;

  double* buf_x = fftw_alloc_real(n);
  double* buf_h = fftw_alloc_real(n);
  fftw_complex* spec_x = fftw_alloc_complex(bins);
  fftw_complex* spec_h = fftw_alloc_complex(bins);
  fftw_plan fx, fh, inv;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fx = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf_x, spec_x, FFTW_ESTIMATE);
    fh = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf_h, spec_h, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_x, buf_x, FFTW_ESTIMATE);
  }
  std::fill(buf_x, buf_x + n, 0.0);
  std::fill(buf_h, buf_h + n, 0.0);
  std::copy(x.begin(), x.end(), buf_x);
  std::copy(h.begin(), h.end(), buf_h);
  fftw_execute(fx);
  fftw_execute(fh);
  for (std::size_t k = 0; k < bins; ++k) {
    const double re = spec_x[k][0] * spec_h[k][0] - spec_x[k][1] * spec_h[k][1];
    const double im = spec_x[k][0] * spec_h[k][1] + spec_x[k][1] * spec_h[k][0];
    spec_x[k][0] = re;
    spec_x[k][1] = im;
  }
  fftw_execute(inv);

  std::vector<double> y(out_len);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < out_len; ++i) y[i] = buf_x[i] * scale;

  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fx);
    fftw_destroy_plan(fh);
    fftw_destroy_plan(inv);
  }
  fftw_free(buf_x);
  fftw_free(buf_h);
  fftw_free(spec_x);
  fftw_free(spec_h);
  return y;
}

}  // namespace

Waveform resample(const Waveform& w, int target_rate) {
  if (target_rate <= 0) {
    throw Error(Errc::kInvalidRate,
                "target rate must be positive, got " + std::to_string(target_rate));
  }
  const int source_rate = w.sample_rate();
  if (target_rate == source_rate) return w;

  const auto in_len = static_cast<long long>(w.size());
  const long long out_len =
      (in_len * target_rate + source_rate / 2) / source_rate;

  // Output sample n sits at input position n * up / down; the fractional
  // part cycles through `up` phases, each with its own tap set.
  const long long g = std::gcd(source_rate, target_rate);
  const long long up = target_rate / g;
  const long long down = source_rate / g;

  const double ratio = static_cast<double>(target_rate) / source_rate;
  const double cutoff = kRolloff * std::min(1.0, ratio);
  const double half_width = kHalfZeroCrossings / cutoff;
  const double inv_i0 = 1.0 / std::cyl_bessel_i(0.0, kKaiserBeta);

  struct Phase {
    long long first = 0;
    std::vector<double> taps;
  };
  auto make_phase = [&](long long phase) {
    const double frac = static_cast<double>(phase) / static_cast<double>(up);
    Phase p;
    p.first = static_cast<long long>(std::ceil(frac - half_width));
    const auto last = static_cast<long long>(std::floor(frac + half_width));
    for (long long j = p.first; j <= last; ++j) {
      const double d = frac - static_cast<double>(j);
      p.taps.push_back(cutoff * sinc(cutoff * d) * kaiser(d / half_width, inv_i0));
    }
    return p;
  };
  constexpr long long kMaxCachedPhases = 4096;
  std::vector<Phase> cache;
  if (up <= kMaxCachedPhases) {
    cache.reserve(static_cast<std::size_t>(up));
    for (long long ph = 0; ph < up; ++ph) cache.push_back(make_phase(ph));
  }

  const auto& x = w.samples();
  std::vector<double> out(static_cast<std::size_t>(out_len), 0.0);
  for (long long n = 0; n < out_len; ++n) {
    const long long pos = n * down;
    const long long base = pos / up;
    const long long phase = pos % up;
    Phase local;
    const Phase& p = cache.empty() ? (local = make_phase(phase)) : cache[phase];
    double acc = 0.0;
    for (std::size_t i = 0; i < p.taps.size(); ++i) {
      const long long k = base + p.first + static_cast<long long>(i);
      if (k < 0) continue;
      if (k >= in_len) break;
      acc += x[static_cast<std::size_t>(k)] * p.taps[i];
    }
    out[static_cast<std::size_t>(n)] = acc;
  }
  return Waveform(std::move(out), target_rate);
}

Waveform convolve(const Waveform& w, const Waveform& impulse) {
  if (w.sample_rate() != impulse.sample_rate()) {
    throw Error(Errc::kRateMismatch,
                "signal " + std::to_string(w.sample_rate()) + " Hz, impulse " +
                    std::to_string(impulse.sample_rate()) + " Hz");
  }
  if (impulse.empty()) throw Error(Errc::kEmptyImpulse, "impulse response has no samples");

  double peak = 0.0;
  for (double s : impulse.samples()) peak = std::max(peak, std::abs(s));
  if (peak == 0.0) throw Error(Errc::kEmptyImpulse, "impulse response is all zeros");
  std::vector<double> h(impulse.samples());
  for (double& s : h) s /= peak;

  if (w.empty()) return w;
  // Short kernels are cheaper (and exact) in the time domain.
  const bool direct = h.size() <= 64 || w.size() * h.size() <= (1u << 16);
  std::vector<double> y = direct ? direct_convolve(w.view(), h, w.size())
                                 : fft_convolve(w.view(), h, w.size());
  return Waveform(std::move(y), w.sample_rate());
}

}  // namespace lfs
