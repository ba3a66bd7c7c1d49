// SPDX-License-Identifier: Apache-2.0
#include "bzk/extractor.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <vector>

namespace bzk::ext {

double ExtractorConfig::eps_x() const {
  return std::exp2(-0.5 * (static_cast<double>(k) - static_cast<double>(m)));
}

void ExtractorConfig::validate() const {
  if (n == 0 || m == 0) throw std::invalid_argument("ExtractorConfig: zero length");
  if (!(m <= k && k <= n)) throw std::invalid_argument("ExtractorConfig: need m <= k <= n");
}

namespace {

void check_shapes(const BitVec& raw, const ToeplitzSeed& seed, const ExtractorConfig& cfg) {
  cfg.validate();
  if (raw.size() != cfg.n) throw std::invalid_argument("extract: raw length != n");
  if (seed.bits.size() != cfg.seed_len())
    throw std::invalid_argument("extract: seed length != n+m-1");
}

}  // namespace

BitVec extract_naive(const BitVec& raw, const ToeplitzSeed& seed, const ExtractorConfig& cfg) {
  check_shapes(raw, seed, cfg);
  BitVec out(cfg.m);
  for (std::uint64_t i = 0; i < cfg.m; ++i) {
    unsigned acc = 0;
    for (std::uint64_t j = 0; j < cfg.n; ++j)
      acc ^= (seed.bits.get(i + cfg.n - 1 - j) & raw.get(j));
    out.set(i, acc & 1);
  }
  return out;
}

BitVec extract_packed(const BitVec& raw, const ToeplitzSeed& seed, const ExtractorConfig& cfg) {
  check_shapes(raw, seed, cfg);
  // Row i of T is the reversed seed window starting at offset m-1-i:
  // T[i][j] = srev[(m-1-i) + j] with srev[u] = seed[n+m-2-u].
  BitVec srev(cfg.seed_len());
  for (std::uint64_t u = 0; u < cfg.seed_len(); ++u)
    srev.set(u, seed.bits.get(cfg.n + cfg.m - 2 - u));

  const auto& rw = raw.words();
  const auto& sw = srev.words();
  const std::size_t nwords = rw.size();
  BitVec out(cfg.m);
  for (std::uint64_t i = 0; i < cfg.m; ++i) {
    const std::uint64_t off = cfg.m - 1 - i;
    const std::uint64_t word_off = off >> 6;
    const unsigned shift = static_cast<unsigned>(off & 63);
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < nwords; ++w) {
      std::uint64_t window = sw[word_off + w] >> shift;
      if (shift && word_off + w + 1 < sw.size())
        window |= sw[word_off + w + 1] << (64 - shift);
      acc ^= window & rw[w];
    }
    out.set(i, std::popcount(acc) & 1);
  }
  return out;
}

namespace {

struct FftwDeleter {
  void operator()(double* p) const { fftw_free(p); }
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

// Per-raw-block windowed correlation: only the m needed output lags are
// produced, so the transform length tracks the block size, not n+m.
class FftConvolver {
 public:
  FftConvolver(std::uint64_t block, std::uint64_t m) : block_(block), m_(m) {
    len_ = std::bit_ceil(block + m);
    re_.reset(static_cast<double*>(fftw_malloc(sizeof(double) * len_)));
    spec_a_.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (len_ / 2 + 1))));
    spec_b_.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (len_ / 2 + 1))));
    if (!re_ || !spec_a_ || !spec_b_) throw std::bad_alloc();
    fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(len_), re_.get(), spec_a_.get(), FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(static_cast<int>(len_), spec_a_.get(), re_.get(), FFTW_ESTIMATE);
    if (!fwd_ || !inv_) throw std::runtime_error("fftw plan creation failed");
  }

  ~FftConvolver() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
  }

  // acc[i] += conv(block_bits, window_bits)[i + bo - 1] for i in [0, m)
  void accumulate(const BitVec& raw, std::uint64_t o, std::uint64_t bo, const BitVec& seed,
                  std::uint64_t n, std::vector<std::int64_t>& acc) {
    const std::uint64_t wlen = bo + m_ - 1;
    // forward transform of the raw block
    std::memset(re_.get(), 0, sizeof(double) * len_);
    for (std::uint64_t u = 0; u < bo; ++u) re_[u] = raw.get(o + u) ? 1.0 : 0.0;
    fftw_execute_dft_r2c(fwd_, re_.get(), spec_b_.get());
    // forward transform of the seed window W[v] = seed[n-o-bo + v]
    const std::uint64_t base = n - o - bo;
    std::memset(re_.get(), 0, sizeof(double) * len_);
    for (std::uint64_t v = 0; v < wlen; ++v) re_[v] = seed.get(base + v) ? 1.0 : 0.0;
    fftw_execute_dft_r2c(fwd_, re_.get(), spec_a_.get());

    for (std::uint64_t t = 0; t < len_ / 2 + 1; ++t) {
      const double ar = spec_a_[t][0], ai = spec_a_[t][1];
      const double br = spec_b_[t][0], bi = spec_b_[t][1];
      spec_a_[t][0] = ar * br - ai * bi;
      spec_a_[t][1] = ar * bi + ai * br;
    }
    fftw_execute_dft_c2r(inv_, spec_a_.get(), re_.get());

    const double scale = 1.0 / static_cast<double>(len_);
    for (std::uint64_t i = 0; i < m_; ++i) {
      const double v = re_[(i + bo - 1) % len_] * scale;
      acc[i] += static_cast<std::int64_t>(std::llround(v));
    }
  }

 private:
  std::uint64_t block_, m_, len_;
  std::unique_ptr<double[], FftwDeleter> re_;
  std::unique_ptr<fftw_complex[], FftwDeleter> spec_a_, spec_b_;
  fftw_plan fwd_, inv_;
};

constexpr std::uint64_t kFftBlockBits = std::uint64_t{1} << 20;

}  // namespace

BitVec extract_fft(const BitVec& raw, const ToeplitzSeed& seed, const ExtractorConfig& cfg) {
  check_shapes(raw, seed, cfg);
  // out_i = sum_j seed[i+n-1-j] raw[j]. Work per raw block of size at most
  // B: the contribution is a linear convolution of the block with a seed
  // window of length B+m-1, read at lags [B-1, B+m-1). Counts stay below
  // 2^20 <= 2^53 so the double-precision transforms are exact.
  const std::uint64_t block = std::min<std::uint64_t>(kFftBlockBits, cfg.n);
  FftConvolver conv(block, cfg.m);
  std::vector<std::int64_t> acc(cfg.m, 0);

  // The window indexing uses seed index n-1-o-(B-1)+v = (n-o-B)+v; full
  // blocks keep it in range, and the final partial block is sized to fit.
  for (std::uint64_t o = 0; o < cfg.n; o += block) {
    const std::uint64_t bo = std::min(block, cfg.n - o);
    conv.accumulate(raw, o, bo, seed.bits, cfg.n, acc);
  }

  BitVec out(cfg.m);
  for (std::uint64_t i = 0; i < cfg.m; ++i) out.set(i, acc[i] & 1);
  return out;
}

BitVec extract(const BitVec& raw, const ToeplitzSeed& seed, const ExtractorConfig& cfg) {
  return extract_fft(raw, seed, cfg);
}

BitVec pack_raw(const std::vector<bell::Trial>& trials) {
  if (trials.empty()) throw std::invalid_argument("pack_raw: empty trial sequence");
  BitVec out(trials.size() * 2);
  for (std::size_t i = 0; i < trials.size(); ++i) {
    out.set(2 * i, trials[i].a);
    out.set(2 * i + 1, trials[i].b);
  }
  return out;
}

double monobit_p(const BitVec& bits) {
  const std::uint64_t n = bits.size();
  if (n == 0) throw std::invalid_argument("monobit_p: empty input");
  std::uint64_t ones = 0;
  for (auto w : bits.words()) ones += static_cast<std::uint64_t>(std::popcount(w));
  const double s = 2.0 * static_cast<double>(ones) - static_cast<double>(n);
  const double s_obs = std::fabs(s) / std::sqrt(static_cast<double>(n));
  return std::erfc(s_obs / std::sqrt(2.0));
}

double runs_p(const BitVec& bits) {
  const std::uint64_t n = bits.size();
  if (n < 2) throw std::invalid_argument("runs_p: input too short");
  std::uint64_t ones = 0;
  for (auto w : bits.words()) ones += static_cast<std::uint64_t>(std::popcount(w));
  const double pi = static_cast<double>(ones) / static_cast<double>(n);
  if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(static_cast<double>(n))) return 0.0;
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i + 1 < n; ++i)
    if (bits.get(i) != bits.get(i + 1)) ++v;
  const double nn = static_cast<double>(n);
  const double num = std::fabs(static_cast<double>(v) - 2.0 * nn * pi * (1.0 - pi));
  const double den = 2.0 * std::sqrt(2.0 * nn) * pi * (1.0 - pi);
  return std::erfc(num / den);
}

}  // namespace bzk::ext
