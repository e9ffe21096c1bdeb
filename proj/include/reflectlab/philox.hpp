#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace reflectlab {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
//
// The key is the 64-bit experiment seed; the upper counter words hold the
// stream id (sample index), the lower words a per-stream draw counter.
// A (seed, stream) pair therefore addresses a reproducible random sequence
// that is independent of all other streams, which is what makes Monte Carlo
// output invariant under any partitioning of indices across workers.
class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream) noexcept
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        ctr2_(static_cast<std::uint32_t>(stream)),
        ctr3_(static_cast<std::uint32_t>(stream >> 32)) {}

  std::uint64_t next_u64() noexcept {
    if (have_half_) {
      have_half_ = false;
      return (static_cast<std::uint64_t>(block_[3]) << 32) | block_[2];
    }
    next_block();
    have_half_ = true;
    return (static_cast<std::uint64_t>(block_[1]) << 32) | block_[0];
  }

  // Uniform on the open interval (0,1); never returns 0 or 1, so logs are safe.
  double next_uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  double next_exponential(double rate) noexcept {
    return -std::log(next_uniform()) / rate;
  }

  double next_gaussian() noexcept {
    if (have_gauss_) {
      have_gauss_ = false;
      return gauss_;
    }
    const double r = std::sqrt(-2.0 * std::log(next_uniform()));
    const double a = 2.0 * std::numbers::pi * next_uniform();
    gauss_ = r * std::sin(a);
    have_gauss_ = true;
    return r * std::cos(a);
  }

 private:
  static constexpr std::uint32_t kMult0 = 0xD2511F53u;
  static constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static void round_once(std::uint32_t x[4], std::uint32_t k0,
                         std::uint32_t k1) noexcept {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * x[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t y0 = hi1 ^ x[1] ^ k0;
    const std::uint32_t y2 = hi0 ^ x[3] ^ k1;
    x[0] = y0;
    x[1] = lo1;
    x[2] = y2;
    x[3] = lo0;
  }

  void next_block() noexcept {
    std::uint32_t x[4] = {ctr0_, ctr1_, ctr2_, ctr3_};
    std::uint32_t k0 = key0_;
    std::uint32_t k1 = key1_;
    for (int r = 0; r < 10; ++r) {
      round_once(x, k0, k1);
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    block_[0] = x[0];
    block_[1] = x[1];
    block_[2] = x[2];
    block_[3] = x[3];
    if (++ctr0_ == 0) ++ctr1_;
  }

  std::uint32_t key0_, key1_;
  std::uint32_t ctr0_ = 0, ctr1_ = 0, ctr2_, ctr3_;
  std::uint32_t block_[4] = {0, 0, 0, 0};
  bool have_half_ = false;
  bool have_gauss_ = false;
  double gauss_ = 0.0;
};

}  // namespace reflectlab
