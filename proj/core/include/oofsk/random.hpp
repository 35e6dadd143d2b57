// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>

namespace oofsk::rng {

/// Philox4x32-10 counter-based block cipher: maps a 128-bit counter and a
/// 64-bit key to 128 pseudo-random bits. Stateless; any block is reachable in
/// O(1), which is what makes simulation streams independent of worker layout.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// What a stream is used for. Each purpose of each trial owns a disjoint
/// region of the counter space.
enum class Purpose : std::uint32_t { Symbol = 0, Channel = 1, Phase = 2, Noise = 3, Test = 0xffff };

/// Sequential view over the Philox counter space for one (seed, trial,
/// purpose) triple. Models UniformRandomBitGenerator with 64-bit output.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t trial, Purpose purpose) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Circularly symmetric complex Gaussian with E|z|^2 = 1.
  std::complex<double> complex_normal() noexcept;

  /// Real standard normal.
  double normal() noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
};

}  // namespace oofsk::rng
