// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace fedsmd {

/// Philox4x32-10 block function: maps a 128-bit counter and a 64-bit key to
/// 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// What a random stream is used for. Distinct purposes never share keys.
enum class StreamPurpose : std::uint32_t {
  GradientNoise = 1,
  ProblemInstance = 2,
  Diagnostic = 3,
  Test = 4,
};

/// Identifies one independent stream under a master seed.
struct StreamId {
  StreamPurpose purpose = StreamPurpose::Diagnostic;
  std::uint32_t agent = 0;
  std::uint64_t iteration = 0;
};

// Counter-based generator. The state is (seed, stream id, block index), so
// a stream can be reconstructed anywhere without touching shared state.
// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, StreamId id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller.
  double normal();

  /// Number of 128-bit blocks consumed so far.
  std::uint32_t blocks_used() const noexcept { return block_; }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::uint32_t agent_ = 0;
  std::uint64_t iteration_ = 0;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;  // u64 values left in buffer_ (0..2)
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fedsmd
