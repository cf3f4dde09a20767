// Copyright 2026 The dbgas Authors. - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DBGAS_RNG_HPP
#define DBGAS_RNG_HPP

// Counter-based random streams.
//
// Every random number is a pure function of (root seed, task kind, chunk
// index, block counter) through Philox4x32-10 (Salmon et al., SC 2011): the
// 64-bit root seed is the key, and the counter words hold
// {block lo, block hi, task kind, chunk index}. A stream therefore never
// depends on which thread runs it or in what order chunks are processed.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace dbgas {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds.
inline PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint32_t kMulA = 0xD2511F53u;
  constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  constexpr std::uint32_t kWeylB = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeylA;
    key[1] += kWeylB;
  }
  return ctr;
}

/// Task kinds used to separate the streams of different computations that
/// share one root seed.
namespace task {
inline constexpr std::uint32_t kSeriesTerm = 0x10000000u;  // + term ordinal
inline constexpr std::uint32_t kMollified = 0x20000000u;   // + sweep row when uncoupled
inline constexpr std::uint32_t kPath = 0x30000000u;        // + path index high bits
inline constexpr std::uint32_t kOneDelta = 0x40000000u;
inline constexpr std::uint32_t kSelfTest = 0x50000000u;
}  // namespace task

/// A sequential view of one (seed, kind, chunk) stream.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint32_t kind, std::uint32_t chunk)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        kind_(kind),
        chunk_(chunk) {}

  /// Next raw 64-bit word.
  std::uint64_t next_u64() {
    if (pos_ == 2) refill();
    const std::uint64_t out = (static_cast<std::uint64_t>(buf_[2 * pos_ + 1]) << 32) | buf_[2 * pos_];
    ++pos_;
    return out;
  }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal by the Box-Muller transform; the second variate of each
  /// pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi_v<double> * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t blocks_used() const { return block_; }

 private:
  void refill() {
    buf_ = philox4x32_10({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                          kind_, chunk_},
                         key_);
    ++block_;
    pos_ = 0;
  }

  PhiloxKey key_;
  std::uint32_t kind_;
  std::uint32_t chunk_;
  std::uint64_t block_ = 0;
  PhiloxCounter buf_{};
  int pos_ = 2;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dbgas

#endif  // DBGAS_RNG_HPP
