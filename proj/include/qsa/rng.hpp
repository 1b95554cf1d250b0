// Copyright 2026 The QSA Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace qsa::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent child seed from (seed, index).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return finalize(finalize(seed + kGolden) ^ ((index + 1) * kGolden));
}

/**
 * Counter-based uniform stream (SplitMix64 sequence).
 *
 * The value at counter i is a pure function of (key, i), so shot or trial
 * indices can be partitioned across workers in any order without changing
 * a single drawn value. `stream_id` separates independent uses of one user
 * seed (instance generation, measurement, annealing, ...).
 */
class Stream {
  public:
    explicit constexpr Stream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
        : key_(derive_seed(seed, stream_id)) {}

    constexpr std::uint64_t at(std::uint64_t i) const noexcept {
        return finalize(key_ + (i + 1) * kGolden);
    }

    /// Uniform double in [0, 1) at counter i.
    constexpr double unit_at(std::uint64_t i) const noexcept {
        return static_cast<double>(at(i) >> 11) * 0x1.0p-53;
    }

    std::uint64_t next() noexcept { return at(counter_++); }

    double next_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double next_uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * next_unit();
    }

    /// Uniform integer in [0, bound) via the multiply-shift reduction.
    std::uint64_t next_index(std::uint64_t bound) noexcept {
#ifdef __SIZEOF_INT128__
        __extension__ using uint128 = unsigned __int128;
        return static_cast<std::uint64_t>(
            (static_cast<uint128>(next()) * bound) >> 64);
#else
        return next() % bound;
#endif
    }

    constexpr std::uint64_t key() const noexcept { return key_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Stream ids reserved by the library so one user seed drives every
// randomized stage independently.
inline constexpr std::uint64_t kInstanceStream = 1;
inline constexpr std::uint64_t kMeasureStream = 2;
inline constexpr std::uint64_t kAnnealStream = 3;
inline constexpr std::uint64_t kMetropolisStream = 4;

} // namespace qsa::rng
