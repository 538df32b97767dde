// Copyright 2026 The QSignal Authors
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
#include <limits>

namespace qsignal {

/// Seedable 64-bit stream (SplitMix64). Satisfies UniformRandomBitGenerator so
/// it plugs into <random> distributions.
///
/// Trials never share a stream: `for_trial(seed, i)` hashes the master seed and
/// the trial index into an independent starting state, so a trial's draws do
/// not depend on which worker runs it or in what order.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit constexpr RandomStream(std::uint64_t seed) noexcept : state_(seed) {
    }

    static constexpr result_type min() noexcept {
        return 0;
    }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    constexpr result_type operator()() noexcept {
        state_ += kGamma;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    static constexpr RandomStream for_trial(std::uint64_t master_seed, std::uint64_t trial) noexcept {
        return RandomStream(mix(mix(master_seed) + (trial + 1) * kGamma));
    }

    /// Child stream keyed by `index`; does not advance this stream.
    constexpr RandomStream split(std::uint64_t index) const noexcept {
        return for_trial(state_, index);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace qsignal
