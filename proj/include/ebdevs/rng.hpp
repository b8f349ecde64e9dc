/*
 * Copyright 2026 The ebdevs authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ebdevs/time.hpp"

namespace ebdevs {

/// Counter-based 64-bit generator. The full sample sequence is a pure
/// function of (seed, stream id); derived substreams are independent by key
/// construction, so replications and agents never share a stream. The state
/// is two u64 words, cheap to copy and safe to embed in model state.
class RngStream {
public:
    RngStream() = default;

    static RngStream make(std::uint64_t seed, std::uint64_t stream_id);

    /// Child stream keyed off this stream's identity; does not consume draws.
    RngStream derive(std::uint64_t substream) const;

    std::uint64_t next_u64();

    /// Uniform draw in [0, 1): 53 explicit mantissa bits.
    double uniform01();

    /// Uniform draw in (0, 1]; safe as a log argument.
    double uniform01_open_low();

    double uniform(double lo, double hi);

    /// Integer in [0, n); n >= 1. Unbiased via rejection.
    std::uint64_t uniform_index(std::uint64_t n);

    /// Standard normal via the polar method.
    double normal01();

    /// Gamma(shape k, scale theta) via the Marsaglia-Tsang squeeze.
    double gamma(double shape, double scale);

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

    friend bool operator==(const RngStream&, const RngStream&) = default;

    std::string format() const;

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

/// Exponential sample with mean 1/rate.
SimTime sample_exponential(RngStream& rng, double rate);

/// Minimum of independent exponential clocks: the winning index arrives with
/// probability rates[i]/sum, and the race time is exponential(sum),
/// independent of the winner.
std::pair<std::size_t, SimTime> race_winner(RngStream& rng, std::span<const double> rates);

} // namespace ebdevs
