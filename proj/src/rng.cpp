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
#include "ebdevs/rng.hpp"

#include <cmath>

namespace ebdevs {

namespace {

// splitmix64 finalizer; full 64-bit avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t GOLDEN = 0x9e3779b97f4a7c15ULL;

} // namespace

RngStream RngStream::make(std::uint64_t seed, std::uint64_t stream_id) {
    RngStream s;
    s.key_ = mix64(mix64(seed + GOLDEN) ^ (stream_id + GOLDEN));
    s.counter_ = 0;
    return s;
}

RngStream RngStream::derive(std::uint64_t substream) const {
    RngStream s;
    s.key_ = mix64(key_ ^ mix64(substream + GOLDEN));
    s.counter_ = 0;
    return s;
}

std::uint64_t RngStream::next_u64() {
    return mix64(key_ + (++counter_) * GOLDEN);
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform01_open_low() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + uniform01() * (hi - lo);
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
    if (n == 0) throw usage_error("uniform_index: n must be >= 1");
    const std::uint64_t bound = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= bound);
    return x % n;
}

double RngStream::normal01() {
    // Polar Box-Muller; the pair's second value is discarded so the draw
    // count stays a pure function of the stream position.
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
}

double RngStream::gamma(double shape, double scale) {
    if (shape <= 0.0 || scale <= 0.0) throw usage_error("gamma: shape and scale must be positive");
    if (shape < 1.0) {
        // Boost to shape+1 and scale back.
        const double u = uniform01_open_low();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal01();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01_open_low();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

std::string RngStream::format() const {
    return "rng(" + std::to_string(key_) + ";" + std::to_string(counter_) + ")";
}

SimTime sample_exponential(RngStream& rng, double rate) {
    if (!(rate > 0.0)) throw usage_error("sample_exponential: rate must be > 0");
    return SimTime(-std::log(rng.uniform01_open_low()) / rate);
}

std::pair<std::size_t, SimTime> race_winner(RngStream& rng, std::span<const double> rates) {
    if (rates.empty()) throw usage_error("race_winner: empty rate list");
    double total = 0.0;
    for (double r : rates) {
        if (!(r > 0.0)) throw usage_error("race_winner: rates must be > 0");
        total += r;
    }
    const SimTime t = sample_exponential(rng, total);
    // Winner drawn independently of the time, weighted by rate share.
    const double u = rng.uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < rates.size(); ++i) {
        acc += rates[i];
        if (u < acc) return {i, t};
    }
    return {rates.size() - 1, t};
}

} // namespace ebdevs
