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

#include <cassert>
#include <cmath>
#include <compare>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace ebdevs {

struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

/// Simulation time: a nonnegative real extended with +infinity (passivity).
/// Finite arithmetic on integer steps is exact (IEEE doubles).
class SimTime {
public:
    constexpr SimTime() : v_(0.0) {}
    constexpr explicit SimTime(double v) : v_(v) {
        if (std::isnan(v_) || v_ < 0.0)
            throw usage_error("SimTime must be a nonnegative real or +infinity");
    }

    static constexpr SimTime infinity() { return SimTime(std::numeric_limits<double>::infinity(), tag{}); }
    static constexpr SimTime zero() { return SimTime(); }

    constexpr double value() const { return v_; }
    constexpr bool is_infinite() const { return std::isinf(v_); }
    constexpr bool is_finite() const { return !std::isinf(v_); }

    friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime(a.v_ + b.v_, tag{}); }

    // Difference of ordered times; both infinite is undefined in the formalism.
    friend constexpr SimTime operator-(SimTime a, SimTime b) {
        if (b.v_ > a.v_) throw usage_error("SimTime subtraction would be negative");
        if (a.is_infinite() && b.is_infinite())
            throw usage_error("SimTime: infinity - infinity is undefined");
        if (a.is_infinite()) return infinity();
        return SimTime(a.v_ - b.v_, tag{});
    }

    friend constexpr auto operator<=>(SimTime a, SimTime b) { return a.v_ <=> b.v_; }
    friend constexpr bool operator==(SimTime a, SimTime b) { return a.v_ == b.v_; }

private:
    struct tag {};
    constexpr SimTime(double v, tag) : v_(v) {}
    double v_;
};

/// Least element of a non-empty list of times.
inline SimTime time_min(std::span<const SimTime> times) {
    if (times.empty()) throw usage_error("time_min: empty list");
    SimTime best = times[0];
    for (const SimTime& t : times.subspan(1))
        if (t < best) best = t;
    return best;
}

std::string format_time(SimTime t);

} // namespace ebdevs
