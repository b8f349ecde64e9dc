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
#include <optional>
#include <vector>

#include "ebdevs/model.hpp"
#include "ebdevs/rng.hpp"

namespace ebdevs::mito {

struct Params {
    double fission_p = 0.5;
    double fusion_p = 0.5;
    double total_mass = 300.0; // square micrometers
    double m_min = 0.5;
    double m_max = 3.0;
    double cycle_period = 300.0; // seconds between fusion/fission rounds
    double r_nucleus = 5.0;
    double r_peri = 10.0;
    double r_cell = 20.0;
    double peri_speed_max = 0.2; // micrometers per second
    double cyto_speed_max = 0.5;
};

enum class Region : std::uint8_t { perinuclear, cytosolic };
enum class Status : std::uint8_t { active, inactive };

/// Region by radial distance; the perinuclear band is closed at its outer
/// boundary. Positions inside the nucleus or outside the cell are invalid.
Region region_of(double x, double y, const Params& p);

/// small: mass <= 1; medium: 1 < mass <= 2; large: 2 < mass <= 3.
enum class SizeGroup : std::uint8_t { small, medium, large };
SizeGroup size_group(double mass, const Params& p);

/// Mass split for a fission: m1 by the uniform interpolation between the
/// minimum viable share and an even split, m2 the exact complement.
/// Guarantees m1 + m2 == mass in double arithmetic.
std::pair<double, double> fission_split(double mass, double x_f, double m_min);

struct MitoState {
    std::uint32_t id = 0;
    Status status = Status::inactive;
    double x = 0, y = 0, heading = 0;
    double mass = 0;
    double t_now = 0; // local clock, advanced by each transition
    RngStream rng;

    friend bool operator==(const MitoState&, const MitoState&) = default;
    std::string format() const;
};

/// Upward payload: status, kinematics, mass, plus any structural event.
struct MitoReport {
    Status status = Status::inactive;
    double x = 0, y = 0;
    double mass = 0;
    struct Fission {
        double old_mass;
        double kept_mass;
        friend bool operator==(const Fission&, const Fission&) = default;
    };
    std::optional<Fission> fission;
    std::optional<std::uint32_t> absorbed; // id this sender fused in

    friend bool operator==(const MitoReport&, const MitoReport&) = default;
    std::string format() const;
};

/// Ledger entry per id: the authoritative activity flag, last position and
/// mass, and an unclaimed fission grant when this id was chosen to activate.
struct LedgerEntry {
    bool active = false;
    double x = 0, y = 0;
    double mass = 0;
    struct Grant {
        double mass;
        double x, y;
        friend bool operator==(const Grant&, const Grant&) = default;
    };
    std::optional<Grant> grant;

    friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

struct Census {
    std::size_t n_small = 0, n_medium = 0, n_large = 0, n_active = 0;
    double total_mass = 0;
};

/// Global state: the activity/mass ledger. Closest-active queries and the
/// census are answered against the current ledger on demand.
struct CellGlobal {
    double t_now = 0;
    std::vector<LedgerEntry> ledger;

    std::optional<std::uint32_t> closest_active(std::uint32_t self, double x, double y) const;
    Census census(const Params& p) const;

    friend bool operator==(const CellGlobal&, const CellGlobal&) = default;
    std::string format() const;
};

SimTime mito_ta(const MitoState& s, const Params& p);

/// One displacement with boundary handling: a step crossing the nucleus or
/// cell boundary flips to the opposite heading and is retried; if that also
/// leaves the annulus the position holds.
struct StepResult {
    double x, y, heading;
};
StepResult step_with_reflection(double x, double y, double heading, double speed, const Params& p);

/// Region-aware random step: heading uniform, speed uniform over the
/// region's range, then step_with_reflection.
MitoState mito_move(MitoState s, const Params& p);

Transition mito_delta_int(const MitoState& s, const Value& macro, const Params& p);
GlobalTransition cell_delta(const CellGlobal& g, SimTime e_g, const MicroBag& bag, const Params& p);

ModelSpec build(const Params& p, std::uint64_t seed, std::uint64_t stream);

/// Pool size for a configuration: total_mass / m_min ids (the largest
/// possible active count).
std::size_t pool_size(const Params& p);

} // namespace ebdevs::mito
