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
#include <memory>
#include <vector>

#include "ebdevs/graph.hpp"
#include "ebdevs/model.hpp"
#include "ebdevs/rng.hpp"

namespace ebdevs::sir {

struct Params {
    std::size_t n = 500;
    double beta = 0.05;
    double gamma = 0.1;
    double gamma_shape = 10.0; // degree sequence Gamma shape
    double gamma_scale = 1.0;  // degree sequence Gamma scale
    bool vaccination = false;
    double threshold = 2.0; // infected growth per bin at which agents vaccinate
    double bin_width = 1.0;
    double initial_infected_frac = 0.1;
};

enum class Compartment : std::uint8_t { S_notv, S_v, I, R };

const char* label(Compartment c);

/// Bucket for counting: both susceptible flavors share the S slot.
enum class Bucket : std::uint8_t { S, I, R };
Bucket bucket_of(Compartment c);

/// Agent state. The race for an Infected agent is drawn up front and kept
/// here: its time (sigma), whether it ends in recovery, and the neighbor the
/// next output addresses. ta stays pure that way.
struct AgentState {
    std::uint32_t id = 0;
    Compartment comp = Compartment::S_notv;
    std::shared_ptr<const std::vector<std::uint32_t>> neighbors;
    RngStream rng;
    SimTime sigma = SimTime::infinity();
    bool next_is_recovery = false;
    std::int64_t target = -1; // addressed neighbor; -1 when none

    friend bool operator==(const AgentState&, const AgentState&) = default;
    std::string format() const;
};

/// Output event: an infection addressed to one uniformly chosen neighbor;
/// the coupling to that neighbor translates it, all others drop it.
struct InfectTo {
    std::uint32_t target;
    friend bool operator==(const InfectTo&, const InfectTo&) = default;
    std::string format() const;
};

/// Input event delivered to the addressed neighbor.
struct Infect {
    friend bool operator==(const Infect&, const Infect&) = default;
    std::string format() const { return "Infect"; }
};

/// Upward payload: the agent's post-transition compartment.
struct CompartmentReport {
    Compartment comp;
    friend bool operator==(const CompartmentReport&, const CompartmentReport&) = default;
    std::string format() const { return label(comp); }
};

/// Global state: compartment census plus, in vaccination mode, the infected
/// growth rate over regular time bins.
struct Global {
    std::uint32_t n_s = 0, n_i = 0, n_r = 0;
    std::vector<Bucket> prev; // last reported bucket per agent, for diffing

    bool vaccination = false;
    double bin_width = 1.0;
    double t_now = 0.0;
    std::int64_t completed_bin = -1; // index of the last closed bin
    std::uint32_t ni_prev_boundary = 0;
    std::uint32_t ni_last_boundary = 0;

    double growth_rate() const;
    std::uint32_t total() const { return n_s + n_i + n_r; }

    friend bool operator==(const Global&, const Global&) = default;
    std::string format() const;
};

/// The race sojourn for one agent state (+inf unless Infected).
SimTime agent_ta(const AgentState& s);

/// Fresh race draw for an agent entering or staying Infected.
AgentState draw_race(AgentState s, const Params& p);

Transition agent_delta_int(const AgentState& s, const Params& p);
Transition agent_delta_ext(const AgentState& s, const Value& x, const Value& macro, const Params& p);
Value agent_lambda(const AgentState& s);

GlobalTransition global_delta(const Global& g, SimTime e_g, const MicroBag& bag);
Value global_v_down(const Global& g);

/// The environment coupled model over a configuration-model network. The
/// same seed yields the same network, initial compartments and per-agent
/// streams in both plain and vaccination modes.
ModelSpec build(const Params& p, std::uint64_t seed, std::uint64_t stream);

/// Fixed-step 4th-order integration of the compartment rate equations; the
/// independent macroscopic reference for the agent model.
struct OdePoint {
    double t, s, i, r;
};
std::vector<OdePoint> ode_oracle(double beta, double gamma, double n, double s0, double i0,
                                 double horizon, double step);

} // namespace ebdevs::sir
