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
#include "ebdevs/models/sir.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ebdevs/trace.hpp"

namespace ebdevs::sir {

const char* label(Compartment c) {
    switch (c) {
    case Compartment::S_notv: return "S";
    case Compartment::S_v: return "Sv";
    case Compartment::I: return "I";
    case Compartment::R: return "R";
    }
    return "?";
}

Bucket bucket_of(Compartment c) {
    switch (c) {
    case Compartment::S_notv:
    case Compartment::S_v: return Bucket::S;
    case Compartment::I: return Bucket::I;
    case Compartment::R: return Bucket::R;
    }
    return Bucket::S;
}

std::string AgentState::format() const {
    std::ostringstream os;
    os << label(comp);
    if (comp == Compartment::I) {
        os << "(s=" << format_time(sigma) << ";t=" << target << ";rec=" << (next_is_recovery ? 1 : 0)
           << ")";
    }
    return os.str();
}

std::string InfectTo::format() const { return "Infect>" + std::to_string(target); }

double Global::growth_rate() const {
    if (completed_bin < 0) return 0.0;
    return (static_cast<double>(ni_last_boundary) - static_cast<double>(ni_prev_boundary)) /
           bin_width;
}

std::string Global::format() const {
    std::ostringstream os;
    os << '(' << n_s << ';' << n_i << ';' << n_r;
    if (vaccination) os << ";g=" << format_double(growth_rate());
    os << ')';
    return os.str();
}

SimTime agent_ta(const AgentState& s) {
    return s.comp == Compartment::I ? s.sigma : SimTime::infinity();
}

AgentState draw_race(AgentState s, const Params& p) {
    const auto k = s.neighbors ? s.neighbors->size() : 0;
    if (k == 0) {
        // Only the recovery clock runs.
        s.sigma = sample_exponential(s.rng, p.gamma);
        s.next_is_recovery = true;
        s.target = -1;
        return s;
    }
    const double rates[2] = {static_cast<double>(k) * p.beta, p.gamma};
    auto [winner, t] = race_winner(s.rng, rates);
    s.sigma = t;
    s.next_is_recovery = (winner == 1);
    s.target = static_cast<std::int64_t>((*s.neighbors)[s.rng.uniform_index(k)]);
    return s;
}

Transition agent_delta_int(const AgentState& s, const Params& p) {
    if (s.comp != Compartment::I)
        throw internal_error("sir: internal transition scheduled for a passive agent");
    AgentState next = s;
    if (s.next_is_recovery) {
        next.comp = Compartment::R;
        next.sigma = SimTime::infinity();
        next.next_is_recovery = false;
        next.target = -1;
    } else {
        next = draw_race(std::move(next), p);
    }
    Value y_up = Value::of(CompartmentReport{next.comp});
    return {Value::of(std::move(next)), std::move(y_up)};
}

Transition agent_delta_ext(const AgentState& s, const Value& x, const Value& macro,
                           const Params& p) {
    x.as<Infect>();
    AgentState next = s;
    switch (s.comp) {
    case Compartment::S_notv: {
        bool vaccinate = false;
        if (p.vaccination && macro) vaccinate = macro.as<double>() >= p.threshold;
        if (vaccinate) {
            next.comp = Compartment::S_v;
        } else {
            next.comp = Compartment::I;
            next = draw_race(std::move(next), p);
        }
        break;
    }
    case Compartment::I:
        // The exponential race is memoryless: a fresh draw keeps elapsed
        // time out of the state.
        next = draw_race(std::move(next), p);
        break;
    case Compartment::S_v:
    case Compartment::R:
        break;
    }
    Value y_up = Value::of(CompartmentReport{next.comp});
    return {Value::of(std::move(next)), std::move(y_up)};
}

Value agent_lambda(const AgentState& s) {
    if (s.comp != Compartment::I || s.target < 0) return {};
    return Value::of(InfectTo{static_cast<std::uint32_t>(s.target)});
}

GlobalTransition global_delta(const Global& g, SimTime e_g, const MicroBag& bag) {
    Global next = g;
    next.t_now = g.t_now + e_g.value();

    if (next.vaccination) {
        // Close every bin boundary passed before this event's reports apply.
        const auto in_bin = static_cast<std::int64_t>(std::floor(next.t_now / next.bin_width));
        while (next.completed_bin < in_bin - 1) {
            ++next.completed_bin;
            next.ni_prev_boundary = next.ni_last_boundary;
            next.ni_last_boundary = next.n_i;
        }
    }

    for (const auto& [sender, payload] : bag) {
        const Bucket now = bucket_of(payload.as<CompartmentReport>().comp);
        const Bucket before = next.prev.at(sender.value());
        if (before == now) continue;
        auto slot = [&next](Bucket b) -> std::uint32_t& {
            switch (b) {
            case Bucket::S: return next.n_s;
            case Bucket::I: return next.n_i;
            default: return next.n_r;
            }
        };
        std::uint32_t& from = slot(before);
        if (from == 0) throw internal_error("sir: compartment count would go negative");
        --from;
        ++slot(now);
        next.prev[sender.value()] = now;
    }

    if (next.total() != next.prev.size())
        throw internal_error("sir: compartment counts lost conservation");
    return {Value::of(std::move(next)), Value{}};
}

Value global_v_down(const Global& g) {
    return Value::of(g.growth_rate());
}

namespace {

AtomicSpec agent_spec(AgentState init, const Params& p) {
    AtomicSpec a;
    a.initial = Value::of(std::move(init));
    a.ta = [](const Value& s) { return agent_ta(s.as<AgentState>()); };
    a.delta_int = [p](const Value& s, const Value&) { return agent_delta_int(s.as<AgentState>(), p); };
    // e is unused: see the memoryless redraw above.
    a.delta_ext = [p](const Value& s, SimTime, const Value& x, const Value& macro) {
        return agent_delta_ext(s.as<AgentState>(), x, macro, p);
    };
    a.lambda = [](const Value& s) { return agent_lambda(s.as<AgentState>()); };
    return a;
}

} // namespace

ModelSpec build(const Params& p, std::uint64_t seed, std::uint64_t stream) {
    if (p.n < 2) throw usage_error("sir: n must be >= 2");
    RngStream root = RngStream::make(seed, stream);

    RngStream degree_rng = root.derive(0);
    RngStream graph_rng = root.derive(1);
    RngStream init_rng = root.derive(2);

    const std::vector<std::uint32_t> degrees =
        gamma_degrees(degree_rng, p.n, p.gamma_shape, p.gamma_scale);
    const DegreeGraph graph = configuration_model(graph_rng, degrees);

    // Initially infected agents: a uniform choice of floor(n * frac).
    std::vector<std::uint32_t> ids(p.n);
    std::iota(ids.begin(), ids.end(), 0);
    const auto m = static_cast<std::size_t>(std::floor(static_cast<double>(p.n) *
                                                       p.initial_infected_frac));
    for (std::size_t i = 0; i < m && i < ids.size(); ++i) {
        const std::size_t j = i + init_rng.uniform_index(ids.size() - i);
        std::swap(ids[i], ids[j]);
    }
    std::vector<bool> infected(p.n, false);
    for (std::size_t i = 0; i < m; ++i) infected[ids[i]] = true;

    CoupledSpec env;
    Global g0;
    g0.vaccination = p.vaccination;
    g0.bin_width = p.bin_width;
    g0.prev.resize(p.n);

    for (std::uint32_t id = 0; id < p.n; ++id) {
        AgentState s;
        s.id = id;
        s.neighbors = std::make_shared<const std::vector<std::uint32_t>>(graph.adjacency[id]);
        s.rng = root.derive(3 + id);
        if (infected[id]) {
            s.comp = Compartment::I;
            s = draw_race(std::move(s), p);
            ++g0.n_i;
        } else {
            ++g0.n_s;
        }
        g0.prev[id] = bucket_of(s.comp);
        env.children.push_back({ModelId{id}, std::to_string(id), ModelSpec::atomic(agent_spec(std::move(s), p))});
    }

    for (std::uint32_t a = 0; a < p.n; ++a) {
        for (std::uint32_t b : graph.adjacency[a]) {
            // One direction per iteration; the reverse shows up when b is 'a'.
            env.couplings.push_back({Endpoint::child(ModelId{a}), Endpoint::child(ModelId{b}),
                                     [b](const Value& y) -> Value {
                                         if (y.as<InfectTo>().target != b) return {};
                                         return Value::of(Infect{});
                                     }});
        }
    }

    env.initial_global = Value::of(std::move(g0));
    env.delta_g = [](const Value& s_g, SimTime e_g, const MicroBag& bag, const Value&) {
        return global_delta(s_g.as<Global>(), e_g, bag);
    };
    if (p.vaccination)
        env.v_down = [](const Value& s_g) { return global_v_down(s_g.as<Global>()); };

    return ModelSpec::coupled(std::move(env));
}

std::vector<OdePoint> ode_oracle(double beta, double gamma, double n, double s0, double i0,
                                 double horizon, double step) {
    if (!(step > 0.0)) throw usage_error("ode_oracle: step must be > 0");
    auto deriv = [beta, gamma, n](double s, double i, double out[3]) {
        const double infection = s * beta * i / n;
        out[0] = -infection;
        out[1] = infection - gamma * i;
        out[2] = gamma * i;
    };

    std::vector<OdePoint> series;
    double s = s0, i = i0, r = n - s0 - i0, t = 0.0;
    series.push_back({t, s, i, r});
    while (t < horizon - step * 0.5) {
        double k1[3], k2[3], k3[3], k4[3];
        deriv(s, i, k1);
        deriv(s + 0.5 * step * k1[0], i + 0.5 * step * k1[1], k2);
        deriv(s + 0.5 * step * k2[0], i + 0.5 * step * k2[1], k3);
        deriv(s + step * k3[0], i + step * k3[1], k4);
        s += step / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        i += step / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        r += step / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
        t += step;
        series.push_back({t, s, i, r});
    }
    return series;
}

} // namespace ebdevs::sir
