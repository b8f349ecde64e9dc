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
#include "ebdevs/models/mito.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ebdevs/simulator.hpp"
#include "ebdevs/trace.hpp"

namespace ebdevs::mito {

namespace {
constexpr double TWO_PI = 2.0 * std::numbers::pi;

double radial(double x, double y) { return std::sqrt(x * x + y * y); }

bool position_valid(double x, double y, const Params& p) {
    const double d = radial(x, y);
    return d > p.r_nucleus && d < p.r_cell;
}
} // namespace

Region region_of(double x, double y, const Params& p) {
    const double d = radial(x, y);
    if (!(d > p.r_nucleus && d < p.r_cell))
        throw internal_error("mito: position outside the annulus");
    return d <= p.r_peri ? Region::perinuclear : Region::cytosolic;
}

SizeGroup size_group(double mass, const Params& p) {
    if (mass < p.m_min || mass > p.m_max) throw internal_error("mito: mass out of range");
    if (mass <= 1.0) return SizeGroup::small;
    if (mass <= 2.0) return SizeGroup::medium;
    return SizeGroup::large;
}

std::pair<double, double> fission_split(double mass, double x_f, double m_min) {
    if (mass < 2.0 * m_min) throw usage_error("fission_split: mass below 2*m_min");
    if (x_f < 0.0 || x_f > 1.0) throw usage_error("fission_split: x_f outside [0,1]");
    const double share = m_min / mass;
    double m1 = (x_f * (0.5 - share) + share) * mass;
    // m1 never exceeds half, so m2 >= mass/2 and the final subtraction below
    // is exact (Sterbenz); m1 + m2 == mass holds bit for bit.
    m1 = std::clamp(m1, m_min, 0.5 * mass);
    double m2 = mass - m1;
    m1 = mass - m2;
    // Rounding in m2 can push either part an ulp under m_min; pin it there.
    if (m1 < m_min) {
        m1 = m_min;
        m2 = mass - m_min;
    } else if (m2 < m_min) {
        m2 = m_min;
        m1 = mass - m_min;
    }
    return {m1, m2};
}

std::string MitoState::format() const {
    if (status == Status::inactive) return "(off)";
    std::ostringstream os;
    os << "(m=" << format_double(mass) << ";x=" << format_double(x) << ";y=" << format_double(y)
       << ')';
    return os.str();
}

std::string MitoReport::format() const {
    std::ostringstream os;
    os << (status == Status::active ? "A" : "off") << ";m=" << format_double(mass);
    if (fission) os << ";split_keep=" << format_double(fission->kept_mass);
    if (absorbed) os << ";absorbed=" << *absorbed;
    return os.str();
}

std::optional<std::uint32_t> CellGlobal::closest_active(std::uint32_t self, double x,
                                                        double y) const {
    std::optional<std::uint32_t> best;
    double best_d = 0;
    for (std::uint32_t j = 0; j < ledger.size(); ++j) {
        if (j == self || !ledger[j].active) continue;
        const double dx = ledger[j].x - x;
        const double dy = ledger[j].y - y;
        const double d = dx * dx + dy * dy;
        if (!best || d < best_d) {
            best = j;
            best_d = d;
        }
    }
    return best;
}

Census CellGlobal::census(const Params& p) const {
    Census c;
    for (const LedgerEntry& e : ledger) {
        if (!e.active) continue;
        ++c.n_active;
        c.total_mass += e.mass;
        switch (size_group(e.mass, p)) {
        case SizeGroup::small: ++c.n_small; break;
        case SizeGroup::medium: ++c.n_medium; break;
        case SizeGroup::large: ++c.n_large; break;
        }
    }
    return c;
}

std::string CellGlobal::format() const {
    std::size_t active = 0;
    double mass = 0;
    for (const LedgerEntry& e : ledger) {
        if (!e.active) continue;
        ++active;
        mass += e.mass;
    }
    std::ostringstream os;
    os << "cell(t=" << format_double(t_now) << ";active=" << active
       << ";mass=" << format_double(mass) << ')';
    return os.str();
}

SimTime mito_ta(const MitoState& s, const Params& p) {
    if (s.status == Status::active) return SimTime(1.0);
    // Dormant models only need to look up at fusion/fission rounds.
    const double phase = std::fmod(s.t_now, p.cycle_period);
    return SimTime(phase == 0.0 ? p.cycle_period : p.cycle_period - phase);
}

StepResult step_with_reflection(double x, double y, double heading, double speed,
                                const Params& p) {
    double nx = x + speed * std::cos(heading);
    double ny = y + speed * std::sin(heading);
    if (!position_valid(nx, ny, p)) {
        heading = std::fmod(heading + std::numbers::pi, TWO_PI);
        nx = x + speed * std::cos(heading);
        ny = y + speed * std::sin(heading);
        if (!position_valid(nx, ny, p)) return {x, y, heading}; // cornered; hold position
    }
    return {nx, ny, heading};
}

MitoState mito_move(MitoState s, const Params& p) {
    const Region region = region_of(s.x, s.y, p);
    const double max_speed = region == Region::perinuclear ? p.peri_speed_max : p.cyto_speed_max;
    const double speed = s.rng.uniform(0.0, max_speed);
    const double heading = s.rng.uniform(0.0, TWO_PI);
    const StepResult step = step_with_reflection(s.x, s.y, heading, speed, p);
    s.x = step.x;
    s.y = step.y;
    s.heading = step.heading;
    return s;
}

Transition mito_delta_int(const MitoState& s, const Value& macro, const Params& p) {
    const auto& view = macro.as<CellGlobal>();
    MitoState next = s;
    next.t_now = s.t_now + mito_ta(s, p).value();
    const bool on_cycle = std::fmod(next.t_now, p.cycle_period) == 0.0;
    const LedgerEntry& rec = view.ledger.at(s.id);

    MitoReport report;

    if (s.status == Status::active) {
        if (!rec.active) {
            // A fusion partner took this body; acknowledge and go dormant.
            next.status = Status::inactive;
            report = {Status::inactive, next.x, next.y, next.mass, {}, {}};
            return {Value::of(std::move(next)), Value::of(std::move(report))};
        }
        if (rec.grant) {
            // This id was retired and immediately reassigned to a fission
            // product; the model becomes the new body.
            next.mass = rec.grant->mass;
            next.x = rec.grant->x;
            next.y = rec.grant->y;
            report = {Status::active, next.x, next.y, next.mass, {}, {}};
            return {Value::of(std::move(next)), Value::of(std::move(report))};
        }
        if (!on_cycle) {
            next = mito_move(std::move(next), p);
        } else {
            const double u = next.rng.uniform01();
            if (u <= p.fission_p) {
                if (next.mass >= 2.0 * p.m_min) {
                    const double x_f = next.rng.uniform01();
                    const auto split = fission_split(next.mass, x_f, p.m_min);
                    report.fission = MitoReport::Fission{next.mass, split.first};
                    next.mass = split.first;
                }
            } else if (u <= p.fission_p + p.fusion_p) {
                const auto partner = view.closest_active(s.id, next.x, next.y);
                if (partner) {
                    const double partner_mass = view.ledger[*partner].mass;
                    if (next.mass + partner_mass <= p.m_max) {
                        next.mass += partner_mass;
                        report.absorbed = *partner;
                    }
                }
            }
            // remaining probability mass: an uneventful round
        }
        report.status = Status::active;
        report.x = next.x;
        report.y = next.y;
        report.mass = next.mass;
    } else {
        // Dormant: wake up if a fission granted this id a body.
        if (rec.active && rec.grant) {
            next.status = Status::active;
            next.mass = rec.grant->mass;
            next.x = rec.grant->x;
            next.y = rec.grant->y;
            report = {Status::active, next.x, next.y, next.mass, {}, {}};
        } else {
            report = {Status::inactive, next.x, next.y, 0.0, {}, {}};
        }
    }

    return {Value::of(std::move(next)), Value::of(std::move(report))};
}

GlobalTransition cell_delta(const CellGlobal& g, SimTime e_g, const MicroBag& bag, const Params&) {
    CellGlobal next = g;
    next.t_now = g.t_now + e_g.value();

    for (const auto& [sender, payload] : bag) {
        const auto& rep = payload.as<MitoReport>();
        LedgerEntry& me = next.ledger.at(sender.value());

        if (rep.fission && rep.absorbed)
            throw internal_error("mito: fission and fusion in one round are mutually exclusive");

        if (!me.active) {
            // Reports from ids the ledger already retired carry no authority
            // (dormant wake-up checks and absorption acknowledgments).
            continue;
        }

        if (rep.absorbed) {
            LedgerEntry& victim = next.ledger.at(*rep.absorbed);
            if (!victim.active)
                throw internal_error("mito: fusion with an inactive partner");
            victim.active = false;
            victim.grant.reset(); // an unclaimed body cannot wake its grantee
            victim.mass = 0;
        }

        if (rep.fission) {
            const double child_mass = rep.fission->old_mass - rep.fission->kept_mass;
            std::optional<std::uint32_t> slot;
            for (std::uint32_t j = 0; j < next.ledger.size(); ++j) {
                if (!next.ledger[j].active) {
                    slot = j;
                    break;
                }
            }
            if (!slot)
                throw CapacityError("mito: no inactive model left to take a fission product at t=" +
                                    format_double(next.t_now));
            LedgerEntry& child = next.ledger[*slot];
            child.active = true;
            child.mass = child_mass;
            child.x = rep.x;
            child.y = rep.y;
            child.grant = LedgerEntry::Grant{child_mass, rep.x, rep.y};
        }

        me.x = rep.x;
        me.y = rep.y;
        me.mass = rep.mass;
        me.grant.reset(); // position/mass now come from the model itself
    }

    return {Value::of(std::move(next)), Value{}};
}

std::size_t pool_size(const Params& p) {
    return static_cast<std::size_t>(std::llround(p.total_mass / p.m_min));
}

ModelSpec build(const Params& p, std::uint64_t seed, std::uint64_t stream) {
    if (!(p.fission_p >= 0 && p.fusion_p >= 0 && p.fission_p + p.fusion_p <= 1.0))
        throw usage_error("mito: fission_p + fusion_p must lie in [0, 1]");
    if (!(p.r_nucleus < p.r_peri && p.r_peri < p.r_cell))
        throw usage_error("mito: need r_nucleus < r_peri < r_cell");
    if (std::fmod(p.cycle_period, 1.0) != 0.0)
        throw usage_error("mito: cycle_period must be a whole number of seconds");

    RngStream root = RngStream::make(seed, stream);
    RngStream init_rng = root.derive(0);

    // Masses drawn uniformly until the budget is hit exactly; a remainder too
    // small to be a body forces a redraw.
    std::vector<double> masses;
    double remaining = p.total_mass;
    while (remaining > 0.0) {
        if (remaining <= p.m_max) {
            masses.push_back(remaining);
            break;
        }
        const double m = init_rng.uniform(p.m_min, p.m_max);
        const double after = remaining - m;
        if (after > 0.0 && after < p.m_min) continue;
        masses.push_back(m);
        remaining = after;
    }

    const std::size_t pool = pool_size(p);
    if (masses.size() > pool) throw usage_error("mito: initial bodies exceed the id pool");

    CoupledSpec cell;
    CellGlobal g0;
    g0.ledger.resize(pool);

    for (std::uint32_t id = 0; id < pool; ++id) {
        MitoState s;
        s.id = id;
        s.rng = root.derive(1 + id);
        if (id < masses.size()) {
            s.status = Status::active;
            s.mass = masses[id];
            // Rejection sampling: uniform over the annulus.
            do {
                s.x = s.rng.uniform(-p.r_cell, p.r_cell);
                s.y = s.rng.uniform(-p.r_cell, p.r_cell);
            } while (!position_valid(s.x, s.y, p));
            g0.ledger[id] = {true, s.x, s.y, s.mass, {}};
        }

        AtomicSpec a;
        a.initial = Value::of(std::move(s));
        a.ta = [p](const Value& sv) { return mito_ta(sv.as<MitoState>(), p); };
        a.delta_int = [p](const Value& sv, const Value& macro) {
            return mito_delta_int(sv.as<MitoState>(), macro, p);
        };
        cell.children.push_back({ModelId{id}, std::to_string(id), ModelSpec::atomic(std::move(a))});
    }

    cell.initial_global = Value::of(std::move(g0));
    cell.delta_g = [p](const Value& s_g, SimTime e_g, const MicroBag& bag, const Value&) {
        return cell_delta(s_g.as<CellGlobal>(), e_g, bag, p);
    };
    cell.v_down = [](const Value& s_g) { return s_g; };

    return ModelSpec::coupled(std::move(cell));
}

} // namespace ebdevs::mito
