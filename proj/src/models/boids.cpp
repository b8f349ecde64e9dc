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
#include "ebdevs/models/boids.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "ebdevs/graph.hpp"
#include "ebdevs/trace.hpp"

namespace ebdevs::boids {

namespace {
constexpr double TWO_PI = 2.0 * std::numbers::pi;

double wrap_to_pi(double a) {
    a = std::fmod(a + std::numbers::pi, TWO_PI);
    if (a < 0) a += TWO_PI;
    return a - std::numbers::pi;
}

double rad(double deg) { return deg * std::numbers::pi / 180.0; }
} // namespace

double torus_delta(double a, double b, double l) {
    double d = b - a;
    d -= l * std::round(d / l);
    // round-half-even can land on -l/2; normalize into (-l/2, l/2]
    if (d <= -l / 2) d += l;
    return d;
}

double torus_distance(double ax, double ay, double bx, double by, double l) {
    const double dx = torus_delta(ax, bx, l);
    const double dy = torus_delta(ay, by, l);
    return std::sqrt(dx * dx + dy * dy);
}

namespace {
// All radius predicates and nearest comparisons run on squared distances so
// the grid, the oracle and the component counter agree bit for bit.
double torus_distance2(double ax, double ay, double bx, double by, double l) {
    const double dx = torus_delta(ax, bx, l);
    const double dy = torus_delta(ay, by, l);
    return dx * dx + dy * dy;
}
} // namespace

double normalize_angle(double a) {
    a = std::fmod(a, TWO_PI);
    if (a < 0) a += TWO_PI;
    return a;
}

std::optional<double> angular_mean(std::span<const double> headings) {
    if (headings.empty()) throw usage_error("angular_mean: empty list");
    double ms = 0, mc = 0;
    for (double h : headings) {
        ms += std::sin(h);
        mc += std::cos(h);
    }
    ms /= static_cast<double>(headings.size());
    mc /= static_cast<double>(headings.size());
    if (std::abs(ms) < 1e-12 && std::abs(mc) < 1e-12) return std::nullopt;
    return normalize_angle(std::atan2(ms, mc));
}

// ---------------------------------------------------------------------------
// Neighbor machinery

NeighborIndex::NeighborIndex(std::shared_ptr<const Ledger> points, double r, double l)
    : points_(std::move(points)), r_(r), l_(l) {
    cells_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(l_ / r_)));
    if (cells_ < 3) cells_ = 1; // wrap overlap makes tiny grids pointless
    cell_size_ = l_ / static_cast<double>(cells_);
    bins_.assign(cells_ * cells_, {});
    for (std::uint32_t i = 0; i < points_->size(); ++i) {
        const auto& p = (*points_)[i];
        if (!p) continue;
        auto cx = static_cast<std::size_t>(p->kin.x / cell_size_);
        auto cy = static_cast<std::size_t>(p->kin.y / cell_size_);
        if (cx >= cells_) cx = cells_ - 1;
        if (cy >= cells_) cy = cells_ - 1;
        bins_[cy * cells_ + cx].push_back(i);
    }
}

std::vector<std::uint32_t> NeighborIndex::within_at(double x, double y,
                                                    std::uint32_t exclude) const {
    std::vector<std::uint32_t> out;
    if (cells_ == 1) {
        for (std::uint32_t j = 0; j < points_->size(); ++j) {
            const auto& q = (*points_)[j];
            if (j == exclude || !q) continue;
            if (torus_distance2(x, y, q->kin.x, q->kin.y, l_) <= r_ * r_) out.push_back(j);
        }
        return out;
    }
    auto cx = static_cast<std::ptrdiff_t>(x / cell_size_);
    auto cy = static_cast<std::ptrdiff_t>(y / cell_size_);
    const auto n = static_cast<std::ptrdiff_t>(cells_);
    if (cx >= n) cx = n - 1;
    if (cy >= n) cy = n - 1;
    for (std::ptrdiff_t dy = -1; dy <= 1; ++dy) {
        for (std::ptrdiff_t dx = -1; dx <= 1; ++dx) {
            const std::size_t bx = static_cast<std::size_t>((cx + dx + n) % n);
            const std::size_t by = static_cast<std::size_t>((cy + dy + n) % n);
            for (std::uint32_t j : bins_[by * cells_ + bx]) {
                if (j == exclude) continue;
                const auto& q = (*points_)[j];
                if (torus_distance2(x, y, q->kin.x, q->kin.y, l_) <= r_ * r_) out.push_back(j);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::uint32_t> NeighborIndex::closest_at(double x, double y,
                                                       std::uint32_t exclude) const {
    std::optional<std::uint32_t> best;
    double best_d = 0;
    for (std::uint32_t j = 0; j < points_->size(); ++j) {
        if (j == exclude) continue;
        const auto& q = (*points_)[j];
        if (!q) continue;
        const double d = torus_distance2(x, y, q->kin.x, q->kin.y, l_);
        if (!best || d < best_d) {
            best = j;
            best_d = d;
        }
    }
    return best;
}

NeighborQuery NeighborIndex::query_at(double x, double y, std::uint32_t exclude) const {
    return {within_at(x, y, exclude), closest_at(x, y, exclude)};
}

std::size_t NeighborIndex::count_components() const {
    UnionFind uf(points_->size());
    std::size_t absent = 0;
    const double r2 = r_ * r_;
    auto near = [&](std::uint32_t a, std::uint32_t b) {
        const auto& pa = (*points_)[a]->kin;
        const auto& pb = (*points_)[b]->kin;
        return torus_distance2(pa.x, pa.y, pb.x, pb.y, l_) <= r2;
    };
    if (cells_ == 1) {
        for (std::uint32_t i = 0; i < points_->size(); ++i) {
            if (!(*points_)[i]) {
                ++absent;
                continue;
            }
            for (std::uint32_t j = i + 1; j < points_->size(); ++j)
                if ((*points_)[j] && near(i, j)) uf.merge(i, j);
        }
        return uf.component_count() - absent;
    }
    const auto n = static_cast<std::ptrdiff_t>(cells_);
    for (std::uint32_t i = 0; i < points_->size(); ++i) {
        const auto& p = (*points_)[i];
        if (!p) {
            ++absent;
            continue;
        }
        auto cx = static_cast<std::ptrdiff_t>(p->kin.x / cell_size_);
        auto cy = static_cast<std::ptrdiff_t>(p->kin.y / cell_size_);
        if (cx >= n) cx = n - 1;
        if (cy >= n) cy = n - 1;
        for (std::ptrdiff_t dy = -1; dy <= 1; ++dy) {
            for (std::ptrdiff_t dx = -1; dx <= 1; ++dx) {
                const std::size_t bx = static_cast<std::size_t>((cx + dx + n) % n);
                const std::size_t by = static_cast<std::size_t>((cy + dy + n) % n);
                for (std::uint32_t j : bins_[by * cells_ + bx])
                    if (j > i && near(i, j)) uf.merge(i, j);
            }
        }
    }
    // Absent slots each count as a singleton in the forest.
    return uf.component_count() - absent;
}

std::vector<std::uint32_t> NeighborIndex::within(std::uint32_t self) const {
    const auto& me = (*points_)[self];
    if (!me) return {};
    return within_at(me->kin.x, me->kin.y, self);
}

NeighborQuery NeighborIndex::query(std::uint32_t self) const {
    const auto& me = (*points_)[self];
    if (!me) return {};
    return query_at(me->kin.x, me->kin.y, self);
}

std::vector<NeighborQuery> radius_neighbors(const std::shared_ptr<const Ledger>& points, double r,
                                            double l) {
    NeighborIndex index(points, r, l);
    std::vector<NeighborQuery> out(points->size());
    for (std::uint32_t i = 0; i < points->size(); ++i)
        if ((*points)[i]) out[i] = index.query(i);
    return out;
}

std::vector<NeighborQuery> brute_force_neighbors(const Ledger& points, double r, double l) {
    std::vector<NeighborQuery> out(points.size());
    for (std::uint32_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!p) continue;
        std::optional<std::uint32_t> best;
        double best_d = 0;
        for (std::uint32_t j = 0; j < points.size(); ++j) {
            if (i == j) continue;
            const auto& q = points[j];
            if (!q) continue;
            const double d2 = torus_distance2(p->kin.x, p->kin.y, q->kin.x, q->kin.y, l);
            if (d2 <= r * r) out[i].within.push_back(j);
            if (!best || d2 < best_d) {
                best = j;
                best_d = d2;
            }
        }
        out[i].closest = best;
    }
    return out;
}

namespace {

ClusterStats stats_from_components(const Ledger& points, double l,
                                   const std::vector<std::vector<std::uint32_t>>& members) {
    ClusterStats st;
    st.n_clusters = members.size();
    double sum_avg = 0, sum_complete = 0;
    std::size_t multi = 0, total = 0;
    for (const auto& m : members) {
        st.sizes.push_back(static_cast<std::uint32_t>(m.size()));
        total += m.size();
        if (m.size() < 2) continue;
        ++multi;
        double acc = 0, worst = 0;
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < m.size(); ++a) {
            const auto& pa = *points[m[a]];
            for (std::size_t b = a + 1; b < m.size(); ++b) {
                const auto& pb = *points[m[b]];
                const double d = torus_distance(pa.kin.x, pa.kin.y, pb.kin.x, pb.kin.y, l);
                acc += d;
                if (d > worst) worst = d;
                ++pairs;
            }
        }
        sum_avg += acc / static_cast<double>(pairs);
        sum_complete += worst;
    }
    st.mean_size = st.n_clusters ? static_cast<double>(total) / static_cast<double>(st.n_clusters) : 0.0;
    st.intra_avg_dist = multi ? sum_avg / static_cast<double>(multi) : 0.0;
    st.intra_complete_dist = multi ? sum_complete / static_cast<double>(multi) : 0.0;
    return st;
}

/// Components from per-point neighbor lists; clusters ordered by lowest
/// member id.
std::vector<std::vector<std::uint32_t>> components_of(const Ledger& points,
                                                      const std::vector<NeighborQuery>& queries) {
    UnionFind uf(points.size());
    for (std::uint32_t i = 0; i < points.size(); ++i) {
        if (!points[i]) continue;
        for (std::uint32_t j : queries[i].within) uf.merge(i, j);
    }
    std::map<std::uint32_t, std::vector<std::uint32_t>> by_root;
    for (std::uint32_t i = 0; i < points.size(); ++i)
        if (points[i]) by_root[uf.find(i)].push_back(i);
    std::vector<std::vector<std::uint32_t>> out;
    out.reserve(by_root.size());
    for (auto& [root, m] : by_root) out.push_back(std::move(m));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

} // namespace

ClusterStats brute_force_clusters(const Ledger& points, double r, double l) {
    return stats_from_components(points, l, components_of(points, brute_force_neighbors(points, r, l)));
}

// ---------------------------------------------------------------------------
// Global state

std::size_t FlockGlobal::present_count() const {
    std::size_t n = 0;
    for (const auto& b : *birds)
        if (b) ++n;
    return n;
}

std::size_t FlockGlobal::n_super() const {
    std::size_t n = 0;
    for (const auto& b : *birds)
        if (b && b->super) ++n;
    return n;
}

std::size_t FlockGlobal::n_clusters() const {
    // Counting components is much cheaper than the distance statistics, and
    // it is all the behavioral variants consume; this path avoids the
    // per-point list building of the full query.
    if (!cache->n_clusters) cache->n_clusters = index->count_components();
    return *cache->n_clusters;
}

const ClusterStats& FlockGlobal::cluster_stats() const {
    if (!cache->stats) {
        std::vector<NeighborQuery> queries(birds->size());
        for (std::uint32_t i = 0; i < birds->size(); ++i)
            if ((*birds)[i]) queries[i].within = index->within(i);
        cache->stats = stats_from_components(*birds, l, components_of(*birds, queries));
        cache->n_clusters = cache->stats->n_clusters;
    }
    return *cache->stats;
}

NeighborQuery FlockGlobal::query_at(double x, double y, std::uint32_t exclude) const {
    return index->query_at(x, y, exclude);
}

std::string FlockGlobal::format() const {
    return "flock(n=" + std::to_string(present_count()) + ")";
}

GlobalTransition flock_delta(const FlockGlobal& g, const MicroBag& bag) {
    FlockGlobal next = g;
    auto ledger = std::make_shared<Ledger>(*g.birds);
    for (const auto& [sender, payload] : bag) {
        const auto& rep = payload.as<BirdReport>();
        (*ledger)[rep.id] = LedgerEntry{rep.kin, rep.super};
    }
    next.birds = ledger;
    next.index = std::make_shared<const NeighborIndex>(ledger, g.r, g.l);
    next.cache = std::make_shared<FlockGlobal::Cache>();
    return {Value::of(std::move(next)), Value{}};
}

// ---------------------------------------------------------------------------
// Bird behavior

std::string BirdState::format() const {
    std::ostringstream os;
    os << '(' << format_double(kin.x) << ';' << format_double(kin.y) << ';'
       << format_double(kin.heading);
    if (sc_ticks_left > 0) os << ";sc=" << sc_ticks_left;
    os << ')';
    return os.str();
}

std::string BirdReport::format() const {
    return "(" + format_double(kin.x) + ";" + format_double(kin.y) + ";" +
           format_double(kin.heading) + ")";
}

namespace {

double turn_toward(double heading, double target, double bound) {
    const double d = std::clamp(wrap_to_pi(target - heading), -bound, bound);
    return normalize_angle(heading + d);
}

double turn_negated(double heading, double target, double bound) {
    const double d = std::clamp(wrap_to_pi(target - heading), -bound, bound);
    return normalize_angle(heading - d);
}

double turn_away(double heading, double bearing, double bound) {
    // Step in whichever direction grows the angular distance to the bearing.
    const double d = wrap_to_pi(heading - bearing);
    return normalize_angle(heading + (d >= 0 ? bound : -bound));
}

struct Com {
    bool valid = false;
    double bearing = 0;
};

Com center_of_mass_bearing(const FlockGlobal& view, const Kinematics& me,
                           std::span<const std::uint32_t> neighbors) {
    if (neighbors.empty()) return {};
    double sx = 0, sy = 0;
    for (std::uint32_t j : neighbors) {
        const auto& q = (*view.birds)[j]->kin;
        sx += torus_delta(me.x, q.x, view.l);
        sy += torus_delta(me.y, q.y, view.l);
    }
    sx /= static_cast<double>(neighbors.size());
    sy /= static_cast<double>(neighbors.size());
    if (std::abs(sx) < 1e-12 && std::abs(sy) < 1e-12) return {};
    return {true, std::atan2(sy, sx)};
}

} // namespace

Transition bird_delta_int(const BirdState& s, const Value& macro, const Params& p) {
    BirdState next = s;
    const auto& view = macro.as<FlockGlobal>();
    if (s.id >= view.birds->size())
        throw internal_error("boids: macro view does not know bird " + std::to_string(s.id));

    const NeighborQuery q = view.query_at(s.kin.x, s.kin.y, s.id);

    if (!q.closest) {
        // Nothing known around (first tick, or a lone bird): plain advance.
    } else {
        const auto& closest = (*view.birds)[*q.closest]->kin;
        const double closest_d =
            torus_distance(s.kin.x, s.kin.y, closest.x, closest.y, p.grid_size);

        // Brave birds enter super-cohesion when the flock count spikes.
        if (p.variant == Variant::ba && next.sc_ticks_left == 0 && next.sc_activations_left > 0 &&
            static_cast<double>(view.n_clusters()) > p.ba_threshold) {
            next.sc_ticks_left = static_cast<int>(std::lround(next.sc_next_duration));
            next.sc_next_duration *= p.ba_decay;
            --next.sc_activations_left;
        }
        const bool super = next.sc_ticks_left > 0;

        if (closest_d < p.min_dist) {
            const double bearing =
                std::atan2(torus_delta(s.kin.y, closest.y, p.grid_size),
                           torus_delta(s.kin.x, closest.x, p.grid_size));
            next.kin.heading = turn_away(s.kin.heading, bearing, rad(p.sep_turn_deg));
        } else if (p.variant == Variant::fa &&
                   static_cast<double>(view.n_clusters()) > p.fa_threshold) {
            // Anti-cohesion: the cohesion turn, negated.
            const Com com = center_of_mass_bearing(view, s.kin, q.within);
            if (com.valid)
                next.kin.heading = turn_negated(s.kin.heading, com.bearing, rad(p.cohere_turn_deg));
        } else if (!q.within.empty()) {
            std::vector<double> headings;
            headings.reserve(q.within.size());
            for (std::uint32_t j : q.within) headings.push_back((*view.birds)[j]->kin.heading);
            if (const auto mean = angular_mean(headings))
                next.kin.heading = turn_toward(next.kin.heading, *mean, rad(p.align_turn_deg));
            const Com com = center_of_mass_bearing(view, s.kin, q.within);
            if (com.valid) {
                const double bound = rad(p.cohere_turn_deg) * (super ? 2.0 : 1.0);
                next.kin.heading = turn_toward(next.kin.heading, com.bearing, bound);
            }
        }
        if (next.sc_ticks_left > 0) --next.sc_ticks_left;
    }

    next.kin.x = std::fmod(next.kin.x + p.velocity * std::cos(next.kin.heading), p.grid_size);
    if (next.kin.x < 0) next.kin.x += p.grid_size;
    next.kin.y = std::fmod(next.kin.y + p.velocity * std::sin(next.kin.heading), p.grid_size);
    if (next.kin.y < 0) next.kin.y += p.grid_size;

    Value y_up = Value::of(BirdReport{next.id, next.kin, next.sc_ticks_left > 0});
    return {Value::of(std::move(next)), std::move(y_up)};
}

// ---------------------------------------------------------------------------

ModelSpec build(const Params& p, std::uint64_t seed, std::uint64_t stream) {
    if (p.n_birds < 1) throw usage_error("boids: n_birds must be >= 1");
    RngStream init_rng = RngStream::make(seed, stream).derive(0);

    CoupledSpec flock;
    for (std::uint32_t id = 0; id < p.n_birds; ++id) {
        BirdState s;
        s.id = id;
        s.kin.x = init_rng.uniform(0.0, p.grid_size);
        s.kin.y = init_rng.uniform(0.0, p.grid_size);
        s.kin.heading = init_rng.uniform(0.0, TWO_PI);
        if (p.variant == Variant::ba) {
            s.sc_activations_left = p.ba_activations;
            s.sc_next_duration = p.ba_first_duration;
        }

        AtomicSpec a;
        a.initial = Value::of(std::move(s));
        a.ta = [](const Value&) { return SimTime(1.0); };
        a.delta_int = [p](const Value& sv, const Value& macro) {
            return bird_delta_int(sv.as<BirdState>(), macro, p);
        };
        // Birds interact only through the environment: no inputs, no outputs.
        flock.children.push_back({ModelId{id}, std::to_string(id), ModelSpec::atomic(std::move(a))});
    }

    FlockGlobal g0;
    g0.l = p.grid_size;
    g0.r = p.radius;
    g0.birds = std::make_shared<const Ledger>(p.n_birds);
    g0.index = std::make_shared<const NeighborIndex>(g0.birds, g0.r, g0.l);
    g0.cache = std::make_shared<FlockGlobal::Cache>();

    flock.initial_global = Value::of(std::move(g0));
    flock.delta_g = [](const Value& s_g, SimTime, const MicroBag& bag, const Value&) {
        return flock_delta(s_g.as<FlockGlobal>(), bag);
    };
    flock.v_down = [](const Value& s_g) { return s_g; };

    return ModelSpec::coupled(std::move(flock));
}

} // namespace ebdevs::boids
