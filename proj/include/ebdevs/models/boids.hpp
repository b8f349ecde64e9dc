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
#include <optional>
#include <vector>

#include "ebdevs/model.hpp"
#include "ebdevs/rng.hpp"

namespace ebdevs::boids {

enum class Variant : std::uint8_t { vanilla, fa, ba };

struct Params {
    std::size_t n_birds = 200;
    double grid_size = 70.0; // torus side L
    double radius = 5.0;     // flock-mate visibility
    double min_dist = 0.5;   // separation trigger
    double velocity = 1.0;
    Variant variant = Variant::vanilla;
    double fa_threshold = 14.0;  // clusters above which fearful birds scatter
    double ba_threshold = 10.0;  // clusters above which brave birds super-cohere
    int ba_first_duration = 20;  // ticks of the first super-cohesion period
    double ba_decay = 0.5;       // period shrink per activation
    int ba_activations = 3;
    double sep_turn_deg = 30.0;
    double align_turn_deg = 15.0;
    double cohere_turn_deg = 10.0;
};

/// Euclidean distance under the minimum-image convention per axis.
double torus_distance(double ax, double ay, double bx, double by, double l);

/// Signed displacement from a to b, wrapped into (-l/2, l/2].
double torus_delta(double a, double b, double l);

/// Angle normalized into [0, 2*pi).
double normalize_angle(double a);

/// atan2 of the mean sine and cosine, in [0, 2*pi); nullopt when the mean
/// vector has (numerically) zero magnitude.
std::optional<double> angular_mean(std::span<const double> headings);

struct Kinematics {
    double x = 0, y = 0, heading = 0;
    friend bool operator==(const Kinematics&, const Kinematics&) = default;
};

struct LedgerEntry {
    Kinematics kin;
    bool super = false; // bird reported itself in super-cohesion
    friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

/// Position ledger: one slot per bird id; empty until the bird's first
/// report arrives.
using Ledger = std::vector<std::optional<LedgerEntry>>;

/// Per-point radius query answers against one position snapshot.
struct NeighborQuery {
    std::vector<std::uint32_t> within;    // ids at distance <= r, ascending, self excluded
    std::optional<std::uint32_t> closest; // nearest point regardless of r; ties to lowest id
};

/// Uniform-grid index over torus positions; radius answers must match the
/// brute-force all-pairs scan exactly (the grid only prunes cells whose
/// nearest corner already exceeds r).
class NeighborIndex {
public:
    NeighborIndex(std::shared_ptr<const Ledger> points, double r, double l);

    /// Queries centered on a ledger point.
    NeighborQuery query(std::uint32_t self) const;
    std::vector<std::uint32_t> within(std::uint32_t self) const;

    /// Queries centered on an arbitrary location; `exclude` is skipped.
    /// Birds ask around their own state, which need not be in the ledger.
    NeighborQuery query_at(double x, double y, std::uint32_t exclude) const;
    std::vector<std::uint32_t> within_at(double x, double y, std::uint32_t exclude) const;
    std::optional<std::uint32_t> closest_at(double x, double y, std::uint32_t exclude) const;

    /// Connected components of the radius graph over the present points.
    std::size_t count_components() const;

private:
    std::shared_ptr<const Ledger> points_;
    double r_, l_;
    std::size_t cells_;
    double cell_size_;
    std::vector<std::vector<std::uint32_t>> bins_;
};

/// All per-point radius lists and closest points in one pass.
std::vector<NeighborQuery> radius_neighbors(const std::shared_ptr<const Ledger>& points, double r,
                                            double l);

struct ClusterStats {
    std::size_t n_clusters = 0;
    std::vector<std::uint32_t> sizes; // one per cluster, in discovery order by lowest member id
    double mean_size = 0.0;
    double intra_avg_dist = 0.0;      // mean over multi-bird clusters of mean pairwise distance
    double intra_complete_dist = 0.0; // mean over multi-bird clusters of max pairwise distance
};

struct BirdState {
    std::uint32_t id = 0;
    Kinematics kin;
    // Super-cohesion bookkeeping (BA variant).
    int sc_ticks_left = 0;
    int sc_activations_left = 0;
    double sc_next_duration = 0.0;

    friend bool operator==(const BirdState&, const BirdState&) = default;
    std::string format() const;
};

/// Upward payload: the bird's new kinematic state.
struct BirdReport {
    std::uint32_t id = 0;
    Kinematics kin;
    bool super = false;
    friend bool operator==(const BirdReport&, const BirdReport&) = default;
    std::string format() const;
};

/// Global state: the ledger (empty at t0, so the first tick is a plain
/// advance), the neighbor index over it, and lazily computed cluster data.
struct FlockGlobal {
    double l = 0, r = 0;
    std::shared_ptr<const Ledger> birds;
    std::shared_ptr<const NeighborIndex> index;

    struct Cache {
        std::optional<std::size_t> n_clusters;
        std::optional<ClusterStats> stats;
    };
    std::shared_ptr<Cache> cache; // derived data; excluded from equality

    std::size_t present_count() const;
    std::size_t n_super() const;
    std::size_t n_clusters() const;       // connected components of the proximity graph
    const ClusterStats& cluster_stats() const;
    NeighborQuery query_at(double x, double y, std::uint32_t exclude) const;

    friend bool operator==(const FlockGlobal& a, const FlockGlobal& b) {
        return a.l == b.l && a.r == b.r && *a.birds == *b.birds;
    }
    std::string format() const;
};

Transition bird_delta_int(const BirdState& s, const Value& macro, const Params& p);
GlobalTransition flock_delta(const FlockGlobal& g, const MicroBag& bag);

/// Independent oracle path: all-pairs scan and union-find, no index.
std::vector<NeighborQuery> brute_force_neighbors(const Ledger& points, double r, double l);
ClusterStats brute_force_clusters(const Ledger& points, double r, double l);

ModelSpec build(const Params& p, std::uint64_t seed, std::uint64_t stream);

} // namespace ebdevs::boids
