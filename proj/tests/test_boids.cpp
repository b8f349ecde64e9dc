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
#include <doctest.h>

#include <numbers>

#include "ebdevs/models/boids.hpp"
#include "ebdevs/simulator.hpp"

using namespace ebdevs;
using namespace ebdevs::boids;

namespace {
constexpr double PI = std::numbers::pi;

std::shared_ptr<const Ledger> make_ledger(std::initializer_list<Kinematics> kins) {
    Ledger ledger;
    for (const Kinematics& k : kins) ledger.push_back(LedgerEntry{k, false});
    return std::make_shared<const Ledger>(std::move(ledger));
}

FlockGlobal make_view(std::shared_ptr<const Ledger> ledger, double r, double l) {
    FlockGlobal g;
    g.l = l;
    g.r = r;
    g.birds = std::move(ledger);
    g.index = std::make_shared<const NeighborIndex>(g.birds, r, l);
    g.cache = std::make_shared<FlockGlobal::Cache>();
    return g;
}

Ledger random_ledger(std::size_t n, double l, std::uint64_t seed) {
    RngStream rng = RngStream::make(seed, 0);
    Ledger ledger;
    ledger.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        ledger.push_back(LedgerEntry{{rng.uniform(0.0, l), rng.uniform(0.0, l),
                                      rng.uniform(0.0, 2 * PI)},
                                     false});
    return ledger;
}

} // namespace

TEST_SUITE("torus") {
    TEST_CASE("distance examples") {
        CHECK(torus_distance(3, 4, 3, 4, 70) == 0.0);
        CHECK(torus_distance(0, 0, 69, 0, 70) == doctest::Approx(1.0));
        CHECK(torus_distance(0, 0, 35, 35, 70) == doctest::Approx(35.0 * std::sqrt(2.0)));
    }

    TEST_CASE("deltas wrap into the half-open interval") {
        CHECK(torus_delta(0, 69, 70) == doctest::Approx(-1.0));
        CHECK(torus_delta(69, 0, 70) == doctest::Approx(1.0));
        CHECK(torus_delta(0, 35, 70) == doctest::Approx(35.0));
    }
}

TEST_SUITE("radius_neighbors") {
    TEST_CASE("two birds three apart see each other") {
        auto view = make_view(make_ledger({{10, 10, 0}, {13, 10, 0}}), 5, 70);
        const NeighborQuery q0 = view.query_at(10, 10, 0);
        CHECK(q0.within == std::vector<std::uint32_t>{1});
        CHECK(q0.closest == 1);
        const NeighborQuery q1 = view.query_at(13, 10, 1);
        CHECK(q1.within == std::vector<std::uint32_t>{0});
        CHECK(q1.closest == 0);
    }

    TEST_CASE("out-of-radius birds still have a closest point") {
        auto view = make_view(make_ledger({{10, 10, 0}, {20, 10, 0}}), 5, 70);
        const NeighborQuery q = view.query_at(10, 10, 0);
        CHECK(q.within.empty());
        CHECK(q.closest == 1);
    }

    TEST_CASE("the grid matches the all-pairs oracle exactly") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto ledger = std::make_shared<const Ledger>(random_ledger(200, 70, seed));
            const auto fast = radius_neighbors(ledger, 5, 70);
            const auto slow = brute_force_neighbors(*ledger, 5, 70);
            for (std::size_t i = 0; i < ledger->size(); ++i) {
                CHECK(fast[i].within == slow[i].within);
                CHECK(fast[i].closest == slow[i].closest);
            }
        }
    }
}

TEST_SUITE("angular_mean") {
    TEST_CASE("a repeated heading is its own mean") {
        const double xs[] = {1.2, 1.2};
        CHECK(*angular_mean(xs) == doctest::Approx(1.2));
    }

    TEST_CASE("the mean of 350 and 10 degrees is 0") {
        const double xs[] = {350.0 * PI / 180.0, 10.0 * PI / 180.0};
        const double m = *angular_mean(xs);
        CHECK((m < 1e-9 || m > 2 * PI - 1e-9));
    }

    TEST_CASE("antipodal headings cancel") {
        const double xs[] = {0.0, PI};
        CHECK(!angular_mean(xs).has_value());
    }

    TEST_CASE("empty input is a usage error") {
        CHECK_THROWS_AS(angular_mean({}), usage_error);
    }
}

TEST_SUITE("bird_delta_int") {
    TEST_CASE("a lone bird just advances") {
        Params p;
        BirdState s;
        s.id = 0;
        s.kin = {10, 10, 0};
        auto view = make_view(make_ledger({{10, 10, 0}}), p.radius, p.grid_size);
        const Transition tr = bird_delta_int(s, Value::of(view), p);
        const auto& next = tr.state.as<BirdState>();
        CHECK(next.kin.x == doctest::Approx(11.0));
        CHECK(next.kin.y == doctest::Approx(10.0));
        CHECK(next.kin.heading == 0.0);
    }

    TEST_CASE("a crowding neighbor triggers separation only") {
        Params p;
        BirdState s;
        s.id = 0;
        s.kin = {10, 10, PI / 2}; // closest sits to the east, bearing 0
        auto view = make_view(make_ledger({{10, 10, PI / 2}, {10.3, 10, 0}}), p.radius, p.grid_size);
        const Transition tr = bird_delta_int(s, Value::of(view), p);
        const auto& next = tr.state.as<BirdState>();
        // Heading is north of the bearing: the bird turns further away by
        // exactly the separation bound.
        CHECK(next.kin.heading ==
              doctest::Approx(PI / 2 + 30.0 * PI / 180.0));
    }

    TEST_CASE("positions wrap around the torus") {
        Params p;
        BirdState s;
        s.id = 0;
        s.kin = {69.5, 0, 0};
        auto view = make_view(make_ledger({{69.5, 0, 0}}), p.radius, p.grid_size);
        const Transition tr = bird_delta_int(s, Value::of(view), p);
        CHECK(tr.state.as<BirdState>().kin.x == doctest::Approx(0.5));
    }

    TEST_CASE("the report mirrors the new state") {
        Params p;
        BirdState s;
        s.id = 0;
        s.kin = {5, 5, 1.0};
        auto view = make_view(make_ledger({{5, 5, 1.0}}), p.radius, p.grid_size);
        const Transition tr = bird_delta_int(s, Value::of(view), p);
        CHECK(tr.y_up.as<BirdReport>().kin == tr.state.as<BirdState>().kin);
    }
}

TEST_SUITE("variants") {
    namespace {
    /// 12 far-apart singleton clusters plus one pair around the probe bird.
    FlockGlobal scattered_view(const Params& p) {
        Ledger ledger;
        ledger.push_back(LedgerEntry{{10, 10, 0}, false});  // probe
        ledger.push_back(LedgerEntry{{12, 10, 0}, false});  // its flock-mate
        for (int i = 0; i < 11; ++i)
            ledger.push_back(LedgerEntry{{30.0 + 6.0 * i, 40.0 + 2.0 * (i % 3), 0}, false});
        FlockGlobal g;
        g.l = 100;
        g.r = p.radius;
        g.birds = std::make_shared<const Ledger>(std::move(ledger));
        g.index = std::make_shared<const NeighborIndex>(g.birds, g.r, g.l);
        g.cache = std::make_shared<FlockGlobal::Cache>();
        return g;
    }
    } // namespace

    TEST_CASE("fearful birds invert cohesion above the threshold") {
        Params p;
        p.grid_size = 100;
        const FlockGlobal view = scattered_view(p);
        REQUIRE(view.n_clusters() == 12);

        BirdState s;
        s.id = 0;
        s.kin = {10, 10, PI / 2};

        Params vanilla = p;
        vanilla.variant = Variant::vanilla;
        Params fearful = p;
        fearful.variant = Variant::fa;
        fearful.fa_threshold = 10;

        const auto h_van =
            bird_delta_int(s, Value::of(view), vanilla).state.as<BirdState>().kin.heading;
        const auto h_fa =
            bird_delta_int(s, Value::of(view), fearful).state.as<BirdState>().kin.heading;
        // The flock-mate lies east; vanilla leans toward it, fear leans away.
        CHECK(h_van < PI / 2);
        CHECK(h_fa > PI / 2);

        Params calm = fearful;
        calm.fa_threshold = 20; // 12 clusters stay below this
        const auto h_calm =
            bird_delta_int(s, Value::of(view), calm).state.as<BirdState>().kin.heading;
        CHECK(h_calm == h_van);
    }

    TEST_CASE("brave birds double the cohesion bound during super-cohesion") {
        Params p;
        p.grid_size = 100;
        p.variant = Variant::ba;
        p.ba_threshold = 10;
        p.align_turn_deg = 0; // isolate the cohesion turn
        const FlockGlobal view = scattered_view(p);

        BirdState s;
        s.id = 0;
        s.kin = {10, 10, PI / 2};
        s.sc_activations_left = 3;
        s.sc_next_duration = 20;

        const auto& next = bird_delta_int(s, Value::of(view), p).state.as<BirdState>();
        // Activation happened and the cohesion turn used the doubled bound.
        CHECK(next.sc_activations_left == 2);
        CHECK(next.sc_ticks_left == 19); // 20 minus this tick
        CHECK(next.kin.heading ==
              doctest::Approx(PI / 2 - 2.0 * 10.0 * PI / 180.0));

        // Successive activation periods shrink.
        CHECK(next.sc_next_duration == doctest::Approx(10.0));
    }

    TEST_CASE("exhausted activations leave behavior vanilla") {
        Params p;
        p.grid_size = 100;
        p.variant = Variant::ba;
        p.ba_threshold = 10;
        const FlockGlobal view = scattered_view(p);

        BirdState s;
        s.id = 0;
        s.kin = {10, 10, PI / 2};
        s.sc_activations_left = 0;

        Params vanilla = p;
        vanilla.variant = Variant::vanilla;
        BirdState plain = s;

        const auto& brave = bird_delta_int(s, Value::of(view), p).state.as<BirdState>();
        const auto& van = bird_delta_int(plain, Value::of(view), vanilla).state.as<BirdState>();
        CHECK(brave.kin == van.kin);
        CHECK(brave.sc_ticks_left == 0);
    }
}

TEST_SUITE("flock_delta") {
    TEST_CASE("a lone bird forms one cluster with zero spread") {
        auto view = make_view(make_ledger({{10, 10, 0}}), 5, 70);
        CHECK(view.n_clusters() == 1);
        CHECK(view.cluster_stats().intra_avg_dist == 0.0);
        CHECK(view.cluster_stats().intra_complete_dist == 0.0);
    }

    TEST_CASE("two birds three apart form one cluster of spread three") {
        auto view = make_view(make_ledger({{10, 10, 0}, {13, 10, 0}}), 5, 70);
        const ClusterStats& st = view.cluster_stats();
        CHECK(st.n_clusters == 1);
        CHECK(st.sizes == std::vector<std::uint32_t>{2});
        CHECK(st.intra_complete_dist == doctest::Approx(3.0));
        CHECK(st.intra_avg_dist == doctest::Approx(3.0));
    }

    TEST_CASE("cluster decomposition matches the brute-force oracle") {
        for (std::uint64_t seed = 100; seed < 110; ++seed) {
            const Ledger ledger = random_ledger(200, 70, seed);
            auto view = make_view(std::make_shared<const Ledger>(ledger), 5, 70);
            const ClusterStats fast = view.cluster_stats();
            const ClusterStats slow = brute_force_clusters(ledger, 5, 70);
            CHECK(fast.n_clusters == slow.n_clusters);
            CHECK(fast.sizes == slow.sizes);
            CHECK(fast.intra_avg_dist == doctest::Approx(slow.intra_avg_dist));
            CHECK(fast.intra_complete_dist == doctest::Approx(slow.intra_complete_dist));
        }
    }

    TEST_CASE("sizes sum to the number of present birds") {
        const Ledger ledger = random_ledger(150, 70, 12);
        auto view = make_view(std::make_shared<const Ledger>(ledger), 5, 70);
        std::size_t total = 0;
        for (const auto size : view.cluster_stats().sizes) total += size;
        CHECK(total == 150);
    }

    TEST_CASE("reports land in the ledger") {
        auto view = make_view(make_ledger({{10, 10, 0}, {13, 10, 0}}), 5, 70);
        MicroBag bag{{ModelId{1}, Value::of(BirdReport{1, {50, 50, 1}, true})}};
        const GlobalTransition out = flock_delta(view, bag);
        const auto& g2 = out.global.as<FlockGlobal>();
        CHECK((*g2.birds)[1]->kin.x == 50);
        CHECK(g2.n_super() == 1);
        CHECK(g2.n_clusters() == 2);
    }
}

TEST_SUITE("boids_run") {
    TEST_CASE("positions and headings stay normalized through a run") {
        const auto model = boids::build(
            [] {
                Params p;
                p.n_birds = 20;
                p.grid_size = 25;
                return p;
            }(),
            7, 0);
        RootCoordinator root(model);
        root.enable_full_trace();
        root.init();
        root.run_until(SimTime(40.0));
        for (const TraceRecord& r : root.trace().records()) {
            if (r.kind != TraceRecord::Kind::delta_int) continue;
            const auto& s = r.state.as<BirdState>();
            CHECK(s.kin.x >= 0.0);
            CHECK(s.kin.x < 25.0);
            CHECK(s.kin.y >= 0.0);
            CHECK(s.kin.y < 25.0);
            CHECK(s.kin.heading >= 0.0);
            CHECK(s.kin.heading < 2 * PI);
        }
    }
}
