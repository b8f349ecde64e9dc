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

#include "ebdevs/id.hpp"
#include "ebdevs/message.hpp"
#include "ebdevs/rng.hpp"
#include "ebdevs/time.hpp"
#include "ebdevs/value.hpp"

using namespace ebdevs;

TEST_SUITE("time") {
    TEST_CASE("time_min picks the least element") {
        const SimTime a[] = {SimTime(3.0), SimTime::infinity(), SimTime(1.5)};
        CHECK(time_min(a) == SimTime(1.5));

        const SimTime b[] = {SimTime::infinity(), SimTime::infinity()};
        CHECK(time_min(b) == SimTime::infinity());

        const SimTime c[] = {SimTime(0.0), SimTime(2.0)};
        CHECK(time_min(c) == SimTime(0.0));
    }

    TEST_CASE("time_min rejects an empty list") {
        CHECK_THROWS_AS(time_min({}), usage_error);
    }

    TEST_CASE("infinity ordering and arithmetic") {
        CHECK(SimTime::infinity() > SimTime(1e300));
        CHECK((SimTime::infinity() + SimTime(5.0)).is_infinite());
        CHECK(SimTime(2.5) + SimTime(0.5) == SimTime(3.0));
        CHECK(SimTime(3.0) - SimTime(1.0) == SimTime(2.0));
        CHECK_THROWS_AS(SimTime(1.0) - SimTime(2.0), usage_error);
        CHECK_THROWS_AS(SimTime(-1.0), usage_error);
    }

    TEST_CASE("min is idempotent and commutative") {
        RngStream rng = RngStream::make(7, 0);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<SimTime> xs;
            const std::size_t n = 1 + rng.uniform_index(6);
            for (std::size_t i = 0; i < n; ++i)
                xs.push_back(rng.uniform01() < 0.2 ? SimTime::infinity()
                                                   : SimTime(rng.uniform(0.0, 10.0)));
            const SimTime m = time_min(xs);
            std::vector<SimTime> rev(xs.rbegin(), xs.rend());
            CHECK(time_min(rev) == m);
            std::vector<SimTime> doubled = xs;
            doubled.insert(doubled.end(), xs.begin(), xs.end());
            CHECK(time_min(doubled) == m);
            CHECK(std::count(xs.begin(), xs.end(), m) >= 1);
        }
    }
}

TEST_SUITE("tiebreak") {
    TEST_CASE("unique minimum wins regardless of select") {
        const std::pair<ModelId, SimTime> entries[] = {{ModelId{0}, SimTime(1.0)},
                                                       {ModelId{1}, SimTime(2.0)}};
        CHECK(compare_then_tiebreak(entries, {}) == ModelId{0});
        SelectFn highest = [](std::span<const ModelId> ids) {
            return *std::max_element(ids.begin(), ids.end());
        };
        CHECK(compare_then_tiebreak(entries, highest) == ModelId{0});
    }

    TEST_CASE("ties resolved by ascending id") {
        const std::pair<ModelId, SimTime> entries[] = {{ModelId{0}, SimTime(1.0)},
                                                       {ModelId{1}, SimTime(1.0)}};
        CHECK(compare_then_tiebreak(entries, {}) == ModelId{0});
    }

    TEST_CASE("tie among a subset") {
        const std::pair<ModelId, SimTime> entries[] = {{ModelId{2}, SimTime(5.0)},
                                                       {ModelId{1}, SimTime(5.0)},
                                                       {ModelId{0}, SimTime(7.0)}};
        CHECK(compare_then_tiebreak(entries, {}) == ModelId{1});
    }

    TEST_CASE("result is always a member of the entry list") {
        RngStream rng = RngStream::make(11, 0);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<std::pair<ModelId, SimTime>> entries;
            const std::size_t n = 1 + rng.uniform_index(8);
            for (std::size_t i = 0; i < n; ++i)
                entries.emplace_back(ModelId{static_cast<std::uint32_t>(rng.uniform_index(100))},
                                     SimTime(1.0 + rng.uniform_index(3)));
            const ModelId chosen = compare_then_tiebreak(entries, {});
            bool member = false;
            for (const auto& [id, t] : entries) member |= (id == chosen);
            CHECK(member);
        }
    }

    TEST_CASE("select outside the imminent set is rejected") {
        const std::pair<ModelId, SimTime> entries[] = {{ModelId{0}, SimTime(1.0)},
                                                       {ModelId{1}, SimTime(1.0)}};
        SelectFn rogue = [](std::span<const ModelId>) { return ModelId{99}; };
        CHECK_THROWS_AS(compare_then_tiebreak(entries, rogue), internal_error);
    }
}

TEST_SUITE("value") {
    TEST_CASE("null and typed access") {
        Value v;
        CHECK(v.is_null());
        CHECK(v.str().empty());

        Value i = Value::of(42);
        CHECK(!i.is_null());
        CHECK(i.as<int>() == 42);
        CHECK(i.get_if<double>() == nullptr);
        CHECK_THROWS_AS(i.as<double>(), internal_error);
        CHECK(i.str() == "42");
    }

    TEST_CASE("equality is typed") {
        CHECK(Value::of(1) == Value::of(1));
        CHECK(!(Value::of(1) == Value::of(2)));
        CHECK(!(Value::of(1) == Value::of(1.0)));
        CHECK(Value{} == Value{});
        CHECK(!(Value{} == Value::of(0)));
    }
}

TEST_SUITE("message") {
    TEST_CASE("macro view slot on star and x only") {
        CHECK(KernelMessage::make_star(SimTime(1.0), Value{}).carries_macro_view());
        CHECK(KernelMessage::make_x(SimTime(1.0), Value::of(1), Value{}).carries_macro_view());
        CHECK(!KernelMessage::make_init(SimTime(0.0)).carries_macro_view());
        CHECK(!KernelMessage::make_y(SimTime(1.0), Value::of(1)).carries_macro_view());
        CHECK(!KernelMessage::make_done(SimTime(1.0)).carries_macro_view());
    }

    TEST_CASE("y-up carries its payload") {
        const KernelMessage m = KernelMessage::make_y_up(SimTime(2.0), Value::of(3));
        CHECK(m.tag == KernelMessage::Tag::y_up);
        CHECK(m.payload.as<int>() == 3);
    }

    TEST_CASE("tag and port names") {
        CHECK(to_string(KernelMessage::Tag::star) == "*");
        CHECK(to_string(KernelMessage::Tag::y_up) == "y-up");
        CHECK(to_string(PortRef::Kind::broadcast_out) == "bOPort");
        CHECK(to_string(PortRef::Kind::broadcast_in) == "bIPort");
    }
}
