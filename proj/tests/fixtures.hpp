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

#include <string>

#include "ebdevs/model.hpp"

namespace fixtures {

using namespace ebdevs;

/// Classic generator: one tick every `period`, forever. State counts ticks.
inline ClassicAtomicSpec generator(double period) {
    ClassicAtomicSpec g;
    g.initial = Value::of(0);
    g.ta = [period](const Value&) { return SimTime(period); };
    g.delta_int = [](const Value& s) { return Value::of(s.as<int>() + 1); };
    g.lambda = [](const Value&) { return Value::of(std::string("tick")); };
    return g;
}

/// Classic one-shot server: input starts a job of `service` time units, the
/// job ends with a "done" output. Input while busy restarts the job.
inline ClassicAtomicSpec server(double service) {
    ClassicAtomicSpec p;
    p.initial = Value::of(false); // busy flag
    p.ta = [service](const Value& s) {
        return s.as<bool>() ? SimTime(service) : SimTime::infinity();
    };
    p.delta_int = [](const Value&) { return Value::of(false); };
    p.delta_ext = [](const Value&, SimTime, const Value&) { return Value::of(true); };
    p.lambda = [](const Value&) { return Value::of(std::string("done")); };
    return p;
}

/// Classic sink counting its inputs.
inline ClassicAtomicSpec counter() {
    ClassicAtomicSpec s;
    s.initial = Value::of(0);
    s.ta = [](const Value&) { return SimTime::infinity(); };
    s.delta_int = [](const Value& s_) { return s_; };
    s.delta_ext = [](const Value& s_, SimTime, const Value&) { return Value::of(s_.as<int>() + 1); };
    return s;
}

/// Passive model: never transitions, never outputs.
inline ClassicAtomicSpec passive() {
    ClassicAtomicSpec s;
    s.initial = Value::of(0);
    s.ta = [](const Value&) { return SimTime::infinity(); };
    s.delta_int = [](const Value& s_) { return s_; };
    return s;
}

inline ZFn pass_through() {
    return [](const Value& y) { return y; };
}

/// gen -> server -> sink chain under one coupled model.
inline ModelSpec gen_server_sink(double period, double service) {
    CoupledSpec c;
    c.children.push_back({ModelId{0}, "gen", ModelSpec::atomic(classic_lift(generator(period)))});
    c.children.push_back({ModelId{1}, "srv", ModelSpec::atomic(classic_lift(server(service)))});
    c.children.push_back({ModelId{2}, "sink", ModelSpec::atomic(classic_lift(counter()))});
    c.couplings.push_back({Endpoint::child(ModelId{0}), Endpoint::child(ModelId{1}), pass_through()});
    c.couplings.push_back({Endpoint::child(ModelId{1}), Endpoint::child(ModelId{2}), pass_through()});
    return ModelSpec::coupled(std::move(c));
}

/// Two models exchanging events with zero time advance: the illegitimacy
/// fixture.
inline ModelSpec zero_time_ping_pong() {
    auto talker = [](bool starts) {
        ClassicAtomicSpec a;
        a.initial = Value::of(starts); // "has the ball"
        a.ta = [](const Value& s) { return s.as<bool>() ? SimTime(0.0) : SimTime::infinity(); };
        a.delta_int = [](const Value&) { return Value::of(false); };
        a.delta_ext = [](const Value&, SimTime, const Value&) { return Value::of(true); };
        a.lambda = [](const Value&) { return Value::of(std::string("ball")); };
        return a;
    };
    CoupledSpec c;
    c.children.push_back({ModelId{0}, "a", ModelSpec::atomic(classic_lift(talker(true)))});
    c.children.push_back({ModelId{1}, "b", ModelSpec::atomic(classic_lift(talker(false)))});
    c.couplings.push_back({Endpoint::child(ModelId{0}), Endpoint::child(ModelId{1}), pass_through()});
    c.couplings.push_back({Endpoint::child(ModelId{1}), Endpoint::child(ModelId{0}), pass_through()});
    return ModelSpec::coupled(std::move(c));
}

} // namespace fixtures
