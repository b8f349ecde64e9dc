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
#include <vector>

#include "ebdevs/message.hpp"
#include "ebdevs/model.hpp"
#include "ebdevs/trace.hpp"

namespace ebdevs {

/// One component slot of a flattened model: the child's state, the upward
/// payload of its latest transition (null unless it transitioned in the
/// current event), and its event clock. The clock is kept as absolute
/// last/next event times rather than the elapsed offset so the composite
/// reproduces the processor tree's time arithmetic bit for bit; the elapsed
/// time is their difference to the current instant.
struct FlattenedChild {
    ModelId id;
    std::string name;
    Value state;
    Value y_up;
    SimTime last_event; // tl of the embedded component
    SimTime next_event; // tn = tl + ta(state)

    friend bool operator==(const FlattenedChild&, const FlattenedChild&) = default;
};

/// Composite state of a flattened coupled model: all component slots plus
/// the global level. The elapsed time of the global level is measured from
/// last_event, which advances on every composite event exactly like the
/// coordinator's tl.
struct FlattenedState {
    std::vector<FlattenedChild> children; // ascending id
    Value s_g;
    SimTime last_event;

    friend bool operator==(const FlattenedState&, const FlattenedState&) = default;
    std::string format() const;
};

/// Behaviorally equivalent atomic model for a coupled one. Coupled children
/// are flattened recursively bottom-up. The composite selects the imminent
/// component, applies its internal transition with the macro view, routes
/// its output to influenced components, then runs the global transition over
/// the collected upward payloads.
AtomicSpec flatten(const ModelSpec& coupled_model);

/// Broadcast payload carried over the mesh of a lowered model.
struct BroadcastMsg {
    ModelId sender;
    Value y_up;

    static PortRef out_port() { return {PortRef::Kind::broadcast_out, "bOPort"}; }
    static PortRef in_port() { return {PortRef::Kind::broadcast_in, "bIPort"}; }

    friend bool operator==(const BroadcastMsg&, const BroadcastMsg&) = default;
    std::string format() const;
};

/// Lumped state of a lowered component: pending broadcast payloads, the
/// embedded original state, the local aggregate replica, and the broadcast
/// flag (time advance is 0 whenever a broadcast is pending).
struct LoweredState {
    std::vector<Value> pending;  // y_up payloads awaiting broadcast, oldest first
    Value inner;                 // original model state
    Value macro_replica;         // local copy of the aggregate, fed by peer broadcasts
    SimTime sigma_remaining;     // residual lifetime of the inner state
    SimTime e_accum;             // elapsed time hidden by broadcast receptions

    bool broadcast() const { return !pending.empty(); }

    friend bool operator==(const LoweredState&, const LoweredState&) = default;
    std::string format() const;
};

/// Classic coupled model bisimilar to a root-level coupled model with
/// micro-macro channels: every component gains broadcast ports on a fully
/// connected mesh, carries a local replica of the global transition, and
/// publishes each upward payload as a zero-time broadcast step. Children
/// must be atomic; flatten inner hierarchies first.
CoupledSpec lower_to_classic(const ModelSpec& coupled_model);

enum class TraceProjection {
    /// Record-by-record comparison of the raw traces.
    identity,
    /// Per-cycle observations: all leaf states (composite states expanded
    /// into their component slots), global states, and root outputs.
    cycle_states,
    /// Per-cycle observations over embedded original states only, with
    /// broadcast-internal steps removed (consecutive identical observations
    /// collapse); global/replica values are not compared.
    broadcast_filtered,
};

struct EquivalenceResult {
    bool equal = false;
    std::string divergence; // human-readable pointer to the first mismatch

    explicit operator bool() const { return equal; }
};

/// Compares the projected observation sequences of two terminated runs.
EquivalenceResult trace_equivalent(const Trace& a, const Trace& b, TraceProjection projection);

} // namespace ebdevs
