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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ebdevs/id.hpp"
#include "ebdevs/time.hpp"
#include "ebdevs/value.hpp"

namespace ebdevs {

/// Result of an atomic transition: the new state plus the upward-causation
/// payload for the parent's micro bag (null when nothing is reported).
struct Transition {
    Value state;
    Value y_up;
};

using TaFn = std::function<SimTime(const Value& s)>;
using DeltaIntFn = std::function<Transition(const Value& s, const Value& s_macro)>;
using DeltaExtFn = std::function<Transition(const Value& s, SimTime e, const Value& x, const Value& s_macro)>;
using LambdaFn = std::function<Value(const Value& s)>;

/// Atomic behavior contract. Transition functions receive the parent's macro
/// view and may report upward; with both channels unused this is a plain
/// Classic DEVS atomic. All functions must be pure: stochastic models carry
/// their stream inside the state value.
struct AtomicSpec {
    Value initial;
    TaFn ta;
    DeltaIntFn delta_int;
    DeltaExtFn delta_ext; // may be empty: model accepts no inputs
    LambdaFn lambda;      // may be empty: model never outputs
};

/// Classic DEVS atomic as a seven-tuple, for models written without
/// micro-macro channels.
struct ClassicAtomicSpec {
    Value initial;
    std::function<SimTime(const Value&)> ta;
    std::function<Value(const Value& s)> delta_int;
    std::function<Value(const Value& s, SimTime e, const Value& x)> delta_ext;
    std::function<Value(const Value& s)> lambda;
};

/// Embeds a Classic atomic into the extended contract: the macro view is
/// ignored and no upward payload is ever produced. Kernel behavior is
/// identical to a reference Classic execution.
AtomicSpec classic_lift(ClassicAtomicSpec classic);

/// Coupling endpoint: the enclosing coupled model itself, or one child.
class Endpoint {
public:
    static Endpoint self() { return Endpoint(true, ModelId{}); }
    static Endpoint child(ModelId id) { return Endpoint(false, id); }

    bool is_self() const { return is_self_; }
    ModelId id() const { return id_; }

    friend auto operator<=>(const Endpoint&, const Endpoint&) = default;

    std::string str() const { return is_self_ ? "self" : id_.str(); }

private:
    Endpoint(bool s, ModelId id) : is_self_(s), id_(id) {}
    bool is_self_;
    ModelId id_;
};

/// Translation function. Returning a null Value means the event is not
/// delivered along this coupling (used e.g. to address one neighbor).
using ZFn = std::function<Value(const Value&)>;

/// Ordered bag of upward payloads, keyed by sender. Consumed in ascending
/// sender order.
using MicroBag = std::vector<std::pair<ModelId, Value>>;

struct GlobalTransition {
    Value global; // new s_G
    Value y_up;   // y_Gup towards the grandparent's bag, or null
};

using DeltaGFn = std::function<GlobalTransition(const Value& s_g, SimTime e_g, const MicroBag& bag,
                                                const Value& s_gmacro)>;
using VDownFn = std::function<Value(const Value& s_g)>;

struct CoupledSpec;

/// A component model: atomic or coupled. Immutable after construction.
class ModelSpec {
public:
    ModelSpec() = default;
    static ModelSpec atomic(AtomicSpec spec);
    static ModelSpec coupled(CoupledSpec spec);

    bool is_atomic() const { return atomic_ != nullptr; }
    bool is_coupled() const { return coupled_ != nullptr; }
    bool empty() const { return !atomic_ && !coupled_; }

    const AtomicSpec& as_atomic() const;
    const CoupledSpec& as_coupled() const;

    std::shared_ptr<const AtomicSpec> atomic_ptr() const { return atomic_; }
    std::shared_ptr<const CoupledSpec> coupled_ptr() const { return coupled_; }

private:
    std::shared_ptr<const AtomicSpec> atomic_;
    std::shared_ptr<const CoupledSpec> coupled_;
};

struct Child {
    ModelId id;
    std::string name; // defaults to the decimal id
    ModelSpec spec;
};

struct Coupling {
    Endpoint from;
    Endpoint to;
    ZFn z;
};

/// Coupled model: Classic structure (components, couplings, Select) plus the
/// optional global level. A null delta_g makes this a plain Classic coupled
/// model; then v_down and the initial global state must be null too.
struct CoupledSpec {
    std::vector<Child> children; // sorted ascending by id
    std::vector<Coupling> couplings;
    SelectFn select; // empty: ascending ModelId

    Value initial_global;                   // initial s_G
    VDownFn v_down;                         // macro view served to children
    DeltaGFn delta_g;                       // global transition
    bool invoke_delta_g_on_empty_bag = false;

    const Child* find_child(ModelId id) const;
};

struct Violation {
    std::string path;
    std::string issue;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string str() const;
};

/// Structural validation: non-empty component set, unique ids, no
/// self-influence, coupling endpoints resolvable with legal typing cases,
/// null-channel consistency. Pure: same spec, same report.
ValidationReport validate(const CoupledSpec& spec);

} // namespace ebdevs
