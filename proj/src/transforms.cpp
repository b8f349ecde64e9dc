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
#include "ebdevs/transforms.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ebdevs {

std::string FlattenedState::format() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (i) os << ';';
        os << children[i].name << '=' << children[i].state.str();
    }
    os << "|sG=" << s_g.str() << '}';
    return os.str();
}

std::string BroadcastMsg::format() const {
    return "bcast(" + sender.str() + ";" + y_up.str() + ")";
}

std::string LoweredState::format() const {
    std::ostringstream os;
    os << "low(" << inner.str() << ";b=" << (broadcast() ? 1 : 0) << ";rep=" << macro_replica.str()
       << ')';
    return os.str();
}

// ---------------------------------------------------------------------------
// Flattening

namespace {

/// Immutable machinery shared by the composite's closures.
struct FlattenCore {
    std::shared_ptr<const CoupledSpec> spec;
    std::vector<std::shared_ptr<const AtomicSpec>> kids; // aligned with spec->children
    std::vector<std::vector<std::pair<std::size_t, const ZFn*>>> routes_to_children; // per source
    std::vector<const ZFn*> routes_to_self;                                          // per source
    std::vector<std::vector<std::pair<std::size_t, const ZFn*>>> routes_from_self_in;

    std::size_t index_of(ModelId id) const {
        const Child* c = spec->find_child(id);
        return static_cast<std::size_t>(c - spec->children.data());
    }

    SimTime next_event(const FlattenedState& fs) const {
        SimTime best = SimTime::infinity();
        for (const FlattenedChild& slot : fs.children)
            if (slot.next_event < best) best = slot.next_event;
        return best;
    }

    std::size_t imminent(const FlattenedState& fs) const {
        std::vector<std::pair<ModelId, SimTime>> entries;
        entries.reserve(fs.children.size());
        for (const FlattenedChild& slot : fs.children)
            entries.emplace_back(slot.id, slot.next_event);
        return index_of(compare_then_tiebreak(entries, spec->select));
    }

    Value macro_view(const FlattenedState& fs) const {
        return spec->v_down ? spec->v_down(fs.s_g) : Value{};
    }

    Value run_delta_g(FlattenedState& fs, SimTime t, MicroBag& bag, const Value& s_gmacro) const {
        Value y_gup;
        if (spec->delta_g && (!bag.empty() || spec->invoke_delta_g_on_empty_bag)) {
            std::stable_sort(bag.begin(), bag.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            GlobalTransition g = spec->delta_g(fs.s_g, t - fs.last_event, bag, s_gmacro);
            fs.s_g = std::move(g.global);
            y_gup = std::move(g.y_up);
        }
        fs.last_event = t;
        return y_gup;
    }
};

} // namespace

AtomicSpec flatten(const ModelSpec& coupled_model) {
    if (!coupled_model.is_coupled()) throw usage_error("flatten: expected a coupled model");
    auto spec = coupled_model.coupled_ptr();

    ValidationReport report = validate(*spec);
    if (!report.ok()) throw usage_error("flatten: invalid coupled model:\n" + report.str());

    auto core = std::make_shared<FlattenCore>();
    core->spec = spec;
    for (const Child& c : spec->children) {
        if (c.spec.is_atomic())
            core->kids.push_back(c.spec.atomic_ptr());
        else
            core->kids.push_back(std::make_shared<const AtomicSpec>(flatten(c.spec)));
    }

    const std::size_t n = spec->children.size();
    core->routes_to_children.assign(n, {});
    core->routes_to_self.assign(n, nullptr);
    core->routes_from_self_in.assign(1, {});
    for (const Coupling& cp : spec->couplings) {
        if (cp.from.is_self()) {
            core->routes_from_self_in[0].emplace_back(core->index_of(cp.to.id()), &cp.z);
        } else if (cp.to.is_self()) {
            core->routes_to_self[core->index_of(cp.from.id())] = &cp.z;
        } else {
            core->routes_to_children[core->index_of(cp.from.id())].emplace_back(
                core->index_of(cp.to.id()), &cp.z);
        }
    }
    for (auto& routes : core->routes_to_children)
        std::sort(routes.begin(), routes.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    std::sort(core->routes_from_self_in[0].begin(), core->routes_from_self_in[0].end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    FlattenedState init;
    for (std::size_t i = 0; i < n; ++i)
        init.children.push_back({spec->children[i].id, spec->children[i].name,
                                 core->kids[i]->initial, Value{}, SimTime::zero(),
                                 core->kids[i]->ta(core->kids[i]->initial)});
    init.s_g = spec->initial_global;
    init.last_event = SimTime::zero();

    AtomicSpec out;
    out.initial = Value::of(std::move(init));

    out.ta = [core](const Value& s) -> SimTime {
        const auto& fs = s.as<FlattenedState>();
        const SimTime t = core->next_event(fs);
        return t.is_infinite() ? SimTime::infinity() : t - fs.last_event;
    };

    out.lambda = [core](const Value& s) -> Value {
        const auto& fs = s.as<FlattenedState>();
        const std::size_t star = core->imminent(fs);
        const ZFn* to_self = core->routes_to_self[star];
        if (!to_self || !core->kids[star]->lambda) return {};
        Value y = core->kids[star]->lambda(fs.children[star].state);
        if (!y) return {};
        return (*to_self)(y);
    };

    out.delta_int = [core](const Value& s, const Value& s_gmacro) -> Transition {
        FlattenedState fs = s.as<FlattenedState>();
        const SimTime t = core->next_event(fs);
        const std::size_t star = core->imminent(fs);
        const Value macro = core->macro_view(fs);

        Value y;
        if (core->kids[star]->lambda) y = core->kids[star]->lambda(fs.children[star].state);

        MicroBag bag;
        for (auto& slot : fs.children) slot.y_up = Value{};

        {
            auto& slot = fs.children[star];
            Transition tr = core->kids[star]->delta_int(slot.state, macro);
            slot.state = std::move(tr.state);
            slot.last_event = t;
            slot.next_event = t + core->kids[star]->ta(slot.state);
            slot.y_up = tr.y_up;
            if (tr.y_up) bag.emplace_back(slot.id, std::move(tr.y_up));
        }

        if (y) {
            for (const auto& [target, z] : core->routes_to_children[star]) {
                Value x = (*z)(y);
                if (!x) continue;
                auto& slot = fs.children[target];
                if (!core->kids[target]->delta_ext)
                    throw internal_error("flatten: input routed to component without delta_ext");
                Transition tr =
                    core->kids[target]->delta_ext(slot.state, t - slot.last_event, x, macro);
                slot.state = std::move(tr.state);
                slot.last_event = t;
                slot.next_event = t + core->kids[target]->ta(slot.state);
                slot.y_up = tr.y_up;
                if (tr.y_up) bag.emplace_back(slot.id, std::move(tr.y_up));
            }
        }

        Value y_gup = core->run_delta_g(fs, t, bag, s_gmacro);
        return {Value::of(std::move(fs)), std::move(y_gup)};
    };

    out.delta_ext = [core](const Value& s, SimTime e, const Value& x,
                           const Value& s_gmacro) -> Transition {
        FlattenedState fs = s.as<FlattenedState>();
        const SimTime t = fs.last_event + e;
        const Value macro = core->macro_view(fs);

        MicroBag bag;
        for (auto& slot : fs.children) slot.y_up = Value{};
        for (const auto& [target, z] : core->routes_from_self_in[0]) {
            Value xt = (*z)(x);
            if (!xt) continue;
            auto& slot = fs.children[target];
            if (!core->kids[target]->delta_ext)
                throw internal_error("flatten: input routed to component without delta_ext");
            Transition tr = core->kids[target]->delta_ext(slot.state, t - slot.last_event, xt, macro);
            slot.state = std::move(tr.state);
            slot.last_event = t;
            slot.next_event = t + core->kids[target]->ta(slot.state);
            slot.y_up = tr.y_up;
            if (tr.y_up) bag.emplace_back(slot.id, std::move(tr.y_up));
        }

        Value y_gup = core->run_delta_g(fs, t, bag, s_gmacro);
        return {Value::of(std::move(fs)), std::move(y_gup)};
    };

    return out;
}

// ---------------------------------------------------------------------------
// Lowering

namespace {

struct LoweredCore {
    std::shared_ptr<const CoupledSpec> spec;
};

AtomicSpec make_lowered_atomic(const std::shared_ptr<const CoupledSpec>& src, std::size_t index) {
    const Child& child = src->children[index];
    auto orig = child.spec.atomic_ptr();
    const ModelId my_id = child.id;

    LoweredState init;
    init.inner = orig->initial;
    init.macro_replica = src->initial_global;
    init.sigma_remaining = orig->ta(orig->initial);
    init.e_accum = SimTime::zero();

    AtomicSpec out;
    out.initial = Value::of(std::move(init));

    // The embedded transition functions see what the coordinator would have
    // served them: the value coupling applied to the (local) aggregate.
    auto macro_view = [src](const LoweredState& ls) -> Value {
        return src->v_down ? src->v_down(ls.macro_replica) : Value{};
    };

    out.ta = [](const Value& s) -> SimTime {
        const auto& ls = s.as<LoweredState>();
        return ls.broadcast() ? SimTime::zero() : ls.sigma_remaining;
    };

    out.lambda = [orig, my_id](const Value& s) -> Value {
        const auto& ls = s.as<LoweredState>();
        if (ls.broadcast()) return Value::of(BroadcastMsg{my_id, ls.pending.front()});
        return orig->lambda ? orig->lambda(ls.inner) : Value{};
    };

    out.delta_int = [orig, macro_view](const Value& s, const Value&) -> Transition {
        LoweredState ls = s.as<LoweredState>();
        if (ls.broadcast()) {
            // The pending payload has just been broadcast; nothing else moves.
            ls.pending.erase(ls.pending.begin());
            return {Value::of(std::move(ls)), Value{}};
        }
        Transition tr = orig->delta_int(ls.inner, macro_view(ls));
        ls.inner = std::move(tr.state);
        if (tr.y_up) ls.pending.push_back(tr.y_up);
        ls.sigma_remaining = orig->ta(ls.inner);
        ls.e_accum = SimTime::zero();
        return {Value::of(std::move(ls)), Value{}};
    };

    out.delta_ext = [orig, src, macro_view](const Value& s, SimTime e, const Value& x,
                                            const Value&) -> Transition {
        LoweredState ls = s.as<LoweredState>();
        if (const auto* b = x.get_if<BroadcastMsg>()) {
            // Local aggregate update; the embedded state and its residual
            // lifetime continue undisturbed.
            MicroBag bag{{b->sender, b->y_up}};
            GlobalTransition g = src->delta_g(ls.macro_replica, e, bag, Value{});
            ls.macro_replica = std::move(g.global);
            ls.sigma_remaining = ls.sigma_remaining - e;
            ls.e_accum = ls.e_accum + e;
            return {Value::of(std::move(ls)), Value{}};
        }
        if (!orig->delta_ext)
            throw internal_error("lowered model: input delivered to component without delta_ext");
        Transition tr = orig->delta_ext(ls.inner, ls.e_accum + e, x, macro_view(ls));
        ls.inner = std::move(tr.state);
        if (tr.y_up) ls.pending.push_back(tr.y_up);
        ls.sigma_remaining = orig->ta(ls.inner);
        ls.e_accum = SimTime::zero();
        return {Value::of(std::move(ls)), Value{}};
    };

    return out;
}

ZFn drop_broadcast(ZFn z) {
    return [z = std::move(z)](const Value& y) -> Value {
        if (y.get_if<BroadcastMsg>()) return {};
        return z(y);
    };
}

} // namespace

CoupledSpec lower_to_classic(const ModelSpec& coupled_model) {
    if (!coupled_model.is_coupled()) throw usage_error("lower_to_classic: expected a coupled model");
    auto src = coupled_model.coupled_ptr();

    ValidationReport report = validate(*src);
    if (!report.ok()) throw usage_error("lower_to_classic: invalid coupled model:\n" + report.str());
    for (const Child& c : src->children)
        if (!c.spec.is_atomic())
            throw usage_error("lower_to_classic: children must be atomic; flatten inner hierarchies first");

    CoupledSpec out;
    out.select = src->select;

    if (!src->delta_g) {
        // Classic input: nothing to embed, the structure carries over.
        out.children = src->children;
        out.couplings = src->couplings;
        return out;
    }

    for (std::size_t i = 0; i < src->children.size(); ++i)
        out.children.push_back({src->children[i].id, src->children[i].name,
                                ModelSpec::atomic(make_lowered_atomic(src, i))});

    for (const Coupling& cp : src->couplings)
        out.couplings.push_back({cp.from, cp.to, drop_broadcast(cp.z)});

    // Fully connected mesh: every component broadcasts its upward payloads
    // to every sibling. A single component degenerates to zero links.
    for (const Child& from : src->children) {
        for (const Child& to : src->children) {
            if (from.id == to.id) continue;
            out.couplings.push_back({Endpoint::child(from.id), Endpoint::child(to.id),
                                     [](const Value& y) -> Value {
                                         if (y.get_if<BroadcastMsg>()) return y;
                                         return {};
                                     }});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Trace equivalence

namespace {

struct Observation {
    SimTime t;
    std::vector<std::pair<std::string, Value>> states; // sorted by path
    std::vector<std::pair<std::string, Value>> globals; // sorted by path
    Value output;

    friend bool operator==(const Observation&, const Observation&) = default;
};

void expand_state(const std::string& path, const Value& v,
                  std::map<std::string, Value>& states, std::map<std::string, Value>& globals,
                  bool unwrap_lowered) {
    if (const auto* fs = v.get_if<FlattenedState>()) {
        if (fs->s_g) globals[path] = fs->s_g;
        for (const FlattenedChild& c : fs->children)
            expand_state(path + "/" + c.name, c.state, states, globals, unwrap_lowered);
        return;
    }
    if (unwrap_lowered) {
        if (const auto* ls = v.get_if<LoweredState>()) {
            states[path] = ls->inner;
            return;
        }
    }
    states[path] = v;
}

std::vector<Observation> project(const Trace& trace, TraceProjection projection) {
    const bool lowered = projection == TraceProjection::broadcast_filtered;

    std::map<std::string, Value> raw_states;
    std::map<std::string, Value> raw_globals;
    std::vector<Observation> out;

    for (const TraceRecord& rec : trace.records()) {
        switch (rec.kind) {
        case TraceRecord::Kind::init:
            if (rec.state) raw_states[rec.path] = rec.state;
            if (rec.s_g) raw_globals[rec.path] = rec.s_g;
            break;
        case TraceRecord::Kind::delta_int:
        case TraceRecord::Kind::delta_ext:
            raw_states[rec.path] = rec.state;
            break;
        case TraceRecord::Kind::delta_g:
            raw_globals[rec.path] = rec.s_g;
            break;
        case TraceRecord::Kind::output:
            break;
        case TraceRecord::Kind::cycle: {
            Observation obs;
            obs.t = rec.time;
            std::map<std::string, Value> states, globals = raw_globals;
            for (const auto& [path, v] : raw_states)
                expand_state(path, v, states, globals, lowered);
            obs.states.assign(states.begin(), states.end());
            if (!lowered) obs.globals.assign(globals.begin(), globals.end());
            if (!(lowered && rec.output.get_if<BroadcastMsg>())) obs.output = rec.output;
            if (lowered && !out.empty() && out.back().states == obs.states &&
                obs.output.is_null()) {
                break; // broadcast-internal step: nothing observable moved
            }
            out.push_back(std::move(obs));
            break;
        }
        }
    }
    return out;
}

std::vector<Observation> project_identity(const Trace& trace) {
    std::vector<Observation> out;
    for (const TraceRecord& rec : trace.records()) {
        Observation obs;
        obs.t = rec.time;
        obs.states.emplace_back(rec.path + "#" + to_string(rec.kind), rec.state);
        obs.states.emplace_back("y_up", rec.y_up);
        obs.globals.emplace_back("s_g", rec.s_g);
        obs.output = rec.output;
        out.push_back(std::move(obs));
    }
    return out;
}

std::string describe(const Observation& a, const Observation& b) {
    std::ostringstream os;
    if (a.t != b.t) {
        os << "time " << format_time(a.t) << " vs " << format_time(b.t);
        return os.str();
    }
    os << "t=" << format_time(a.t) << ": ";
    if (a.output != b.output) {
        os << "output '" << a.output.str() << "' vs '" << b.output.str() << "'";
        return os.str();
    }
    auto diff_maps = [&](const auto& ma, const auto& mb, const char* what) -> bool {
        if (ma.size() != mb.size()) {
            os << what << " count " << ma.size() << " vs " << mb.size();
            return true;
        }
        for (std::size_t i = 0; i < ma.size(); ++i) {
            if (ma[i].first != mb[i].first) {
                os << what << " path '" << ma[i].first << "' vs '" << mb[i].first << "'";
                return true;
            }
            if (!(ma[i].second == mb[i].second)) {
                os << what << " at '" << ma[i].first << "': '" << ma[i].second.str() << "' vs '"
                   << mb[i].second.str() << "'";
                return true;
            }
        }
        return false;
    };
    if (diff_maps(a.states, b.states, "state")) return os.str();
    if (diff_maps(a.globals, b.globals, "global")) return os.str();
    return "unknown difference";
}

} // namespace

EquivalenceResult trace_equivalent(const Trace& a, const Trace& b, TraceProjection projection) {
    std::vector<Observation> pa, pb;
    if (projection == TraceProjection::identity) {
        pa = project_identity(a);
        pb = project_identity(b);
    } else {
        pa = project(a, projection);
        pb = project(b, projection);
    }

    const std::size_t n = std::min(pa.size(), pb.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!(pa[i] == pb[i])) {
            return {false, "observation " + std::to_string(i) + ": " + describe(pa[i], pb[i])};
        }
    }
    if (pa.size() != pb.size()) {
        return {false, "observation count " + std::to_string(pa.size()) + " vs " +
                           std::to_string(pb.size())};
    }
    return {true, {}};
}

} // namespace ebdevs
