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
#include "ebdevs/simulator.hpp"

#include <algorithm>

namespace ebdevs {

LegitimacyError::LegitimacyError(std::string path_, SimTime time_, std::uint64_t budget_)
    : std::runtime_error("legitimacy budget exceeded at '" + path_ + "' time " + format_time(time_) +
                         " after " + std::to_string(budget_) + " transitions without time advance"),
      path(std::move(path_)), time(time_), budget(budget_) {}

void LegitimacyGuard::on_transition(const std::string& path, SimTime t) {
    if (!started_ || t > window_time_) {
        started_ = true;
        window_time_ = t;
        count_ = 0;
    }
    if (++count_ > budget_) throw LegitimacyError(path, t, budget_);
}

void Processor::bad_synchronization(SimTime t) const {
    throw internal_error("bad synchronization at '" + path_ + "': t=" + format_time(t) +
                         " tl=" + format_time(tl_) + " tn=" + format_time(tn_));
}

// ---------------------------------------------------------------------------
// SimulatorNode

SimulatorNode::SimulatorNode(std::string path, std::shared_ptr<const AtomicSpec> spec)
    : Processor(std::move(path)), spec_(std::move(spec)) {}

void SimulatorNode::init(SimTime t0, RunContext& ctx) {
    s_ = spec_->initial;
    tl_ = t0;
    tn_ = tl_ + spec_->ta(s_);
    ctx.record({t0, path_, TraceRecord::Kind::init, s_, {}, {}, {}});
}

StarResult SimulatorNode::handle_star(SimTime t, const Value& macro_view, RunContext& ctx) {
    if (t != tn_) bad_synchronization(t);

    Value y;
    if (spec_->lambda) y = spec_->lambda(s_);
    if (y) ctx.record({t, path_, TraceRecord::Kind::output, {}, y, {}, {}});

    ctx.guard.on_transition(path_, t);
    Transition tr = spec_->delta_int(s_, macro_view);
    s_ = std::move(tr.state);
    tl_ = t;
    tn_ = t + spec_->ta(s_);
    ctx.record({t, path_, TraceRecord::Kind::delta_int, s_, {}, tr.y_up, {}});
    return {std::move(y), std::move(tr.y_up)};
}

Value SimulatorNode::handle_x(const Value& x, SimTime t, const Value& macro_view, RunContext& ctx) {
    if (!(tl_ <= t && t <= tn_)) bad_synchronization(t);
    if (!spec_->delta_ext)
        throw internal_error("input delivered to '" + path_ + "', which has no external transition");

    const SimTime e = t - tl_;
    ctx.guard.on_transition(path_, t);
    Transition tr = spec_->delta_ext(s_, e, x, macro_view);
    s_ = std::move(tr.state);
    tl_ = t;
    tn_ = t + spec_->ta(s_);
    ctx.record({t, path_, TraceRecord::Kind::delta_ext, s_, {}, tr.y_up, {}});
    return std::move(tr.y_up);
}

// ---------------------------------------------------------------------------
// CoordinatorNode

CoordinatorNode::CoordinatorNode(std::string path, std::shared_ptr<const CoupledSpec> spec)
    : Processor(std::move(path)), spec_(std::move(spec)) {
    const std::size_t n = spec_->children.size();
    children_.reserve(n);
    for (const Child& c : spec_->children)
        children_.push_back(build_processor(c.spec, path_ + "/" + c.name));

    // Routing tables: outgoing couplings per source, targets in ascending
    // order so fan-out is deterministic.
    routes_from_child_.assign(n, {});
    for (const Coupling& cp : spec_->couplings) {
        Route route{cp.to, &cp.z};
        if (cp.from.is_self()) {
            routes_from_self_.push_back(route);
        } else {
            const Child* c = spec_->find_child(cp.from.id());
            if (!c) throw usage_error("coupling from unknown component " + cp.from.id().str());
            routes_from_child_[static_cast<std::size_t>(c - spec_->children.data())].push_back(route);
        }
    }
    auto by_target = [](const Route& a, const Route& b) { return a.to < b.to; };
    for (auto& routes : routes_from_child_) std::stable_sort(routes.begin(), routes.end(), by_target);
    std::stable_sort(routes_from_self_.begin(), routes_from_self_.end(), by_target);
}

void CoordinatorNode::init(SimTime t0, RunContext& ctx) {
    s_g_ = spec_->initial_global;
    micro_bag_.clear();
    for (auto& child : children_) child->init(t0, ctx);
    tl_ = t0;
    refresh_tn();
    ctx.record({t0, path_, TraceRecord::Kind::init, {}, {}, {}, s_g_});
}

Value CoordinatorNode::macro_view_for_children() const {
    return spec_->v_down ? spec_->v_down(s_g_) : Value{};
}

ModelId CoordinatorNode::imminent_child() const {
    std::vector<std::pair<ModelId, SimTime>> entries;
    entries.reserve(children_.size());
    for (std::size_t i = 0; i < children_.size(); ++i)
        entries.emplace_back(spec_->children[i].id, children_[i]->tn());
    return compare_then_tiebreak(entries, spec_->select);
}

void CoordinatorNode::refresh_tn() {
    SimTime best = SimTime::infinity();
    for (const auto& child : children_)
        if (child->tn() < best) best = child->tn();
    tn_ = best;
}

Value CoordinatorNode::route_output(ModelId from, const Value& y, SimTime t, const Value& macro,
                                    RunContext& ctx) {
    Value own_output;
    const Child* c = spec_->find_child(from);
    const auto& routes = routes_from_child_[static_cast<std::size_t>(c - spec_->children.data())];
    for (const Route& route : routes) {
        Value translated = (*route.z)(y);
        if (!translated) continue;
        if (route.to.is_self()) {
            own_output = std::move(translated);
        } else {
            const Child* target = spec_->find_child(route.to.id());
            auto& receiver = children_[static_cast<std::size_t>(target - spec_->children.data())];
            Value y_up = receiver->handle_x(translated, t, macro, ctx);
            if (y_up) micro_bag_.emplace_back(route.to.id(), std::move(y_up));
        }
    }
    return own_output;
}

Value CoordinatorNode::run_delta_g(SimTime t, const Value& s_gmacro, RunContext& ctx) {
    if (!spec_->delta_g) {
        micro_bag_.clear(); // a Classic coupled model never aggregates
        return {};
    }
    if (micro_bag_.empty() && !spec_->invoke_delta_g_on_empty_bag) return {};

    const SimTime e_g = t - tl_;
    std::stable_sort(micro_bag_.begin(), micro_bag_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    GlobalTransition g = spec_->delta_g(s_g_, e_g, micro_bag_, s_gmacro);
    s_g_ = std::move(g.global);
    micro_bag_.clear();
    ctx.record({t, path_, TraceRecord::Kind::delta_g, {}, {}, g.y_up, s_g_});
    return std::move(g.y_up);
}

StarResult CoordinatorNode::handle_star(SimTime t, const Value& s_gmacro, RunContext& ctx) {
    if (t != tn_) bad_synchronization(t);

    // One macro view per cycle: the pre-transition s_G serves every star and
    // x message dispatched below.
    const Value macro = macro_view_for_children();

    const ModelId star_id = imminent_child();
    const Child* star_child = spec_->find_child(star_id);
    auto& star_proc = children_[static_cast<std::size_t>(star_child - spec_->children.data())];

    StarResult res = star_proc->handle_star(t, macro, ctx);
    if (res.y_up) micro_bag_.emplace_back(star_id, std::move(res.y_up));

    Value own_output;
    if (res.output) own_output = route_output(star_id, res.output, t, macro, ctx);

    // All upward payloads of this cycle have arrived (depth-first completion
    // stands in for waiting on y-up messages).
    Value y_gup = run_delta_g(t, s_gmacro, ctx);

    tl_ = t;
    refresh_tn();
    return {std::move(own_output), std::move(y_gup)};
}

Value CoordinatorNode::handle_x(const Value& x, SimTime t, const Value& s_gmacro, RunContext& ctx) {
    (void)s_gmacro;
    if (!(tl_ <= t && t <= tn_)) bad_synchronization(t);

    const Value macro = macro_view_for_children();
    for (const Route& route : routes_from_self_) {
        Value translated = (*route.z)(x);
        if (!translated) continue;
        if (route.to.is_self()) continue; // rejected by validation
        const Child* target = spec_->find_child(route.to.id());
        auto& receiver = children_[static_cast<std::size_t>(target - spec_->children.data())];
        Value y_up = receiver->handle_x(translated, t, macro, ctx);
        if (y_up) micro_bag_.emplace_back(route.to.id(), std::move(y_up));
    }

    // Upward payloads stay in the bag until the next star cycle; the global
    // transition runs on the star path only.
    tl_ = t;
    refresh_tn();
    return {};
}

// ---------------------------------------------------------------------------

std::unique_ptr<Processor> build_processor(const ModelSpec& model, const std::string& path) {
    if (model.is_atomic()) return std::make_unique<SimulatorNode>(path, model.atomic_ptr());
    if (model.is_coupled()) return std::make_unique<CoordinatorNode>(path, model.coupled_ptr());
    throw usage_error("cannot build a processor for an empty model");
}

RootCoordinator::RootCoordinator(const ModelSpec& model, std::uint64_t legitimacy_budget) {
    if (model.is_coupled()) {
        ValidationReport report = validate(model.as_coupled());
        if (!report.ok()) throw usage_error("invalid coupled model:\n" + report.str());
    }
    top_ = build_processor(model, "");
    ctx_.guard = LegitimacyGuard(legitimacy_budget);
}

void RootCoordinator::init(SimTime t0) {
    top_->init(t0, ctx_);
    initialized_ = true;
}

bool RootCoordinator::step() {
    if (!initialized_) throw usage_error("RootCoordinator: init() must run first");
    const SimTime t = top_->tn();
    if (t.is_infinite()) return false;
    StarResult out = top_->handle_star(t, Value{}, ctx_);
    ctx_.record({t, "", TraceRecord::Kind::cycle, {}, out.output, out.y_up, top_->global_state()});
    if (on_cycle_) on_cycle_(t, out, top_->global_state());
    return true;
}

const Trace& RootCoordinator::run_until(SimTime t_end) {
    if (!initialized_) init();
    while (true) {
        const SimTime t = top_->tn();
        if (t.is_infinite() || t > t_end) break;
        step();
    }
    return trace_;
}

} // namespace ebdevs
