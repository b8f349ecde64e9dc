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
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ebdevs/model.hpp"
#include "ebdevs/trace.hpp"

namespace ebdevs {

/// Raised when a run exceeds its transition budget inside one zero-advance
/// window. This reports an illegitimate model, not a kernel failure.
struct LegitimacyError : std::runtime_error {
    LegitimacyError(std::string path_, SimTime time_, std::uint64_t budget_);
    std::string path;
    SimTime time;
    std::uint64_t budget;
};

/// Raised by a model when a structural capacity is exhausted (e.g. no
/// inactive slot left to satisfy an activation).
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Counts atomic transitions while simulation time stands still; aborts the
/// run once more than `budget` happen in one window.
class LegitimacyGuard {
public:
    explicit LegitimacyGuard(std::uint64_t budget = 1'000'000) : budget_(budget) {
        if (budget_ < 1) throw usage_error("legitimacy budget must be >= 1");
    }

    void on_transition(const std::string& path, SimTime t);

    std::uint64_t budget() const { return budget_; }
    std::uint64_t window_count() const { return count_; }

private:
    std::uint64_t budget_;
    std::uint64_t count_ = 0;
    SimTime window_time_ = SimTime::zero();
    bool started_ = false;
};

/// Per-run mutable context threaded through the processor tree.
struct RunContext {
    Trace* trace = nullptr; // full-granularity event log; null to disable
    LegitimacyGuard guard;

    void record(TraceRecord rec) {
        if (trace) trace->append(std::move(rec));
    }
};

/// Result of one star dispatch: the node's translated output for the parent
/// to route, and the upward payload for the parent's micro bag.
struct StarResult {
    Value output;
    Value y_up;
};

/// A node of the processor tree. Handlers realize the message protocol
/// synchronously; a handler's return is its done-message.
class Processor {
public:
    virtual ~Processor() = default;

    virtual void init(SimTime t0, RunContext& ctx) = 0;
    virtual StarResult handle_star(SimTime t, const Value& macro_view, RunContext& ctx) = 0;
    virtual Value handle_x(const Value& x, SimTime t, const Value& macro_view, RunContext& ctx) = 0;

    SimTime tl() const { return tl_; }
    SimTime tn() const { return tn_; }
    const std::string& path() const { return path_; }

    /// Current s_G for coordinators; null for simulators.
    virtual Value global_state() const { return {}; }

protected:
    explicit Processor(std::string path) : path_(std::move(path)) {}

    [[noreturn]] void bad_synchronization(SimTime t) const;

    std::string path_;
    SimTime tl_ = SimTime::zero();
    SimTime tn_ = SimTime::infinity();
};

/// Leaf processor driving one atomic model instance.
class SimulatorNode final : public Processor {
public:
    SimulatorNode(std::string path, std::shared_ptr<const AtomicSpec> spec);

    void init(SimTime t0, RunContext& ctx) override;
    StarResult handle_star(SimTime t, const Value& macro_view, RunContext& ctx) override;
    Value handle_x(const Value& x, SimTime t, const Value& macro_view, RunContext& ctx) override;

    const Value& state() const { return s_; }

private:
    std::shared_ptr<const AtomicSpec> spec_;
    Value s_;
};

/// Inner processor driving one coupled model: child scheduling with Select
/// tie-breaking, output routing through the couplings, micro-bag collection
/// and the global transition.
class CoordinatorNode final : public Processor {
public:
    CoordinatorNode(std::string path, std::shared_ptr<const CoupledSpec> spec);

    void init(SimTime t0, RunContext& ctx) override;
    StarResult handle_star(SimTime t, const Value& macro_view, RunContext& ctx) override;
    Value handle_x(const Value& x, SimTime t, const Value& macro_view, RunContext& ctx) override;

    Value global_state() const override { return s_g_; }
    const MicroBag& micro_bag() const { return micro_bag_; }

private:
    struct Route {
        Endpoint to;
        const ZFn* z;
    };

    Value macro_view_for_children() const;
    ModelId imminent_child() const;
    void refresh_tn();
    /// Routes a child's output: x-messages to influenced siblings (their
    /// y_ups joining the bag) and the translated value for self, if coupled.
    Value route_output(ModelId from, const Value& y, SimTime t, const Value& macro, RunContext& ctx);
    Value run_delta_g(SimTime t, const Value& s_gmacro, RunContext& ctx);

    std::shared_ptr<const CoupledSpec> spec_;
    std::vector<std::unique_ptr<Processor>> children_; // aligned with spec children
    std::vector<std::vector<Route>> routes_from_child_;
    std::vector<Route> routes_from_self_;
    MicroBag micro_bag_;
    Value s_g_;
};

std::unique_ptr<Processor> build_processor(const ModelSpec& model, const std::string& path);

/// Root coordinator: owns the processor tree and drives star cycles with a
/// null macro view. Validation failures surface at init.
class RootCoordinator {
public:
    /// Per-cycle observer: time, the star result, and the top s_G.
    using CycleObserver = std::function<void(SimTime t, const StarResult& out, const Value& s_g)>;

    explicit RootCoordinator(const ModelSpec& model, std::uint64_t legitimacy_budget = 1'000'000);

    void enable_full_trace() { ctx_.trace = &trace_; }
    void set_cycle_observer(CycleObserver obs) { on_cycle_ = std::move(obs); }

    void init(SimTime t0 = SimTime::zero());
    SimTime next_time() const { return top_->tn(); }

    /// Runs one star cycle at the root's tn. False when passive.
    bool step();

    /// Advances until tn exceeds t_end or the model goes passive.
    const Trace& run_until(SimTime t_end);

    const Trace& trace() const { return trace_; }
    const Processor& top() const { return *top_; }

private:
    std::unique_ptr<Processor> top_;
    RunContext ctx_;
    Trace trace_;
    CycleObserver on_cycle_;
    bool initialized_ = false;
};

} // namespace ebdevs
