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
#include "ebdevs/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ebdevs {

AtomicSpec classic_lift(ClassicAtomicSpec classic) {
    AtomicSpec out;
    out.initial = classic.initial;
    out.ta = classic.ta;
    out.delta_int = [f = classic.delta_int](const Value& s, const Value&) -> Transition {
        return {f(s), Value{}};
    };
    if (classic.delta_ext) {
        out.delta_ext = [f = classic.delta_ext](const Value& s, SimTime e, const Value& x,
                                                const Value&) -> Transition {
            return {f(s, e, x), Value{}};
        };
    }
    out.lambda = classic.lambda;
    return out;
}

ModelSpec ModelSpec::atomic(AtomicSpec spec) {
    ModelSpec m;
    m.atomic_ = std::make_shared<const AtomicSpec>(std::move(spec));
    return m;
}

ModelSpec ModelSpec::coupled(CoupledSpec spec) {
    ModelSpec m;
    m.coupled_ = std::make_shared<const CoupledSpec>(std::move(spec));
    return m;
}

const AtomicSpec& ModelSpec::as_atomic() const {
    if (!atomic_) throw internal_error("ModelSpec: not an atomic model");
    return *atomic_;
}

const CoupledSpec& ModelSpec::as_coupled() const {
    if (!coupled_) throw internal_error("ModelSpec: not a coupled model");
    return *coupled_;
}

const Child* CoupledSpec::find_child(ModelId id) const {
    auto it = std::lower_bound(children.begin(), children.end(), id,
                               [](const Child& c, ModelId v) { return c.id < v; });
    if (it == children.end() || it->id != id) return nullptr;
    return &*it;
}

std::string ValidationReport::str() const {
    std::ostringstream os;
    for (const Violation& v : violations) os << v.path << ": " << v.issue << "\n";
    return os.str();
}

namespace {

void validate_into(const CoupledSpec& spec, const std::string& path, ValidationReport& report) {
    auto bad = [&](std::string issue) { report.violations.push_back({path, std::move(issue)}); };

    if (spec.children.empty()) {
        bad("component set D must be non-empty");
        return;
    }

    std::set<ModelId> ids;
    bool sorted = true;
    for (std::size_t i = 0; i < spec.children.size(); ++i) {
        const Child& c = spec.children[i];
        if (!ids.insert(c.id).second) bad("duplicate component id " + c.id.str());
        if (i > 0 && !(spec.children[i - 1].id < c.id)) sorted = false;
        if (c.spec.empty()) bad("component " + c.id.str() + " has no model");
        if (c.spec.is_atomic()) {
            const AtomicSpec& a = c.spec.as_atomic();
            if (!a.ta) bad("component " + c.id.str() + ": missing ta");
            if (!a.delta_int) bad("component " + c.id.str() + ": missing delta_int");
        }
    }
    if (!sorted) bad("children must be sorted ascending by id");

    auto endpoint_ok = [&](const Endpoint& e) { return e.is_self() || ids.count(e.id()) != 0; };

    for (const Coupling& cp : spec.couplings) {
        if (!cp.z) bad("coupling " + cp.from.str() + "->" + cp.to.str() + ": missing translation");
        if (!endpoint_ok(cp.from))
            bad("coupling references unknown source " + cp.from.str());
        if (!endpoint_ok(cp.to))
            bad("coupling references unknown target " + cp.to.str());
        if (cp.from == cp.to) {
            if (cp.from.is_self())
                bad("illegal self-to-self coupling (no typing case)");
            else
                bad("self-influence at " + cp.from.id().str());
        }
    }

    if (!spec.delta_g) {
        // Classic coupled model: the whole global level must be absent.
        if (spec.v_down) bad("v_down requires delta_g");
        if (!spec.initial_global.is_null()) bad("initial global state requires delta_g");
    }

    for (const Child& c : spec.children)
        if (c.spec.is_coupled()) validate_into(c.spec.as_coupled(), path + "/" + c.name, report);
}

} // namespace

ValidationReport validate(const CoupledSpec& spec) {
    ValidationReport report;
    validate_into(spec, "", report);
    return report;
}

} // namespace ebdevs
