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
#include "ebdevs/gallery.hpp"

#include <algorithm>
#include <set>

#include "ebdevs/models/boids.hpp"
#include "ebdevs/models/mito.hpp"
#include "ebdevs/models/sir.hpp"

namespace ebdevs::gallery {

namespace {

using nlohmann::json;

/// Reads keys out of a parameter object and rejects leftovers.
class ParamReader {
public:
    explicit ParamReader(const json& j) : j_(j) {
        if (!j_.is_object() && !j_.is_null())
            throw usage_error("model parameters must be a JSON object");
    }

    double num(const std::string& key, double fallback) {
        seen_.insert(key);
        if (!j_.is_object() || !j_.contains(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number()) throw usage_error("parameter '" + key + "' must be a number");
        return v.get<double>();
    }

    bool flag(const std::string& key, bool fallback) {
        seen_.insert(key);
        if (!j_.is_object() || !j_.contains(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw usage_error("parameter '" + key + "' must be a boolean");
        return v.get<bool>();
    }

    std::string text(const std::string& key, std::string fallback) {
        seen_.insert(key);
        if (!j_.is_object() || !j_.contains(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_string()) throw usage_error("parameter '" + key + "' must be a string");
        return v.get<std::string>();
    }

    void finish() const {
        if (!j_.is_object()) return;
        for (const auto& [key, value] : j_.items())
            if (!seen_.count(key)) throw usage_error("unknown parameter key '" + key + "'");
    }

private:
    const json& j_;
    std::set<std::string> seen_;
};

sir::Params read_sir_params(const json& j, bool vaccination) {
    ParamReader r(j);
    sir::Params p;
    p.n = static_cast<std::size_t>(r.num("n", static_cast<double>(p.n)));
    p.beta = r.num("beta", p.beta);
    p.gamma = r.num("gamma", p.gamma);
    p.gamma_shape = r.num("gamma_shape", p.gamma_shape);
    p.gamma_scale = r.num("gamma_scale", p.gamma_scale);
    p.threshold = r.num("threshold", p.threshold);
    p.bin_width = r.num("bin_width", p.bin_width);
    p.initial_infected_frac = r.num("initial_infected_frac", p.initial_infected_frac);
    p.vaccination = r.flag("vaccination", vaccination);
    r.finish();
    return p;
}

boids::Params read_boids_params(const json& j, boids::Variant variant) {
    ParamReader r(j);
    boids::Params p;
    p.variant = variant;
    p.n_birds = static_cast<std::size_t>(r.num("n_birds", static_cast<double>(p.n_birds)));
    p.grid_size = r.num("grid_size", p.grid_size);
    p.radius = r.num("radius", p.radius);
    p.min_dist = r.num("min_dist", p.min_dist);
    p.velocity = r.num("velocity", p.velocity);
    p.fa_threshold = r.num("fa_threshold", p.fa_threshold);
    p.ba_threshold = r.num("ba_threshold", p.ba_threshold);
    p.ba_first_duration = static_cast<int>(r.num("ba_first_duration", p.ba_first_duration));
    p.ba_decay = r.num("ba_decay", p.ba_decay);
    p.ba_activations = static_cast<int>(r.num("ba_activations", p.ba_activations));
    p.sep_turn_deg = r.num("sep_turn_deg", p.sep_turn_deg);
    p.align_turn_deg = r.num("align_turn_deg", p.align_turn_deg);
    p.cohere_turn_deg = r.num("cohere_turn_deg", p.cohere_turn_deg);
    r.finish();
    return p;
}

mito::Params read_mito_params(const json& j) {
    ParamReader r(j);
    mito::Params p;
    p.fission_p = r.num("fission_p", p.fission_p);
    p.fusion_p = r.num("fusion_p", p.fusion_p);
    p.total_mass = r.num("total_mass", p.total_mass);
    p.m_min = r.num("m_min", p.m_min);
    p.m_max = r.num("m_max", p.m_max);
    p.cycle_period = r.num("cycle_period", p.cycle_period);
    p.r_nucleus = r.num("r_nucleus", p.r_nucleus);
    p.r_peri = r.num("r_peri", p.r_peri);
    p.r_cell = r.num("r_cell", p.r_cell);
    p.peri_speed_max = r.num("peri_speed_max", p.peri_speed_max);
    p.cyto_speed_max = r.num("cyto_speed_max", p.cyto_speed_max);
    r.finish();
    return p;
}

BuiltModel build_sir(const std::string& name, const json& params, bool vaccination,
                     std::uint64_t seed, std::uint64_t stream) {
    const sir::Params p = read_sir_params(params, vaccination);
    BuiltModel m;
    m.name = name;
    m.root = sir::build(p, seed, stream);
    m.default_horizon = SimTime(100.0);
    m.default_sample_dt = 1.0;
    m.series.columns = {"nS", "nI", "nR", "outbreak_active"};
    m.series.extract = [p](const Value& s_g) -> std::vector<double> {
        const auto& g = s_g.as<sir::Global>();
        const double outbreak = (p.vaccination && g.growth_rate() >= p.threshold) ? 1.0 : 0.0;
        return {static_cast<double>(g.n_s), static_cast<double>(g.n_i),
                static_cast<double>(g.n_r), outbreak};
    };
    return m;
}

BuiltModel build_boids(const std::string& name, const json& params, boids::Variant variant,
                       std::uint64_t seed, std::uint64_t stream) {
    const boids::Params p = read_boids_params(params, variant);
    BuiltModel m;
    m.name = name;
    m.root = boids::build(p, seed, stream);
    m.default_horizon = SimTime(250.0);
    m.default_sample_dt = 1.0;
    m.series.columns = {"n_clusters", "mean_cluster_size", "intra_avg_dist",
                        "intra_complete_dist", "event_active"};
    m.series.extract = [p](const Value& s_g) -> std::vector<double> {
        const auto& g = s_g.as<boids::FlockGlobal>();
        const boids::ClusterStats& st = g.cluster_stats();
        double event = 0.0;
        if (p.variant == boids::Variant::fa)
            event = static_cast<double>(st.n_clusters) > p.fa_threshold ? 1.0 : 0.0;
        else if (p.variant == boids::Variant::ba)
            event = g.n_super() > 0 ? 1.0 : 0.0;
        return {static_cast<double>(st.n_clusters), st.mean_size, st.intra_avg_dist,
                st.intra_complete_dist, event};
    };
    return m;
}

BuiltModel build_mito(const std::string& name, const json& params, std::uint64_t seed,
                      std::uint64_t stream) {
    const mito::Params p = read_mito_params(params);
    BuiltModel m;
    m.name = name;
    m.root = mito::build(p, seed, stream);
    m.default_horizon = SimTime(3600.0);
    m.default_sample_dt = p.cycle_period;
    m.series.columns = {"n_small", "n_medium", "n_large", "frac_small", "frac_medium",
                        "frac_large", "total_mass", "n_active"};
    m.series.extract = [p](const Value& s_g) -> std::vector<double> {
        const mito::Census c = s_g.as<mito::CellGlobal>().census(p);
        const double n = c.n_active > 0 ? static_cast<double>(c.n_active) : 1.0;
        return {static_cast<double>(c.n_small), static_cast<double>(c.n_medium),
                static_cast<double>(c.n_large), static_cast<double>(c.n_small) / n,
                static_cast<double>(c.n_medium) / n, static_cast<double>(c.n_large) / n,
                c.total_mass, static_cast<double>(c.n_active)};
    };
    return m;
}

} // namespace

std::vector<std::string> model_names() {
    return {"sir-cm", "sir-cm-v", "boids", "boids-fa", "boids-ba", "mito"};
}

bool has_model(const std::string& name) {
    const auto names = model_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

void validate_params(const std::string& name, const nlohmann::json& params) {
    if (name == "sir-cm") {
        read_sir_params(params, false);
    } else if (name == "sir-cm-v") {
        read_sir_params(params, true);
    } else if (name == "boids") {
        read_boids_params(params, boids::Variant::vanilla);
    } else if (name == "boids-fa") {
        read_boids_params(params, boids::Variant::fa);
    } else if (name == "boids-ba") {
        read_boids_params(params, boids::Variant::ba);
    } else if (name == "mito") {
        read_mito_params(params);
    } else {
        throw usage_error("unknown model '" + name + "'");
    }
}

BuiltModel build(const std::string& name, const nlohmann::json& params, std::uint64_t seed,
                 std::uint64_t stream) {
    if (name == "sir-cm") return build_sir(name, params, false, seed, stream);
    if (name == "sir-cm-v") return build_sir(name, params, true, seed, stream);
    if (name == "boids") return build_boids(name, params, boids::Variant::vanilla, seed, stream);
    if (name == "boids-fa") return build_boids(name, params, boids::Variant::fa, seed, stream);
    if (name == "boids-ba") return build_boids(name, params, boids::Variant::ba, seed, stream);
    if (name == "mito") return build_mito(name, params, seed, stream);
    throw usage_error("unknown model '" + name + "'");
}

nlohmann::json apply_size(const std::string& name, nlohmann::json params, std::size_t size) {
    if (!params.is_object()) params = nlohmann::json::object();
    if (name == "sir-cm" || name == "sir-cm-v") {
        params["n"] = size;
    } else if (name.rfind("boids", 0) == 0) {
        params["n_birds"] = size;
    } else if (name == "mito") {
        // size active bodies on average: budget = size * mean initial mass.
        const double m_min = params.value("m_min", 0.5);
        const double m_max = params.value("m_max", 3.0);
        params["total_mass"] = static_cast<double>(size) * 0.5 * (m_min + m_max);
    } else {
        throw usage_error("unknown model '" + name + "'");
    }
    return params;
}

} // namespace ebdevs::gallery
