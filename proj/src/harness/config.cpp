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
#include "ebdevs/harness/config.hpp"

#include <cstdlib>
#include <fstream>

#include "ebdevs/gallery.hpp"

namespace ebdevs::harness {

using nlohmann::json;

void ExperimentConfig::finalize() {
    if (model.empty()) throw usage_error("no model selected");
    gallery::validate_params(model, params);
    if (replications < 1) throw usage_error("replications must be >= 1");
    if (horizon && !(*horizon >= 0)) throw usage_error("horizon must be nonnegative");
    if (sample_dt && !(*sample_dt > 0)) throw usage_error("sample_dt must be > 0");
    if (legitimacy_budget < 1) throw usage_error("legitimacy budget must be >= 1");
    if (out_dir.empty()) {
        const char* env = std::getenv(OUT_DIR_ENV);
        out_dir = env && *env ? env : "out";
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw usage_error("config file '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw usage_error("config file must hold a JSON object");

    ExperimentConfig c;
    for (const auto& [key, value] : j.items()) {
        if (key == "model") c.model = value.get<std::string>();
        else if (key == "params") c.params = value;
        else if (key == "seed") c.seed = value.get<std::uint64_t>();
        else if (key == "replications" || key == "reps") c.replications = value.get<std::uint32_t>();
        else if (key == "horizon") c.horizon = value.get<double>();
        else if (key == "sample_dt") c.sample_dt = value.get<double>();
        else if (key == "out_dir") c.out_dir = value.get<std::string>();
        else if (key == "full_trace") c.full_trace = value.get<bool>();
        else if (key == "legitimacy_budget") c.legitimacy_budget = value.get<std::uint64_t>();
        else if (key == "jobs") c.jobs = value.get<unsigned>();
        else throw usage_error("config file: unknown key '" + key + "'");
    }
    return c;
}

void apply_override(json& params, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw usage_error("expected key=value, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw; // plain string
    if (!params.is_object()) params = json::object();
    params[key] = value;
}

} // namespace ebdevs::harness
