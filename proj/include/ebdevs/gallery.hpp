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
#include <string>
#include <vector>

#include <json.hpp>

#include "ebdevs/model.hpp"

namespace ebdevs::gallery {

/// Model-reported time series: column names and the projection from the
/// root global state.
struct SeriesSchema {
    std::vector<std::string> columns;
    std::function<std::vector<double>(const Value& s_g)> extract;
};

struct BuiltModel {
    std::string name;
    ModelSpec root;
    SimTime default_horizon;
    double default_sample_dt = 1.0;
    SeriesSchema series;
};

std::vector<std::string> model_names();
bool has_model(const std::string& name);

/// Rejects unknown model names and parameter keys before any run starts.
void validate_params(const std::string& name, const nlohmann::json& params);

BuiltModel build(const std::string& name, const nlohmann::json& params, std::uint64_t seed,
                 std::uint64_t stream);

/// Maps an abstract component count onto the model's size parameter
/// (agents, birds, or the mass budget driving the mito pool).
nlohmann::json apply_size(const std::string& name, nlohmann::json params, std::size_t size);

} // namespace ebdevs::gallery
