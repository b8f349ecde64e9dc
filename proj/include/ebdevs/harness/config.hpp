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
#include <optional>
#include <string>

#include <json.hpp>

namespace ebdevs::harness {

/// Environment variable naming the default output directory.
inline constexpr const char* OUT_DIR_ENV = "EBDEVS_OUT_DIR";

struct ExperimentConfig {
    std::string model;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 1;
    std::uint32_t replications = 1;
    std::optional<double> horizon;   // model default when unset
    std::optional<double> sample_dt; // model default when unset
    std::string out_dir;             // OUT_DIR_ENV or "out" when empty
    bool full_trace = false;         // also write the per-event trace CSV
    std::uint64_t legitimacy_budget = 1'000'000;
    unsigned jobs = 0; // 0: one worker per hardware thread

    /// Validates model name, parameter keys and counters; fills out_dir.
    void finalize();
};

/// Reads a config JSON file mirroring ExperimentConfig.
ExperimentConfig load_config(const std::string& path);

/// Parses a "key=value" override; value parsed as JSON when possible,
/// else taken as a string.
void apply_override(nlohmann::json& params, const std::string& assignment);

} // namespace ebdevs::harness
