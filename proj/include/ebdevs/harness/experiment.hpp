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

#include "ebdevs/harness/config.hpp"
#include "ebdevs/time.hpp"

namespace ebdevs::harness {

/// Timestamped multi-column series as observed during a run.
struct RawSeries {
    std::vector<double> times; // nondecreasing
    std::vector<std::vector<double>> rows;
};

/// Series resampled by zero-order hold onto the grid 0, dt, 2*dt, ...
struct SampledSeries {
    double dt = 1.0;
    std::vector<std::vector<double>> rows; // rows[k] at t = k*dt
};

SampledSeries resample_zoh(const RawSeries& raw, double dt, double horizon);

/// Cross-replication mean and sample standard deviation per grid cell.
struct ReplicationSummary {
    double dt = 1.0;
    std::size_t replication_count = 0;
    std::vector<std::vector<double>> mean;
    std::vector<std::vector<double>> stddev;
};

ReplicationSummary summarize(const std::vector<SampledSeries>& sampled);

/// Convenience composition of resampling and summarizing.
ReplicationSummary aggregate(const std::vector<RawSeries>& raw, double dt, double horizon);

struct ReplicationOutcome {
    std::uint32_t stream = 0;
    bool ok = false;
    std::string error;    // abort reason when not ok
    std::string csv_path; // written output, empty when aborted early
    SampledSeries series; // sampled observations (ok runs only)
};

struct ExperimentResult {
    std::vector<ReplicationOutcome> replications;
    std::string summary_path;
    double horizon = 0;
    double sample_dt = 1.0;

    bool all_ok() const;
    std::size_t ok_count() const;
};

/// Runs every replication (stream id = replication index), writes one CSV
/// per replication plus the cross-replication summary, all atomically.
ExperimentResult run_experiment(const ExperimentConfig& config);

} // namespace ebdevs::harness
