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
#include "ebdevs/harness/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "ebdevs/gallery.hpp"
#include "ebdevs/simulator.hpp"

namespace ebdevs::harness {

namespace fs = std::filesystem;

SampledSeries resample_zoh(const RawSeries& raw, double dt, double horizon) {
    if (!(dt > 0)) throw usage_error("resample_zoh: dt must be > 0");
    if (raw.times.size() != raw.rows.size() || raw.rows.empty())
        throw usage_error("resample_zoh: empty or inconsistent series");

    SampledSeries out;
    out.dt = dt;
    const auto cells = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9)) + 1;
    out.rows.reserve(cells);

    std::size_t cursor = 0;
    for (std::size_t k = 0; k < cells; ++k) {
        const double t = static_cast<double>(k) * dt;
        while (cursor + 1 < raw.times.size() && raw.times[cursor + 1] <= t) ++cursor;
        // The first observation holds backwards too: series start at t0.
        out.rows.push_back(raw.rows[cursor]);
    }
    return out;
}

ReplicationSummary summarize(const std::vector<SampledSeries>& sampled) {
    if (sampled.empty()) throw usage_error("summarize: need at least one completed replication");
    const std::size_t cells = sampled.front().rows.size();
    const std::size_t cols = sampled.front().rows.empty() ? 0 : sampled.front().rows.front().size();
    for (const SampledSeries& s : sampled)
        if (s.rows.size() != cells || s.dt != sampled.front().dt)
            throw usage_error("summarize: replications must share the sampling grid");

    ReplicationSummary sum;
    sum.dt = sampled.front().dt;
    sum.replication_count = sampled.size();
    sum.mean.assign(cells, std::vector<double>(cols, 0.0));
    sum.stddev.assign(cells, std::vector<double>(cols, 0.0));

    for (std::size_t k = 0; k < cells; ++k) {
        for (std::size_t c = 0; c < cols; ++c) {
            double acc = 0;
            for (const SampledSeries& s : sampled) acc += s.rows[k][c];
            const double mean = acc / static_cast<double>(sampled.size());
            sum.mean[k][c] = mean;
            if (sampled.size() > 1) {
                double sq = 0;
                for (const SampledSeries& s : sampled) {
                    const double d = s.rows[k][c] - mean;
                    sq += d * d;
                }
                sum.stddev[k][c] = std::sqrt(sq / static_cast<double>(sampled.size() - 1));
            }
        }
    }
    return sum;
}

ReplicationSummary aggregate(const std::vector<RawSeries>& raw, double dt, double horizon) {
    std::vector<SampledSeries> sampled;
    sampled.reserve(raw.size());
    for (const RawSeries& r : raw) sampled.push_back(resample_zoh(r, dt, horizon));
    return summarize(sampled);
}

bool ExperimentResult::all_ok() const {
    for (const ReplicationOutcome& r : replications)
        if (!r.ok) return false;
    return true;
}

std::size_t ExperimentResult::ok_count() const {
    std::size_t n = 0;
    for (const ReplicationOutcome& r : replications)
        if (r.ok) ++n;
    return n;
}

namespace {

void atomic_write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw usage_error("cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, path);
}

std::string series_csv(const ExperimentConfig& cfg, std::uint32_t stream,
                       const std::vector<std::string>& columns, const SampledSeries& series) {
    std::string out = "# model=" + cfg.model + " seed=" + std::to_string(cfg.seed) +
                      " stream=" + std::to_string(stream) + "\n";
    out += "time";
    for (const std::string& c : columns) out += "," + c;
    out += "\n";
    for (std::size_t k = 0; k < series.rows.size(); ++k) {
        out += format_double(static_cast<double>(k) * series.dt);
        for (double v : series.rows[k]) out += "," + format_double(v);
        out += "\n";
    }
    return out;
}

std::string summary_csv(const ExperimentConfig& cfg, const std::vector<std::string>& columns,
                        const ReplicationSummary& sum, std::size_t attempted) {
    std::string out = "# model=" + cfg.model + " seed=" + std::to_string(cfg.seed) +
                      " replications=" + std::to_string(attempted) +
                      " completed=" + std::to_string(sum.replication_count) + "\n";
    out += "time,reps_ok";
    for (const std::string& c : columns) out += ",mean_" + c + ",std_" + c;
    out += "\n";
    for (std::size_t k = 0; k < sum.mean.size(); ++k) {
        out += format_double(static_cast<double>(k) * sum.dt);
        out += "," + std::to_string(sum.replication_count);
        for (std::size_t c = 0; c < columns.size(); ++c)
            out += "," + format_double(sum.mean[k][c]) + "," + format_double(sum.stddev[k][c]);
        out += "\n";
    }
    return out;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& raw_config) {
    ExperimentConfig cfg = raw_config;
    cfg.finalize();

    // Defaults come from the model; a throwaway build also front-loads any
    // parameter errors before worker threads start.
    const gallery::BuiltModel probe = gallery::build(cfg.model, cfg.params, cfg.seed, 0);
    const double horizon = cfg.horizon.value_or(probe.default_horizon.value());
    const double dt = cfg.sample_dt.value_or(probe.default_sample_dt);
    const std::vector<std::string> columns = probe.series.columns;

    fs::create_directories(cfg.out_dir);

    ExperimentResult result;
    result.horizon = horizon;
    result.sample_dt = dt;
    result.replications.resize(cfg.replications);

    auto run_one = [&](std::uint32_t stream) {
        ReplicationOutcome& outcome = result.replications[stream];
        outcome.stream = stream;
        try {
            gallery::BuiltModel model = gallery::build(cfg.model, cfg.params, cfg.seed, stream);
            RootCoordinator root(model.root, cfg.legitimacy_budget);
            if (cfg.full_trace) root.enable_full_trace();

            RawSeries raw;
            root.init();
            raw.times.push_back(0.0);
            raw.rows.push_back(model.series.extract(root.top().global_state()));

            // Many cycles share one instant; only the last state per instant
            // matters, so extraction is deferred until time moves on.
            Value pending_sg;
            double pending_t = 0.0;
            auto flush = [&] {
                if (pending_sg.is_null()) return;
                if (!raw.times.empty() && raw.times.back() == pending_t)
                    raw.rows.back() = model.series.extract(pending_sg);
                else {
                    raw.times.push_back(pending_t);
                    raw.rows.push_back(model.series.extract(pending_sg));
                }
            };
            root.set_cycle_observer([&](SimTime t, const StarResult&, const Value& s_g) {
                const double tv = t.value();
                if (!pending_sg.is_null() && tv != pending_t) flush();
                pending_sg = s_g;
                pending_t = tv;
            });
            root.run_until(SimTime(horizon));
            flush();

            outcome.series = resample_zoh(raw, dt, horizon);
            const fs::path path =
                fs::path(cfg.out_dir) / (cfg.model + "_rep" + std::to_string(stream) + ".csv");
            atomic_write(path, series_csv(cfg, stream, columns, outcome.series));
            outcome.csv_path = path.string();

            if (cfg.full_trace) {
                std::ostringstream os;
                root.trace().write_csv(os);
                const fs::path tpath =
                    fs::path(cfg.out_dir) / (cfg.model + "_trace" + std::to_string(stream) + ".csv");
                atomic_write(tpath, os.str());
            }
            outcome.ok = true;
        } catch (const LegitimacyError& e) {
            outcome.error = e.what();
        } catch (const CapacityError& e) {
            outcome.error = e.what();
        }
    };

    unsigned jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, cfg.replications);
    if (jobs <= 1) {
        for (std::uint32_t i = 0; i < cfg.replications; ++i) run_one(i);
    } else {
        std::atomic<std::uint32_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(jobs);
        for (unsigned w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::uint32_t i = next.fetch_add(1); i < cfg.replications;
                     i = next.fetch_add(1))
                    run_one(i);
            });
        }
        for (std::thread& t : workers) t.join();
    }

    std::vector<SampledSeries> ok_series;
    for (const ReplicationOutcome& r : result.replications)
        if (r.ok) ok_series.push_back(r.series);

    if (!ok_series.empty()) {
        const ReplicationSummary sum = summarize(ok_series);
        const fs::path path = fs::path(cfg.out_dir) / (cfg.model + "_summary.csv");
        atomic_write(path, summary_csv(cfg, columns, sum, cfg.replications));
        result.summary_path = path.string();
    }
    return result;
}

} // namespace ebdevs::harness
