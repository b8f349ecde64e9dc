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
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ebdevs/gallery.hpp"
#include "ebdevs/harness/experiment.hpp"
#include "ebdevs/simulator.hpp"
#include "ebdevs/transforms.hpp"

namespace {

constexpr int EXIT_OK = 0;
constexpr int EXIT_CONFIG = 1;
constexpr int EXIT_ABORT = 2;
constexpr int EXIT_VERIFY = 3;

using ebdevs::ModelSpec;
using ebdevs::RootCoordinator;
using ebdevs::SimTime;
using ebdevs::Trace;

struct TransformCheck {
    bool pass = false;
    std::size_t events = 0;
    std::string detail;
};

Trace run_full(const ModelSpec& model, double horizon, std::uint64_t budget) {
    RootCoordinator root(model, budget);
    root.enable_full_trace();
    root.init();
    root.run_until(SimTime(horizon));
    return root.trace();
}

TransformCheck check_transform(const std::string& name, const nlohmann::json& params,
                               std::uint64_t seed, double horizon, bool lower) {
    TransformCheck out;
    ebdevs::gallery::BuiltModel reference = ebdevs::gallery::build(name, params, seed, 0);
    const Trace base = run_full(reference.root, horizon, 1'000'000);
    out.events = base.event_count();

    ModelSpec transformed;
    ebdevs::TraceProjection projection;
    if (lower) {
        transformed = ModelSpec::coupled(ebdevs::lower_to_classic(reference.root));
        projection = ebdevs::TraceProjection::broadcast_filtered;
    } else {
        transformed = ModelSpec::atomic(ebdevs::flatten(reference.root));
        projection = ebdevs::TraceProjection::cycle_states;
    }

    // A transformed run may abort where the original did not (a model whose
    // components consume data their local replicas cannot reconstruct); that
    // is a divergence, not a crash.
    try {
        const Trace other = run_full(transformed, horizon, 1'000'000);
        const ebdevs::EquivalenceResult eq = ebdevs::trace_equivalent(base, other, projection);
        out.pass = eq.equal;
        out.detail = eq.divergence;
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("transformed run aborted: ") + e.what();
    }
    return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& csv) {
    std::vector<std::uint64_t> seeds;
    std::istringstream is(csv);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        seeds.push_back(std::stoull(item));
    }
    if (seeds.empty()) throw ebdevs::usage_error("no seeds given");
    return seeds;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"EB-DEVS simulation kernel and case-study models"};
    app.require_subcommand(1);

    // --- run ---------------------------------------------------------------
    auto* run = app.add_subcommand("run", "Run replicated experiments and write CSV outputs");
    std::string run_model, run_config, run_out, run_trace = "sampled";
    std::vector<std::string> run_sets;
    std::uint64_t run_seed = 0;
    bool run_seed_set = false;
    std::uint32_t run_reps = 0;
    double run_horizon = -1, run_dt = -1;
    std::uint64_t run_budget = 0;
    unsigned run_jobs = 0;
    run->add_option("--model", run_model, "Gallery model name");
    run->add_option("--config", run_config, "Experiment config JSON file");
    run->add_option("--seed", run_seed, "Base seed")->each([&](const std::string&) { run_seed_set = true; });
    run->add_option("--reps", run_reps, "Replication count");
    run->add_option("--horizon", run_horizon, "Simulated time horizon");
    run->add_option("--dt", run_dt, "Sampling grid step");
    run->add_option("--out", run_out, "Output directory");
    run->add_option("--trace", run_trace, "Trace granularity: sampled|full")
        ->check(CLI::IsMember({"sampled", "full"}));
    run->add_option("--budget", run_budget, "Legitimacy budget (transitions per zero-advance window)");
    run->add_option("--jobs", run_jobs, "Concurrent replication workers");
    run->add_option("--set", run_sets, "Model parameter override key=value (repeatable)");

    // --- transform ---------------------------------------------------------
    auto* transform = app.add_subcommand("transform", "Apply a model transformation and verify it");
    transform->require_subcommand(1);
    std::string tr_model;
    std::size_t tr_size = 10;
    std::uint64_t tr_seed = 1;
    double tr_horizon = -1;
    auto add_tr_opts = [&](CLI::App* sub) {
        sub->add_option("--model", tr_model, "Gallery model name")->required();
        sub->add_option("--size", tr_size, "Component count for the reduced model");
        sub->add_option("--seed", tr_seed, "Seed");
        sub->add_option("--horizon", tr_horizon, "Run horizon (model default when omitted)");
    };
    auto* tr_flatten = transform->add_subcommand("flatten", "Hierarchical vs flattened run");
    auto* tr_lower = transform->add_subcommand("lower", "Micro-macro vs broadcast-mesh Classic run");
    add_tr_opts(tr_flatten);
    add_tr_opts(tr_lower);

    // --- verify ------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "Verification suites");
    verify->require_subcommand(1);
    auto* equivalence = verify->add_subcommand("equivalence", "Flatten and lowering equivalence over seeds");
    std::string eq_model;
    std::size_t eq_size = 10;
    std::string eq_seeds = "1,2,3";
    double eq_horizon = -1;
    equivalence->add_option("--model", eq_model, "Gallery model name")->required();
    equivalence->add_option("--size", eq_size, "Component count for the reduced model");
    equivalence->add_option("--seeds", eq_seeds, "Comma-separated seed list");
    equivalence->add_option("--horizon", eq_horizon, "Run horizon (model default when omitted)");

    auto* list = app.add_subcommand("list-models", "List gallery model names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? EXIT_OK : EXIT_CONFIG;
    }

    try {
        if (*list) {
            for (const std::string& name : ebdevs::gallery::model_names())
                std::cout << name << "\n";
            return EXIT_OK;
        }

        if (*run) {
            ebdevs::harness::ExperimentConfig cfg;
            if (!run_config.empty()) cfg = ebdevs::harness::load_config(run_config);
            if (!run_model.empty()) cfg.model = run_model;
            if (run_seed_set) cfg.seed = run_seed;
            if (run_reps > 0) cfg.replications = run_reps;
            if (run_horizon >= 0) cfg.horizon = run_horizon;
            if (run_dt > 0) cfg.sample_dt = run_dt;
            if (!run_out.empty()) cfg.out_dir = run_out;
            if (run_budget > 0) cfg.legitimacy_budget = run_budget;
            if (run_jobs > 0) cfg.jobs = run_jobs;
            cfg.full_trace = run_trace == "full";
            for (const std::string& s : run_sets) ebdevs::harness::apply_override(cfg.params, s);

            const ebdevs::harness::ExperimentResult result = ebdevs::harness::run_experiment(cfg);
            for (const auto& rep : result.replications) {
                if (rep.ok)
                    std::cout << "rep " << rep.stream << ": ok " << rep.csv_path << "\n";
                else
                    std::cout << "rep " << rep.stream << ": ABORTED. " << rep.error << "\n";
            }
            if (!result.summary_path.empty())
                std::cout << "summary: " << result.summary_path << "\n";
            return result.all_ok() ? EXIT_OK : EXIT_ABORT;
        }

        if (*transform) {
            const bool lower = tr_lower->parsed();
            nlohmann::json params = ebdevs::gallery::apply_size(tr_model, {}, tr_size);
            const ebdevs::gallery::BuiltModel probe = ebdevs::gallery::build(tr_model, params, tr_seed, 0);
            const double horizon = tr_horizon >= 0 ? tr_horizon : probe.default_horizon.value();

            const TransformCheck check = check_transform(tr_model, params, tr_seed, horizon, lower);
            std::cout << (lower ? "lower" : "flatten") << " " << tr_model << " size=" << tr_size
                      << " seed=" << tr_seed << " events=" << check.events << ": "
                      << (check.pass ? "PASS" : "FAIL") << "\n";
            if (!check.pass) std::cout << "  divergence: " << check.detail << "\n";
            return check.pass ? EXIT_OK : EXIT_VERIFY;
        }

        if (*equivalence) {
            nlohmann::json params = ebdevs::gallery::apply_size(eq_model, {}, eq_size);
            bool all_pass = true;
            for (const std::uint64_t seed : parse_seeds(eq_seeds)) {
                const ebdevs::gallery::BuiltModel probe = ebdevs::gallery::build(eq_model, params, seed, 0);
                const double horizon = eq_horizon >= 0 ? eq_horizon : probe.default_horizon.value();
                for (const bool lower : {false, true}) {
                    const TransformCheck check =
                        check_transform(eq_model, params, seed, horizon, lower);
                    std::cout << (lower ? "lower" : "flatten") << " " << eq_model
                              << " seed=" << seed << " events=" << check.events << ": "
                              << (check.pass ? "PASS" : "FAIL") << "\n";
                    if (!check.pass) {
                        std::cout << "  divergence: " << check.detail << "\n";
                        all_pass = false;
                    }
                }
            }
            return all_pass ? EXIT_OK : EXIT_VERIFY;
        }
    } catch (const ebdevs::usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_CONFIG;
    } catch (const ebdevs::LegitimacyError& e) {
        std::cerr << "run aborted: " << e.what() << "\n";
        return EXIT_ABORT;
    } catch (const ebdevs::CapacityError& e) {
        std::cerr << "run aborted: " << e.what() << "\n";
        return EXIT_ABORT;
    }
    return EXIT_OK;
}
