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
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ebdevs/gallery.hpp"
#include "ebdevs/harness/experiment.hpp"

using namespace ebdevs;
using namespace ebdevs::harness;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::filesystem::path temp_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("ebdevs_test_" + tag);
    std::filesystem::remove_all(dir);
    return dir;
}

} // namespace

TEST_SUITE("resample") {
    TEST_CASE("a constant series resamples to itself") {
        RawSeries raw;
        raw.times = {0.0};
        raw.rows = {{5.0}};
        const SampledSeries s = resample_zoh(raw, 1.0, 4.0);
        REQUIRE(s.rows.size() == 5);
        for (const auto& row : s.rows) CHECK(row[0] == 5.0);
    }

    TEST_CASE("zero-order hold never invents values") {
        RawSeries raw;
        raw.times = {0.0, 0.7, 1.3, 2.9};
        raw.rows = {{1.0}, {4.0}, {2.0}, {9.0}};
        const SampledSeries s = resample_zoh(raw, 0.5, 3.5);
        for (const auto& row : s.rows) {
            const double v = row[0];
            CHECK((v == 1.0 || v == 4.0 || v == 2.0 || v == 9.0));
        }
        // Spot values: at t=1.0 the last observation is 0.7 -> 4.
        CHECK(s.rows[2][0] == 4.0);
        // An observation exactly on the grid counts.
        RawSeries exact;
        exact.times = {0.0, 1.0};
        exact.rows = {{1.0}, {2.0}};
        CHECK(resample_zoh(exact, 1.0, 1.0).rows[1][0] == 2.0);
    }
}

TEST_SUITE("aggregate") {
    TEST_CASE("one replication has zero spread") {
        RawSeries raw;
        raw.times = {0.0, 1.0};
        raw.rows = {{3.0}, {4.0}};
        const ReplicationSummary sum = aggregate({raw}, 1.0, 2.0);
        CHECK(sum.replication_count == 1);
        for (const auto& row : sum.stddev) CHECK(row[0] == 0.0);
    }

    TEST_CASE("two constant series at 0 and 2") {
        RawSeries a, b;
        a.times = b.times = {0.0};
        a.rows = {{0.0}};
        b.rows = {{2.0}};
        const ReplicationSummary sum = aggregate({a, b}, 1.0, 3.0);
        for (std::size_t k = 0; k < sum.mean.size(); ++k) {
            CHECK(sum.mean[k][0] == 1.0);
            CHECK(sum.stddev[k][0] == doctest::Approx(std::sqrt(2.0)));
        }
    }
}

TEST_SUITE("config") {
    TEST_CASE("unknown parameter keys are rejected before any run") {
        ExperimentConfig cfg;
        cfg.model = "sir-cm";
        cfg.params["nope"] = 1;
        CHECK_THROWS_AS(cfg.finalize(), usage_error);
    }

    TEST_CASE("unknown models are rejected") {
        ExperimentConfig cfg;
        cfg.model = "sir-cm-x";
        CHECK_THROWS_AS(cfg.finalize(), usage_error);
    }

    TEST_CASE("overrides parse JSON values with a string fallback") {
        nlohmann::json params;
        apply_override(params, "n=25");
        apply_override(params, "vaccination=true");
        apply_override(params, "tag=plain");
        CHECK(params["n"] == 25);
        CHECK(params["vaccination"] == true);
        CHECK(params["tag"] == "plain");
        CHECK_THROWS_AS(apply_override(params, "novalue"), usage_error);
    }
}

TEST_SUITE("run_experiment") {
    TEST_CASE("replication outputs and summary land on disk") {
        const auto dir = temp_dir("run1");
        ExperimentConfig cfg;
        cfg.model = "sir-cm";
        cfg.params = {{"n", 30}};
        cfg.seed = 5;
        cfg.replications = 2;
        cfg.horizon = 20.0;
        cfg.out_dir = dir.string();
        cfg.jobs = 1;

        const ExperimentResult res = run_experiment(cfg);
        CHECK(res.all_ok());
        REQUIRE(res.replications.size() == 2);
        for (const auto& rep : res.replications) CHECK(std::filesystem::exists(rep.csv_path));
        CHECK(std::filesystem::exists(res.summary_path));

        const std::string head = slurp(res.replications[1].csv_path);
        CHECK(head.rfind("# model=sir-cm seed=5 stream=1", 0) == 0);
        CHECK(head.find("time,nS,nI,nR,outbreak_active") != std::string::npos);
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("the same configuration writes identical bytes") {
        auto once = [](const std::string& tag) {
            const auto dir = temp_dir(tag);
            ExperimentConfig cfg;
            cfg.model = "sir-cm";
            cfg.params = {{"n", 30}};
            cfg.seed = 9;
            cfg.replications = 2;
            cfg.horizon = 15.0;
            cfg.out_dir = dir.string();
            cfg.jobs = 2;
            const ExperimentResult res = run_experiment(cfg);
            REQUIRE(res.all_ok());
            std::string all;
            for (const auto& rep : res.replications) all += slurp(rep.csv_path);
            all += slurp(res.summary_path);
            std::filesystem::remove_all(dir);
            return all;
        };
        CHECK(once("detA") == once("detB"));
    }

    TEST_CASE("aborted replications are recorded and excluded from the summary") {
        const auto dir = temp_dir("abort");
        ExperimentConfig cfg;
        cfg.model = "sir-cm";
        cfg.params = {{"n", 30}};
        cfg.seed = 5;
        cfg.replications = 2;
        cfg.horizon = 20.0;
        cfg.out_dir = dir.string();
        cfg.legitimacy_budget = 1; // any simultaneous pair of transitions trips it
        const ExperimentResult res = run_experiment(cfg);
        CHECK(!res.all_ok());
        CHECK(res.ok_count() == 0);
        for (const auto& rep : res.replications) {
            CHECK(!rep.ok);
            CHECK(rep.error.find("legitimacy") != std::string::npos);
        }
        CHECK(res.summary_path.empty());
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("replication streams differ") {
        const auto dir = temp_dir("streams");
        ExperimentConfig cfg;
        cfg.model = "sir-cm";
        cfg.params = {{"n", 30}};
        cfg.seed = 5;
        cfg.replications = 2;
        cfg.horizon = 20.0;
        cfg.out_dir = dir.string();
        const ExperimentResult res = run_experiment(cfg);
        REQUIRE(res.all_ok());
        CHECK(slurp(res.replications[0].csv_path) != slurp(res.replications[1].csv_path));
        std::filesystem::remove_all(dir);
    }
}
