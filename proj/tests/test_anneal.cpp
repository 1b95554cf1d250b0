// Copyright 2026 The QSA Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include <qsa/anneal.hpp>

#include "support/stats.hpp"

using namespace qsa;

TEST_CASE("quantum annealing success rate matches the post-selection rate") {
    const TspInstance inst = demo_instance();
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const AnnealRun run = run_quantum_annealing(inst, 2000, seed);
        std::size_t successes = 0;
        for (const auto &trial : run.trials)
            if (trial.success)
                ++successes;
        const double rate = static_cast<double>(successes) / 2000.0;
        // success probability Z/6 = 0.0519, 3 sigma over 2000 trials
        CHECK(rate == Catch::Approx(0.0519).margin(0.015));
    }
}

TEST_CASE("quantum annealing finds the optimum within 2000 trials") {
    const TspInstance inst = demo_instance();
    for (std::uint64_t seed : {4u, 5u, 6u, 7u}) {
        const AnnealRun run = run_quantum_annealing(inst, 2000, seed);
        REQUIRE(run.best_distance.has_value());
        CHECK(*run.best_distance == Catch::Approx(2.7).margin(1e-12));
    }
}

TEST_CASE("a forced post-selection failure leaves no best tour") {
    const AnnealRun run = run_quantum_annealing_with(
        demo_instance(), 1, 0, AnnealOptions{},
        [] { return 0.999; }); // each draw lands above any success rate
    CHECK(run.trial_count == 1);
    REQUIRE(run.trials.size() == 1);
    CHECK_FALSE(run.trials[0].success);
    CHECK_FALSE(run.trials[0].tour.has_value());
    CHECK_FALSE(run.best.has_value());
    CHECK_FALSE(run.best_distance.has_value());
}

TEST_CASE("the best-so-far buffer is monotone nonincreasing") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const AnnealRun run =
            run_quantum_annealing(random_instance(5, seed), 500, seed);
        double best = std::numeric_limits<double>::infinity();
        for (const auto &trial : run.trials) {
            if (trial.best_distance) {
                CHECK(*trial.best_distance <= best + 1e-15);
                best = *trial.best_distance;
            }
        }
    }
}

TEST_CASE("max_trials = 0 is rejected") {
    CHECK_THROWS_AS(run_quantum_annealing(demo_instance(), 0, 1),
                    InvalidArgument);
}

TEST_CASE("the early-stop target caps the run at the first hit") {
    AnnealOptions options;
    options.target_distance = 2.7;
    const AnnealRun run = run_quantum_annealing(demo_instance(), 100000, 3, options);
    REQUIRE(run.first_target_trial.has_value());
    CHECK(run.trial_count == *run.first_target_trial);
    CHECK(*run.best_distance == Catch::Approx(2.7).margin(1e-12));
}

TEST_CASE("trials-to-optimum follows the derived geometric law") {
    // Smoke-scale Kolmogorov-Smirnov check; the acceptance suite runs the
    // full 10^4-sample version.
    const TspInstance inst = demo_instance();
    const double p = 1.0 / estimate_resources(inst).expected_repeats_to_optimum;
    CHECK(p == Catch::Approx(0.0224).margin(5e-4));

    const std::size_t runs = 1000;
    std::vector<std::uint64_t> samples;
    samples.reserve(runs);
    AnnealOptions options;
    options.target_distance = 2.7;
    options.record_trials = false;
    for (std::size_t r = 0; r < runs; ++r) {
        const AnnealRun run =
            run_quantum_annealing(inst, 1 << 20, rng::derive_seed(77, r), options);
        REQUIRE(run.first_target_trial.has_value());
        samples.push_back(*run.first_target_trial);
    }
    const double stat = teststats::ks_statistic_geometric(samples, p);
    CHECK(stat < teststats::ks_critical(1e-3, runs));
}

TEST_CASE("run log lines follow the t/ok/tour/D/best format") {
    const AnnealRun run = run_quantum_annealing(demo_instance(), 50, 9);
    const std::string log = format_run_log(run);
    CHECK(log.find("t=1 ok=") == 0);
    CHECK(log.rfind("t=50 ok=") != std::string::npos);
    CHECK(log.find(" tour=") != std::string::npos);
    CHECK(log.find(" D=") != std::string::npos);
    CHECK(log.find(" best=") != std::string::npos);
}

TEST_CASE("metropolis at beta = 0 accepts every move") {
    const MetropolisRun run = run_metropolis(
        demo_instance(), 5000, MetropolisSchedule::constant(0.0), 1);
    CHECK(run.acceptance_rate == 1.0);
}

TEST_CASE("metropolis with the logarithmic schedule reaches the optimum") {
    std::size_t hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const MetropolisRun run = run_metropolis(
            demo_instance(), 100000, MetropolisSchedule::logarithmic(1.0), seed);
        if (std::abs(run.best_distance - 2.7) < 1e-12)
            ++hits;
    }
    CHECK(hits == 20);
}

TEST_CASE("a huge constant beta behaves like greedy descent") {
    const MetropolisRun run = run_metropolis(
        demo_instance(), 10000, MetropolisSchedule::constant(50.0), 5);
    CHECK(run.best_distance == Catch::Approx(2.7).margin(1e-12));
    // Uphill moves are essentially never accepted at beta = 50; level moves
    // (reversals) stay free, so only the uphill rate is pinned.
    REQUIRE(run.uphill_proposed > 0);
    CHECK(static_cast<double>(run.uphill_accepted) /
              static_cast<double>(run.uphill_proposed) <
          1e-3);
}

TEST_CASE("metropolis schedules validate their parameters") {
    CHECK_THROWS_AS(MetropolisSchedule::logarithmic(0.0), InvalidArgument);
    CHECK_THROWS_AS(MetropolisSchedule::logarithmic(-1.0), InvalidArgument);
    CHECK_THROWS_AS(MetropolisSchedule::geometric(0.0), InvalidArgument);
    CHECK_THROWS_AS(MetropolisSchedule::geometric(1.0), InvalidArgument);
    CHECK_THROWS_AS(MetropolisSchedule::constant(-0.5), InvalidArgument);
    CHECK_THROWS_AS(run_metropolis(demo_instance(), 0,
                                   MetropolisSchedule::constant(1.0), 1),
                    InvalidArgument);
}

TEST_CASE("metropolis runs are deterministic per seed") {
    const MetropolisRun a = run_metropolis(
        demo_instance(), 2000, MetropolisSchedule::logarithmic(1.0), 42);
    const MetropolisRun b = run_metropolis(
        demo_instance(), 2000, MetropolisSchedule::logarithmic(1.0), 42);
    CHECK(a.best_distance == b.best_distance);
    CHECK(a.acceptance_rate == b.acceptance_rate);
    CHECK(a.best_checkpoints == b.best_checkpoints);
}

TEST_CASE("best checkpoints never increase") {
    const MetropolisRun run = run_metropolis(
        random_instance(6, 3), 20000, MetropolisSchedule::logarithmic(0.5), 8);
    double previous = std::numeric_limits<double>::infinity();
    for (const double checkpoint : run.best_checkpoints) {
        CHECK(checkpoint <= previous + 1e-15);
        previous = checkpoint;
    }
}

TEST_CASE("constant-beta metropolis converges to the Gibbs occupancy") {
    // Smoke-scale detailed-balance check at beta = 1 (alpha = e); the
    // acceptance suite runs 10^6 steps at TV < 0.02.
    const TspInstance inst = demo_instance();
    MetropolisOptions options;
    options.track_occupancy = true;
    const MetropolisRun run = run_metropolis(
        inst, 200000, MetropolisSchedule::constant(1.0), 17, options);
    std::vector<double> empirical(run.occupancy.size());
    for (std::size_t i = 0; i < empirical.size(); ++i)
        empirical[i] = static_cast<double>(run.occupancy[i]) / 200000.0;
    const TourDistribution dist = gibbs_distribution(inst);
    std::vector<double> gibbs(dist.entries.size());
    for (std::size_t i = 0; i < gibbs.size(); ++i)
        gibbs[i] = dist.entries[i].probability;
    CHECK(teststats::total_variation(empirical, gibbs) < 0.05);
}

TEST_CASE("compare reports both methods and the analytic expectation") {
    const ComparisonTable table = compare(demo_instance(), 2000, 20000, 30, 123);
    CHECK(table.optimal_distance == Catch::Approx(2.7).margin(1e-12));
    CHECK(table.theoretical_expected_repeats_to_optimum ==
          Catch::Approx(44.6).margin(0.5));

    CHECK(table.quantum.runs == 30);
    CHECK(table.quantum.hits == 30); // miss probability < 1e-19 per run
    REQUIRE(table.quantum.mean_cost_to_hit.has_value());
    // Mean of 30 geometric draws with mean 44.6: +-3 sigma/sqrt(30) = 25.
    CHECK(*table.quantum.mean_cost_to_hit == Catch::Approx(44.6).margin(25.0));

    CHECK(table.metropolis.hits == 30);
    REQUIRE(table.metropolis.mean_best_distance.has_value());
    CHECK(*table.metropolis.mean_best_distance ==
          Catch::Approx(2.7).margin(1e-12));
}

TEST_CASE("a zero budget is reported as censored, not an error") {
    const ComparisonTable table = compare(demo_instance(), 0, 5000, 10, 7);
    CHECK(table.quantum.censored == 10);
    CHECK(table.quantum.hits == 0);
    CHECK_FALSE(table.quantum.mean_cost_to_hit.has_value());
    CHECK(table.metropolis.hits == 10);
}

TEST_CASE("identical seeds reproduce the comparison table") {
    const ComparisonTable a = compare(demo_instance(), 500, 5000, 5, 99);
    const ComparisonTable b = compare(demo_instance(), 500, 5000, 5, 99);
    CHECK(format_comparison(a) == format_comparison(b));
}

TEST_CASE("the comparison table is independent of the worker count") {
    const ComparisonTable serial =
        compare(demo_instance(), 800, 8000, 12, 5, MetropolisSchedule::logarithmic(1.0), 1);
    const ComparisonTable fanned =
        compare(demo_instance(), 800, 8000, 12, 5, MetropolisSchedule::logarithmic(1.0), 4);
    CHECK(format_comparison(serial) == format_comparison(fanned));
}
