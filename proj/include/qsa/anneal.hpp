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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qsa/errors.hpp"
#include "qsa/gibbs.hpp"
#include "qsa/instance.hpp"
#include "qsa/resources.hpp"
#include "qsa/rng.hpp"
#include "qsa/tours.hpp"

namespace qsa {

/**
 * One repeated-measurement annealing run. Every trial is a full
 * prepare/bias/project/measure cycle: post-selection failure consumes the
 * trial, success samples one tour from the post-selected distribution. A
 * classical best-so-far buffer keeps convergence monotone.
 */
struct AnnealRun {
    struct Trial {
        std::size_t index; // 1-based
        bool success;
        std::optional<Tour> tour;
        std::optional<double> distance;
        std::optional<double> best_distance;
    };

    std::vector<Trial> trials;
    std::optional<Tour> best;
    std::optional<double> best_distance;
    std::size_t trial_count = 0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> first_target_trial;
};

struct AnnealOptions {
    /// Stop early once best_distance reaches this value (benchmark mode,
    /// where brute force supplies the optimum). Off by default.
    std::optional<double> target_distance;
    double target_tolerance = 1e-9;
    bool record_trials = true;
};

/**
 * Core annealing loop over an injectable uniform source (the public overload
 * seeds a counter-based stream; tests may force outcomes). The per-trial
 * success probability and the conditional tour distribution are the exact
 * post-selection quantities Z/(n-1)! and Gibbs.
 */
template <class UniformFn>
AnnealRun run_quantum_annealing_with(const TspInstance &inst,
                                     std::size_t max_trials, std::uint64_t seed,
                                     const AnnealOptions &options,
                                     UniformFn &&next_unit) {
    if (max_trials == 0)
        throw InvalidArgument("max_trials must be positive");

    const TourDistribution dist = gibbs_distribution(inst);
    const double success_prob =
        dist.z / static_cast<double>(tour_count(inst.n()));

    // Descending-probability CDF for the conditional tour draw.
    std::vector<std::uint32_t> order(dist.entries.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                         return dist.entries[a].probability >
                                dist.entries[b].probability;
                     });
    std::vector<double> cdf(order.size());
    double running = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        running += dist.entries[order[i]].probability;
        cdf[i] = running;
    }

    AnnealRun run;
    run.seed = seed;
    if (options.record_trials)
        run.trials.reserve(std::min<std::size_t>(max_trials, 1 << 20));

    for (std::size_t t = 1; t <= max_trials; ++t) {
        run.trial_count = t;
        AnnealRun::Trial trial{t, false, std::nullopt, std::nullopt,
                               run.best_distance};
        if (next_unit() < success_prob) {
            trial.success = true;
            const double u = next_unit() * running;
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            std::size_t pick = static_cast<std::size_t>(it - cdf.begin());
            if (pick >= order.size())
                pick = order.size() - 1;
            const auto &entry = dist.entries[order[pick]];
            trial.tour = entry.tour;
            trial.distance = tour_distance(inst, entry.tour);
            if (!run.best_distance || *trial.distance < *run.best_distance) {
                run.best_distance = trial.distance;
                run.best = entry.tour;
            }
            trial.best_distance = run.best_distance;
        }
        if (options.record_trials)
            run.trials.push_back(std::move(trial));
        if (options.target_distance && run.best_distance &&
            *run.best_distance <=
                *options.target_distance + options.target_tolerance) {
            if (!run.first_target_trial)
                run.first_target_trial = t;
            break;
        }
    }
    return run;
}

inline AnnealRun run_quantum_annealing(const TspInstance &inst,
                                       std::size_t max_trials,
                                       std::uint64_t seed,
                                       const AnnealOptions &options = {}) {
    rng::Stream stream(seed, rng::kAnnealStream);
    return run_quantum_annealing_with(inst, max_trials, seed, options,
                                      [&stream] { return stream.next_unit(); });
}

/// Run log, one line per trial:
/// `t=<i> ok=<0|1> tour=<string|-> D=<value|-> best=<value|->`.
inline std::string format_run_log(const AnnealRun &run) {
    std::string out;
    for (const auto &trial : run.trials) {
        out += "t=" + std::to_string(trial.index);
        out += " ok=";
        out += trial.success ? '1' : '0';
        out += " tour=";
        out += trial.tour ? to_string(*trial.tour) : "-";
        out += " D=";
        out += trial.distance ? detail::format_sig(*trial.distance) : "-";
        out += " best=";
        out += trial.best_distance ? detail::format_sig(*trial.best_distance)
                                   : "-";
        out += '\n';
    }
    return out;
}

/**
 * Cooling schedule for the Metropolis baseline, as inverse temperature
 * beta(t) with t counted from 1:
 *   logarithmic(c):  beta(t) = ln(1 + t) / c   (T = c / ln(1 + t))
 *   geometric(r):    beta(t) = r^-t            (T = r^t from T0 = 1)
 *   constant(b):     beta(t) = b
 */
struct MetropolisSchedule {
    enum class Kind { Logarithmic, Geometric, Constant };

    Kind kind;
    double param;

    static MetropolisSchedule logarithmic(double c) {
        if (!(c > 0.0))
            throw InvalidArgument("logarithmic schedule needs c > 0");
        return {Kind::Logarithmic, c};
    }

    static MetropolisSchedule geometric(double r) {
        if (!(r > 0.0) || !(r < 1.0))
            throw InvalidArgument("geometric schedule needs r in (0, 1)");
        return {Kind::Geometric, r};
    }

    static MetropolisSchedule constant(double beta) {
        if (beta < 0.0)
            throw InvalidArgument("constant schedule needs beta >= 0");
        return {Kind::Constant, beta};
    }

    double beta_at(std::size_t t) const {
        switch (kind) {
        case Kind::Logarithmic:
            return std::log1p(static_cast<double>(t)) / param;
        case Kind::Geometric:
            return std::pow(param, -static_cast<double>(t));
        case Kind::Constant:
            return param;
        }
        return param;
    }

    std::string name() const {
        switch (kind) {
        case Kind::Logarithmic:
            return "logarithmic";
        case Kind::Geometric:
            return "geometric";
        case Kind::Constant:
            return "constant";
        }
        return "?";
    }
};

struct MetropolisRun {
    std::size_t steps = 0;
    MetropolisSchedule schedule{MetropolisSchedule::Kind::Constant, 0.0};
    std::uint64_t seed = 0;
    Tour best;
    double best_distance = 0.0;
    double acceptance_rate = 0.0;
    std::size_t uphill_proposed = 0;
    std::size_t uphill_accepted = 0;
    /// Best-so-far distance at evenly spaced checkpoints.
    std::vector<double> best_checkpoints;
    /// Visit counts per tour rank (only when track_occupancy is set).
    std::vector<std::uint64_t> occupancy;
    std::optional<std::size_t> first_target_step;
};

struct MetropolisOptions {
    bool random_start = true;
    bool track_occupancy = false;
    std::size_t checkpoint_interval = 0; // 0 = steps/100
    std::optional<double> target_distance;
    double target_tolerance = 1e-9;
    bool stop_at_target = false;
};

/**
 * Classical Metropolis simulated annealing over fixed-start tours. The
 * proposal transposes two uniformly chosen non-start positions; a move with
 * distance change dD is accepted when dD <= 0, else with probability
 * exp(-beta(t) dD). Deterministic per seed.
 */
inline MetropolisRun run_metropolis(const TspInstance &inst, std::size_t steps,
                                    const MetropolisSchedule &schedule,
                                    std::uint64_t seed,
                                    const MetropolisOptions &options = {}) {
    if (steps == 0)
        throw InvalidArgument("steps must be positive");
    const int n = inst.n();

    rng::Stream stream(seed, rng::kMetropolisStream);

    Tour current;
    current.order.resize(n);
    std::iota(current.order.begin(), current.order.end(), 1);
    if (options.random_start) {
        // Fisher-Yates over the suffix.
        for (int i = n - 1; i > 1; --i) {
            const auto j =
                1 + static_cast<int>(stream.next_index(static_cast<std::uint64_t>(i)));
            std::swap(current.order[i], current.order[j]);
        }
    }
    double current_distance = tour_distance(inst, current);

    MetropolisRun run;
    run.steps = steps;
    run.schedule = schedule;
    run.seed = seed;
    run.best = current;
    run.best_distance = current_distance;
    if (options.track_occupancy)
        run.occupancy.assign(tour_count(n), 0);
    const std::size_t checkpoint =
        options.checkpoint_interval ? options.checkpoint_interval
                                    : std::max<std::size_t>(1, steps / 100);

    const auto suffix = static_cast<std::uint64_t>(n - 1);
    std::size_t accepted = 0;
    std::size_t performed = 0;
    for (std::size_t t = 1; t <= steps; ++t) {
        ++performed;
        // Uniform unordered pair of suffix positions.
        const auto i = 1 + stream.next_index(suffix);
        auto j = 1 + stream.next_index(suffix - 1);
        if (j >= i)
            ++j;
        std::swap(current.order[i], current.order[j]);
        const double proposed = tour_distance(inst, current);
        const double delta = proposed - current_distance;
        // Summation order makes reversal moves differ by ~1 ulp; only count
        // genuinely uphill proposals.
        const bool uphill = delta > kTieTolerance;
        if (uphill)
            ++run.uphill_proposed;
        const bool accept =
            delta <= 0.0 ||
            stream.next_unit() < std::exp(-schedule.beta_at(t) * delta);
        if (accept) {
            if (uphill)
                ++run.uphill_accepted;
            ++accepted;
            current_distance = proposed;
            if (current_distance < run.best_distance) {
                run.best_distance = current_distance;
                run.best = current;
            }
        } else {
            std::swap(current.order[i], current.order[j]);
        }
        if (options.track_occupancy)
            ++run.occupancy[tour_rank(current)];
        if (t % checkpoint == 0)
            run.best_checkpoints.push_back(run.best_distance);
        if (options.target_distance && !run.first_target_step &&
            run.best_distance <=
                *options.target_distance + options.target_tolerance) {
            run.first_target_step = t;
            if (options.stop_at_target)
                break;
        }
    }
    run.acceptance_rate =
        static_cast<double>(accepted) / static_cast<double>(performed);
    return run;
}

/**
 * Head-to-head benchmark of the quantum repeated-measurement protocol against
 * the Metropolis baseline over independent seeded runs. Budgets of 0 are
 * reported as fully censored columns rather than errors.
 */
struct MethodSummary {
    std::string method;
    std::size_t runs = 0;
    std::size_t budget = 0;
    std::size_t hits = 0;
    double hit_rate = 0.0;
    std::size_t censored = 0;
    std::optional<double> mean_cost_to_hit; // trials or steps, over hits
    std::optional<double> mean_best_distance;
};

struct ComparisonTable {
    MethodSummary quantum;
    MethodSummary metropolis;
    double optimal_distance = 0.0;
    /// Analytic expectation for the quantum column: (n-1)!/sum_opt alpha^-D.
    double theoretical_expected_repeats_to_optimum = 0.0;
};

inline ComparisonTable compare(const TspInstance &inst,
                               std::size_t quantum_trials,
                               std::size_t metropolis_steps, std::size_t runs,
                               std::uint64_t seed,
                               const MetropolisSchedule &schedule =
                                   MetropolisSchedule::logarithmic(1.0),
                               int threads = 1) {
    if (runs == 0)
        throw InvalidArgument("comparison needs at least one run");

    const OptimalTours best = optimal_tours(inst);
    const ResourceEstimate estimate = estimate_resources(inst);

    ComparisonTable table;
    table.optimal_distance = best.distance;
    table.theoretical_expected_repeats_to_optimum =
        estimate.expected_repeats_to_optimum;

    // Runs are independent per derived seed, so they may fan out across
    // workers; the reduction below walks run indices in order, keeping the
    // table identical for any thread count.
    auto summarize = [&](MethodSummary &summary, auto &&run_one) {
        summary.runs = runs;
        if (summary.budget == 0) {
            summary.censored = runs;
            return;
        }
        std::vector<std::optional<std::size_t>> costs(runs);
        std::vector<std::optional<double>> bests(runs);
        auto work = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t r = lo; r < hi; ++r) {
                const auto [hit_cost, run_best] =
                    run_one(rng::derive_seed(seed, r));
                costs[r] = hit_cost;
                bests[r] = run_best;
            }
        };
        if (threads <= 1 || runs < 2) {
            work(0, runs);
        } else {
            const std::size_t workers =
                std::min<std::size_t>(static_cast<std::size_t>(threads), runs);
            const std::size_t chunk = (runs + workers - 1) / workers;
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w) {
                const std::size_t lo = w * chunk;
                const std::size_t hi = std::min(runs, lo + chunk);
                if (lo < hi)
                    pool.emplace_back(work, lo, hi);
            }
            for (auto &t : pool)
                t.join();
        }

        double cost_sum = 0.0;
        double best_sum = 0.0;
        std::size_t best_count = 0;
        for (std::size_t r = 0; r < runs; ++r) {
            if (costs[r]) {
                ++summary.hits;
                cost_sum += static_cast<double>(*costs[r]);
            } else {
                ++summary.censored;
            }
            if (bests[r]) {
                best_sum += *bests[r];
                ++best_count;
            }
        }
        summary.hit_rate =
            static_cast<double>(summary.hits) / static_cast<double>(runs);
        if (summary.hits > 0)
            summary.mean_cost_to_hit =
                cost_sum / static_cast<double>(summary.hits);
        if (best_count > 0)
            summary.mean_best_distance =
                best_sum / static_cast<double>(best_count);
    };

    table.quantum.method = "quantum";
    table.quantum.budget = quantum_trials;
    summarize(table.quantum, [&](std::uint64_t run_seed)
                  -> std::pair<std::optional<std::size_t>, std::optional<double>> {
        AnnealOptions options;
        options.target_distance = best.distance;
        options.record_trials = false;
        const AnnealRun run =
            run_quantum_annealing(inst, quantum_trials, run_seed, options);
        return {run.first_target_trial, run.best_distance};
    });

    table.metropolis.method = "metropolis";
    table.metropolis.budget = metropolis_steps;
    summarize(table.metropolis, [&](std::uint64_t run_seed)
                  -> std::pair<std::optional<std::size_t>, std::optional<double>> {
        MetropolisOptions options;
        options.target_distance = best.distance;
        options.stop_at_target = true;
        const MetropolisRun run =
            run_metropolis(inst, metropolis_steps, schedule, run_seed, options);
        return {run.first_target_step, run.best_distance};
    });

    return table;
}

/// Aligned text rendering of a comparison table.
inline std::string format_comparison(const ComparisonTable &table) {
    char buf[160];
    std::string out;
    out += "method      runs  budget    hit-rate  censored  mean-cost-to-opt  "
           "mean-best-D\n";
    const auto row = [&](const MethodSummary &s) {
        std::snprintf(
            buf, sizeof(buf), "%-10s  %4zu  %-8zu  %-8.3f  %-8zu  %-16s  %s\n",
            s.method.c_str(), s.runs, s.budget, s.hit_rate, s.censored,
            s.mean_cost_to_hit ? detail::format_sig(*s.mean_cost_to_hit, 6).c_str()
                               : "-",
            s.mean_best_distance
                ? detail::format_sig(*s.mean_best_distance, 6).c_str()
                : "-");
        out += buf;
    };
    row(table.quantum);
    row(table.metropolis);
    out += "optimal distance: " + detail::format_sig(table.optimal_distance, 6) +
           "\n";
    out += "theoretical expected repeats to optimum (quantum): " +
           detail::format_sig(table.theoretical_expected_repeats_to_optimum, 6) +
           "\n";
    return out;
}

} // namespace qsa
