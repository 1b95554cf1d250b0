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
#include <numbers>
#include <span>
#include <vector>

#include "qsa/errors.hpp"
#include "qsa/gibbs.hpp"
#include "qsa/instance.hpp"
#include "qsa/tours.hpp"

namespace qsa {

/// 2^m target of the distinguishability requirement:
/// pi * sqrt(alpha^d - 1) / (min_dd * ln(alpha)).
inline double precision_target(double alpha, double d, double min_dd) {
    if (!(alpha > 1.0))
        throw InvalidArgument("alpha must be > 1");
    if (!(d > 0.0) || d > 1.0)
        throw InvalidArgument("leg distance must lie in (0, 1]");
    if (!(min_dd > 0.0))
        throw DegenerateInstance("minimum distance gap must be positive; "
                                 "the angle resolution diverges at 0");
    return std::numbers::pi * std::sqrt(std::pow(alpha, d) - 1.0) /
           (min_dd * std::log(alpha));
}

/// Phase-resolution bits m = ceil(log2(precision_target)), clamped below at 1.
/// The clamp engages in the d -> 0 limit, where the target collapses to 0 and
/// the instance is degenerate below any angle resolution.
inline int precision_bits(double alpha, double d, double min_dd) {
    const double target = precision_target(alpha, d, min_dd);
    if (!(target > 1.0))
        return 1;
    return std::max(1, static_cast<int>(std::ceil(std::log2(target))));
}

/// Worst-case variant evaluated at the normalization boundary d = 1.
inline int precision_bits(double alpha, double min_dd) {
    return precision_bits(alpha, 1.0, min_dd);
}

namespace detail {

/// Smallest positive gap between distinct off-diagonal distance values;
/// 0 when the instance has a single distinct value (nothing to resolve).
inline double min_positive_distance_gap(const TspInstance &inst) {
    std::vector<double> values;
    for (int j = 1; j <= inst.n(); ++j)
        for (int k = j + 1; k <= inst.n(); ++k)
            values.push_back(inst.distance(j, k));
    std::sort(values.begin(), values.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double diff = values[i] - values[i - 1];
        if (diff > 0.0)
            gap = std::min(gap, diff);
    }
    return std::isfinite(gap) ? gap : 0.0;
}

} // namespace detail

/**
 * Resource demands of the exact-sampling scheme on one instance.
 *
 * success_prob is the post-selection probability Z/(n-1)!; its reciprocal is
 * the expected number of prepare/bias/project repetitions per surviving
 * sample, and expected_repeats_to_optimum the expected repetitions until an
 * optimal tour is measured. energy_scale is alpha^(D of the optimal tour),
 * the photon-count scale of one successful post-selection. aa_repeats is the
 * analytic amplitude-amplification estimate ceil(pi/4 * sqrt(repeats)).
 */
struct ResourceEstimate {
    int m_bits;
    double success_prob;
    double expected_repeats;
    double expected_repeats_to_optimum;
    double energy_scale;
    std::uint64_t aa_repeats;
};

inline ResourceEstimate estimate_resources(const TspInstance &inst) {
    const TourDistribution dist = gibbs_distribution(inst);
    const OptimalTours best = optimal_tours(inst);
    const double count = static_cast<double>(tour_count(inst.n()));

    double optimal_weight = 0.0;
    for (const Tour &t : best.tours)
        optimal_weight += dist.entries[tour_rank(t)].weight;

    ResourceEstimate est;
    est.success_prob = dist.z / count;
    est.expected_repeats = count / dist.z;
    est.expected_repeats_to_optimum = count / optimal_weight;
    est.energy_scale = std::pow(inst.alpha(), best.distance);
    est.aa_repeats = static_cast<std::uint64_t>(std::ceil(
        std::numbers::pi / 4.0 * std::sqrt(est.expected_repeats_to_optimum)));
    // Exact distance ties contribute no finite gap; the resolution demand is
    // over the distinct values, and ties are surfaced by degeneracy_report.
    const double gap = detail::min_positive_distance_gap(inst);
    est.m_bits = gap > 0.0 ? precision_bits(inst.alpha(), 1.0, gap) : 0;
    return est;
}

/**
 * Expected-polytime criterion at degree k: is the probability of measuring
 * an optimal tour at least n^-k? lhs and rhs are the two sides of the
 * equivalent distance-form comparison in log_alpha units.
 */
struct CpReport {
    int n;
    double alpha;
    int k;
    double lhs; // observed -log_alpha Pr(optimal)
    double rhs; // k log_alpha n - log_alpha Z
    bool satisfied;
};

inline CpReport cp_check(const TspInstance &inst, int k) {
    const TourDistribution dist = gibbs_distribution(inst);
    const OptimalTours best = optimal_tours(inst);
    const double pr = solution_probability(dist, best.tours);
    const double log_alpha = inst.beta();

    CpReport report;
    report.n = inst.n();
    report.alpha = inst.alpha();
    report.k = k;
    report.lhs = -std::log(pr) / log_alpha;
    report.rhs = (k * std::log(static_cast<double>(inst.n())) - std::log(dist.z)) /
                 log_alpha;
    // The slack absorbs summation rounding at the exact Pr * n^k = 1 boundary
    // (fully degenerate instances at k = 0).
    report.satisfied =
        pr * std::pow(static_cast<double>(inst.n()), k) >= 1.0 - 1e-12;
    return report;
}

/// cp_check across an increasing alpha grid (values must exceed 1).
inline std::vector<CpReport> cp_sweep(const TspInstance &inst,
                                      std::span<const double> alpha_grid, int k) {
    if (alpha_grid.empty())
        throw InvalidArgument("alpha grid must not be empty");
    std::vector<CpReport> reports;
    reports.reserve(alpha_grid.size());
    for (const double alpha : alpha_grid) {
        if (!(alpha > 1.0))
            throw InvalidArgument("alpha grid values must be > 1");
        reports.push_back(cp_check(inst.with_alpha(alpha), k));
    }
    return reports;
}

/**
 * Near-degeneracy diagnostics. min_distance_gap is the smallest absolute
 * difference between off-diagonal distance values (0 when exact ties exist;
 * ties are reported, never errored). min_tour_gap is the distance from the
 * optimal tour length to the next distinct tour length (0 when all tours
 * tie). Flags fire when a gap falls below its threshold.
 */
struct DegeneracyReport {
    double min_distance_gap;
    bool distance_ties;
    double min_tour_gap;
    bool distance_gap_flagged;
    bool tour_gap_flagged;
    double distance_threshold;
    double tour_threshold;
};

inline DegeneracyReport degeneracy_report(const TspInstance &inst,
                                          double distance_threshold = 1e-3,
                                          double tour_threshold = 1e-6) {
    std::vector<double> values;
    for (int j = 1; j <= inst.n(); ++j)
        for (int k = j + 1; k <= inst.n(); ++k)
            values.push_back(inst.distance(j, k));
    std::sort(values.begin(), values.end());
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < values.size(); ++i)
        min_gap = std::min(min_gap, values[i] - values[i - 1]);

    double best = std::numeric_limits<double>::infinity();
    double second_distinct = std::numeric_limits<double>::infinity();
    for_each_tour(inst.n(), [&](const Tour &t) {
        const double d = tour_distance(inst, t);
        if (d < best - kTieTolerance) {
            second_distinct = best;
            best = d;
        } else if (d > best + kTieTolerance) {
            second_distinct = std::min(second_distinct, d);
        }
    });

    DegeneracyReport report;
    report.min_distance_gap = min_gap;
    report.distance_ties = min_gap == 0.0;
    report.min_tour_gap =
        std::isfinite(second_distinct) ? second_distinct - best : 0.0;
    report.distance_threshold = distance_threshold;
    report.tour_threshold = tour_threshold;
    report.distance_gap_flagged = report.min_distance_gap < distance_threshold;
    report.tour_gap_flagged = report.min_tour_gap < tour_threshold;
    return report;
}

} // namespace qsa
