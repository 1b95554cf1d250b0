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

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "qsa/errors.hpp"
#include "qsa/instance.hpp"
#include "qsa/tours.hpp"

namespace qsa {

/**
 * Exact Gibbs/Boltzmann distribution over the (n-1)! fixed-start tours.
 *
 * Each entry carries the unnormalized weight alpha^(-D) and its normalized
 * probability weight / z, in enumeration order. z is the partition function
 * Z(beta) = sum of weights.
 */
struct TourDistribution {
    struct Entry {
        Tour tour;
        double weight;
        double probability;
    };

    std::vector<Entry> entries;
    double z = 0.0;
    double beta = 0.0;
    double alpha = 1.0;

    double probability_at(std::uint64_t rank) const {
        return entries.at(rank).probability;
    }
};

/// Enumerates all fixed-start tours and normalizes their Boltzmann weights.
/// Weights are handled in log space with a max-shift so the probabilities
/// stay exact even when alpha is large enough to underflow every weight ratio.
inline TourDistribution gibbs_distribution(const TspInstance &inst) {
    TourDistribution dist;
    dist.alpha = inst.alpha();
    dist.beta = inst.beta();
    dist.entries.reserve(tour_count(inst.n()));

    double min_distance = std::numeric_limits<double>::infinity();
    for_each_tour(inst.n(), [&](const Tour &t) {
        const double d = tour_distance(inst, t);
        min_distance = std::min(min_distance, d);
        // The weight slot holds D until the shift is known.
        dist.entries.push_back({t, d, 0.0});
    });

    double shifted_sum = 0.0;
    for (auto &entry : dist.entries) {
        entry.probability = std::exp(-dist.beta * (entry.weight - min_distance));
        shifted_sum += entry.probability;
    }
    for (auto &entry : dist.entries) {
        entry.probability /= shifted_sum;
        entry.weight = std::exp(-dist.beta * entry.weight);
    }
    dist.z = std::exp(-dist.beta * min_distance) * shifted_sum;
    return dist;
}

/// Probability mass the distribution puts on a set of (optimal) tours.
inline double solution_probability(const TourDistribution &dist,
                                   std::span<const Tour> optimal) {
    if (optimal.empty())
        throw InvalidArgument("optimal tour set must not be empty");
    double total = 0.0;
    for (const Tour &t : optimal) {
        const std::uint64_t rank = tour_rank(t);
        if (rank >= dist.entries.size() || !(dist.entries[rank].tour == t))
            throw InvalidArgument("tour " + to_string(t) +
                                  " is not part of the distribution");
        total += dist.entries[rank].probability;
    }
    return total;
}

inline double solution_probability(const TourDistribution &dist,
                                   const std::vector<Tour> &optimal) {
    return solution_probability(dist, std::span<const Tour>(optimal));
}

struct ZBounds {
    double lower; // (n-1)!/alpha^n
    double upper; // (n-1)!/alpha
};

/// Analytic partition-function bounds under the fixed-start convention.
/// Evaluated in log space so they stay finite well past the enumeration cap.
inline ZBounds z_bounds(int n, double alpha) {
    if (n < kMinCities)
        throw InvalidSize("z_bounds needs n >= " + std::to_string(kMinCities));
    if (!(alpha > 1.0))
        throw InvalidArgument("alpha must be > 1");
    const double log_fact = std::lgamma(static_cast<double>(n));
    const double log_alpha = std::log(alpha);
    return {std::exp(log_fact - n * log_alpha), std::exp(log_fact - log_alpha)};
}

/// One line per tour `<tour> <weight> <probability>` in enumeration order,
/// then `Z <value>`.
inline std::string format_distribution(const TourDistribution &dist) {
    std::string out;
    for (const auto &entry : dist.entries) {
        out += to_string(entry.tour);
        out += ' ';
        out += detail::format_sig(entry.weight);
        out += ' ';
        out += detail::format_sig(entry.probability);
        out += '\n';
    }
    out += "Z ";
    out += detail::format_sig(dist.z);
    out += '\n';
    return out;
}

} // namespace qsa
