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
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "qsa/errors.hpp"
#include "qsa/instance.hpp"

namespace qsa {

/// Brute-force enumeration cap: 11! suffixes is the largest tour set the
/// exact backends are asked to stream.
inline constexpr int kMaxEnumerationCities = 12;

/// Tie tolerance when collecting equally short tours (distances are O(1)).
inline constexpr double kTieTolerance = 1e-12;

/**
 * A closed tour with fixed start city 1: `order` is a permutation of
 * {1..n} with order.front() == 1. Leg j runs order[j] -> order[j+1], and
 * the final leg wraps back to city 1.
 */
struct Tour {
    std::vector<int> order;

    int n() const noexcept { return static_cast<int>(order.size()); }

    friend bool operator==(const Tour &, const Tour &) = default;
};

/// Renders a tour in the `(1)243(1)` style; cities beyond 9 are dash-joined.
inline std::string to_string(const Tour &tour) {
    std::string out = "(1)";
    const bool wide = tour.n() > 9;
    for (int i = 1; i < tour.n(); ++i) {
        if (wide && i > 1)
            out += '-';
        out += std::to_string(tour.order[i]);
    }
    out += "(1)";
    return out;
}

inline void validate_city_count(int n) {
    if (n < kMinCities)
        throw InvalidSize("tours need at least " + std::to_string(kMinCities) +
                          " cities, got " + std::to_string(n));
    if (n > kMaxEnumerationCities)
        throw TooLarge("tour enumeration caps at " +
                       std::to_string(kMaxEnumerationCities) + " cities, got " +
                       std::to_string(n));
}

/// Number of fixed-start tours, (n-1)!.
inline std::uint64_t tour_count(int n) {
    validate_city_count(n);
    std::uint64_t count = 1;
    for (int i = 2; i < n; ++i)
        count *= static_cast<std::uint64_t>(i);
    return count;
}

inline void validate_tour(const Tour &tour, int n) {
    if (n > 63)
        throw InvalidArgument("tours support at most 63 cities");
    if (tour.n() != n || tour.order.empty() || tour.order.front() != 1)
        throw InvalidArgument("tour must start at city 1 and visit " +
                              std::to_string(n) + " cities");
    std::uint64_t seen = 0;
    for (int city : tour.order) {
        if (city < 1 || city > n || (seen & (1ULL << city)))
            throw InvalidArgument("tour is not a permutation of {1.." +
                                  std::to_string(n) + "}");
        seen |= 1ULL << city;
    }
}

/**
 * Streams every fixed-start tour in lexicographic order of the suffix
 * order[2..n]. The same Tour buffer is reused between calls; copy it if
 * the callback needs to keep one.
 */
template <class Fn> void for_each_tour(int n, Fn &&fn) {
    validate_city_count(n);
    Tour tour;
    tour.order.resize(n);
    std::iota(tour.order.begin(), tour.order.end(), 1);
    do {
        fn(static_cast<const Tour &>(tour));
    } while (std::next_permutation(tour.order.begin() + 1, tour.order.end()));
}

/// Materializes all (n-1)! tours in enumeration order.
inline std::vector<Tour> enumerate_tours(int n) {
    std::vector<Tour> tours;
    tours.reserve(tour_count(n));
    for_each_tour(n, [&](const Tour &t) { tours.push_back(t); });
    return tours;
}

/// Rank of a tour in enumeration order (Lehmer code of the suffix).
inline std::uint64_t tour_rank(const Tour &tour) {
    const int n = tour.n();
    validate_tour(tour, n);
    std::uint64_t rank = 0;
    std::uint64_t fact = 1;
    for (int i = n - 1; i >= 1; --i) {
        int smaller = 0;
        for (int j = i + 1; j < n; ++j)
            if (tour.order[j] < tour.order[i])
                ++smaller;
        rank += smaller * fact;
        fact *= static_cast<std::uint64_t>(n - i);
    }
    return rank;
}

/// Inverse of tour_rank.
inline Tour tour_from_rank(int n, std::uint64_t rank) {
    const std::uint64_t count = tour_count(n);
    if (rank >= count)
        throw InvalidArgument("tour rank " + std::to_string(rank) +
                              " out of range [0, " + std::to_string(count) + ")");
    std::vector<int> pool(n - 1);
    std::iota(pool.begin(), pool.end(), 2);
    Tour tour;
    tour.order.reserve(n);
    tour.order.push_back(1);
    std::uint64_t fact = count;
    for (int i = n - 1; i >= 1; --i) {
        fact /= static_cast<std::uint64_t>(i);
        const auto pick = static_cast<std::size_t>(rank / fact);
        rank %= fact;
        tour.order.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return tour;
}

/// Total tour distance D = sum of the n leg distances, closing leg included.
inline double tour_distance(const TspInstance &inst, const Tour &tour) {
    validate_tour(tour, inst.n());
    double total = 0.0;
    for (int i = 0; i < tour.n(); ++i)
        total += inst.distance(tour.order[i], tour.order[(i + 1) % tour.n()]);
    return total;
}

/// Product of the leg biases; equals alpha^(-tour_distance).
inline double tour_bias_product(const TspInstance &inst, const Tour &tour) {
    validate_tour(tour, inst.n());
    double product = 1.0;
    for (int i = 0; i < tour.n(); ++i)
        product *= inst.bias(tour.order[i], tour.order[(i + 1) % tour.n()]);
    return product;
}

/// Same cycle walked backwards: (1, s_n, ..., s_2).
inline Tour reversed(const Tour &tour) {
    Tour out = tour;
    std::reverse(out.order.begin() + 1, out.order.end());
    return out;
}

struct OptimalTours {
    double distance = 0.0;
    std::vector<Tour> tours;
};

/// Brute-force scan over all tours; returns the minimum distance and every
/// tour within kTieTolerance of it.
inline OptimalTours optimal_tours(const TspInstance &inst) {
    OptimalTours best;
    best.distance = std::numeric_limits<double>::infinity();
    for_each_tour(inst.n(), [&](const Tour &t) {
        const double d = tour_distance(inst, t);
        if (d < best.distance - kTieTolerance) {
            best.distance = d;
            best.tours.clear();
            best.tours.push_back(t);
        } else if (d <= best.distance + kTieTolerance) {
            best.distance = std::min(best.distance, d);
            best.tours.push_back(t);
        }
    });
    return best;
}

} // namespace qsa
