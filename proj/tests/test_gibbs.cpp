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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <qsa/gibbs.hpp>

using namespace qsa;

namespace {

/// Instance with a unique optimal reversal pair and a 1.9 tour-distance gap:
/// the cycle 1-2-3-4-1 is cheap, both chords are maximal.
TspInstance gapped_instance() {
    return TspInstance::from_distances({{0.00, 0.05, 1.00, 0.05},
                                        {0.05, 0.00, 0.05, 1.00},
                                        {1.00, 0.05, 0.00, 0.05},
                                        {0.05, 1.00, 0.05, 0.00}});
}

} // namespace

TEST_CASE("gibbs_distribution reproduces the demo table") {
    const TourDistribution dist = gibbs_distribution(demo_instance());
    REQUIRE(dist.entries.size() == 6);
    CHECK(dist.z == Catch::Approx(0.3112).margin(5e-4));

    const std::vector<double> expected{0.1073, 0.2159, 0.1767,
                                       0.2159, 0.1767, 0.1073};
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(dist.entries[i].probability ==
              Catch::Approx(expected[i]).margin(5e-4));
}

TEST_CASE("gibbs_distribution matches a test-local brute force") {
    // Independent oracle for (n=4, seed=7): recompute every weight from the
    // distance matrix with explicit leg sums, bypassing the library's tour
    // and weight machinery.
    const TspInstance inst = random_instance(4, 7);
    const int orders[6][4] = {{1, 2, 3, 4}, {1, 2, 4, 3}, {1, 3, 2, 4},
                              {1, 3, 4, 2}, {1, 4, 2, 3}, {1, 4, 3, 2}};
    double weights[6];
    double z = 0.0;
    for (int t = 0; t < 6; ++t) {
        double d = 0.0;
        for (int leg = 0; leg < 4; ++leg)
            d += inst.distance(orders[t][leg], orders[t][(leg + 1) % 4]);
        weights[t] = std::pow(inst.alpha(), -d);
        z += weights[t];
    }

    const TourDistribution dist = gibbs_distribution(inst);
    REQUIRE(dist.entries.size() == 6);
    CHECK(dist.z == Catch::Approx(z).epsilon(1e-12));
    for (int t = 0; t < 6; ++t) {
        CHECK(dist.entries[t].weight ==
              Catch::Approx(weights[t]).epsilon(1e-12));
        CHECK(dist.entries[t].probability ==
              Catch::Approx(weights[t] / z).epsilon(1e-12));
    }
}

TEST_CASE("equal distances give the uniform distribution") {
    const RawMatrix ones{{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}};
    const TourDistribution dist =
        gibbs_distribution(TspInstance::from_distances(ones));
    for (const auto &entry : dist.entries)
        CHECK(entry.probability == Catch::Approx(1.0 / 6).epsilon(1e-12));
}

TEST_CASE("alpha near 1 flattens the distribution") {
    const TourDistribution dist =
        gibbs_distribution(demo_instance().with_alpha(1.0001));
    double min = 1.0;
    double max = 0.0;
    for (const auto &entry : dist.entries) {
        min = std::min(min, entry.probability);
        max = std::max(max, entry.probability);
    }
    CHECK(max - min < 1e-4);
}

TEST_CASE("probabilities are consistent and sum to one") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const TspInstance inst = random_instance(6, seed, 5.0);
        const TourDistribution dist = gibbs_distribution(inst);
        CHECK(dist.z > 0.0);
        double sum = 0.0;
        for (const auto &entry : dist.entries) {
            sum += entry.probability;
            CHECK(entry.probability ==
                  Catch::Approx(entry.weight / dist.z).epsilon(1e-12));
        }
        CHECK(sum == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("z matches a compensated Kahan re-summation") {
    for (std::uint64_t seed : {4u, 9u}) {
        const TspInstance inst = random_instance(7, seed, 8.0);
        double sum = 0.0;
        double carry = 0.0;
        for_each_tour(7, [&](const Tour &t) {
            const double w =
                std::exp(-inst.beta() * tour_distance(inst, t)) - carry;
            const double next = sum + w;
            carry = (next - sum) - w;
            sum = next;
        });
        CHECK(gibbs_distribution(inst).z == Catch::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("solution_probability reproduces the 0.43 vs 0.33 comparison") {
    const TspInstance inst = demo_instance();
    const TourDistribution dist = gibbs_distribution(inst);
    const OptimalTours best = optimal_tours(inst);

    CHECK(solution_probability(dist, best.tours) ==
          Catch::Approx(0.43).margin(5e-3));

    // Unbiased comparison via the alpha -> 1 limit.
    const TourDistribution flat =
        gibbs_distribution(inst.with_alpha(1.0 + 1e-9));
    CHECK(solution_probability(flat, best.tours) ==
          Catch::Approx(0.33).margin(5e-3));
}

TEST_CASE("solution_probability rejects an empty or foreign tour set") {
    const TourDistribution dist = gibbs_distribution(demo_instance());
    CHECK_THROWS_AS(solution_probability(dist, std::vector<Tour>{}),
                    InvalidArgument);
    const TourDistribution small = gibbs_distribution(random_instance(5, 1));
    CHECK_THROWS_AS(solution_probability(dist, std::vector<Tour>{
                        Tour{{1, 2, 3, 4, 5}}}),
                    InvalidArgument);
}

TEST_CASE("an extreme alpha concentrates all mass on the optimum") {
    const TspInstance inst = gapped_instance().with_alpha(1e6);
    const TourDistribution dist = gibbs_distribution(inst);
    const OptimalTours best = optimal_tours(inst);
    CHECK(best.distance == Catch::Approx(0.2).margin(1e-12));
    CHECK(solution_probability(dist, best.tours) >= 0.999);
}

TEST_CASE("z_bounds bracket the demo partition function") {
    const ZBounds bounds = z_bounds(4, kDefaultAlpha);
    CHECK(bounds.lower == Catch::Approx(6.0 / std::exp(4.0)).epsilon(1e-12));
    CHECK(bounds.upper == Catch::Approx(6.0 / std::exp(1.0)).epsilon(1e-12));
    const double z = gibbs_distribution(demo_instance()).z;
    CHECK(z == Catch::Approx(0.3112).margin(5e-4));
    CHECK(bounds.lower <= z);
    CHECK(z <= bounds.upper);
}

TEST_CASE("z equals the lower bound when every distance is 1") {
    const RawMatrix ones{{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}};
    for (double alpha : {2.0, kDefaultAlpha, 7.5}) {
        const double z =
            gibbs_distribution(TspInstance::from_distances(ones, alpha)).z;
        CHECK(z == Catch::Approx(z_bounds(4, alpha).lower).epsilon(1e-12));
    }
}

TEST_CASE("z approaches but never exceeds the upper bound") {
    // At n = 3 every tour contains every edge, including the maximal one, so
    // shrinking the other distances drives Z up toward (n-1)!/alpha.
    const TspInstance inst = TspInstance::from_distances(
        {{0, 0.01, 0.01}, {0.01, 0, 1.0}, {0.01, 1.0, 0}});
    const double z = gibbs_distribution(inst).z;
    const ZBounds bounds = z_bounds(3, inst.alpha());
    CHECK(z <= bounds.upper);
    CHECK(z > 0.95 * bounds.upper);
}

TEST_CASE("z_bounds stay analytic past the enumeration cap") {
    const ZBounds bounds = z_bounds(20, 2.0);
    CHECK(bounds.lower > 0.0);
    CHECK(bounds.upper > bounds.lower);
    CHECK(std::isfinite(bounds.upper));
    CHECK_THROWS_AS(z_bounds(2, 2.0), InvalidSize);
    CHECK_THROWS_AS(z_bounds(4, 1.0), InvalidArgument);
}

TEST_CASE("z bounds hold for generated instances") {
    for (int n = 4; n <= 7; ++n) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            for (double alpha : {2.0, kDefaultAlpha, 8.0}) {
                const TspInstance inst = random_instance(n, seed, alpha);
                const double z = gibbs_distribution(inst).z;
                const ZBounds bounds = z_bounds(n, alpha);
                CHECK(bounds.lower <= z);
                CHECK(z <= bounds.upper);
            }
        }
    }
}

TEST_CASE("optimal-tour probability is nondecreasing in alpha") {
    const std::vector<double> grid{1.5, 2.0, kDefaultAlpha, 4.0, 8.0, 16.0};
    for (std::uint64_t seed : {1u, 6u, 21u}) {
        const TspInstance inst = random_instance(5, seed);
        const OptimalTours best = optimal_tours(inst);
        double previous = 0.0;
        for (const double alpha : grid) {
            const double p = solution_probability(
                gibbs_distribution(inst.with_alpha(alpha)), best.tours);
            CHECK(p >= previous - 1e-12);
            previous = p;
        }
    }
}

TEST_CASE("format_distribution emits one tour per line plus Z") {
    const std::string text = format_distribution(gibbs_distribution(demo_instance()));
    CHECK(text.find("(1)234(1) ") == 0);
    CHECK(text.find("\nZ 0.3112") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 7);
}
