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

// Test-side statistics helpers, independent of the library implementation.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace teststats {

/// Total-variation distance between two probability vectors.
inline double total_variation(std::span<const double> p,
                              std::span<const double> q) {
    double tv = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        tv += std::abs(p[i] - q[i]);
    return 0.5 * tv;
}

/// Kolmogorov-Smirnov statistic of integer samples (support 1, 2, ...)
/// against Geometric(p): F(k) = 1 - (1-p)^k. The CDFs are compared at every
/// integer up to the sample maximum, which is conservative under the
/// continuous critical values.
inline double ks_statistic_geometric(std::vector<std::uint64_t> samples,
                                     double p) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    const std::uint64_t max = samples.back();
    double stat = 0.0;
    std::size_t idx = 0;
    for (std::uint64_t k = 1; k <= max; ++k) {
        while (idx < samples.size() && samples[idx] <= k)
            ++idx;
        const double empirical = static_cast<double>(idx) / n;
        const double model = 1.0 - std::pow(1.0 - p, static_cast<double>(k));
        stat = std::max(stat, std::abs(empirical - model));
    }
    return stat;
}

/// Two-sided KS critical value at the given significance level.
inline double ks_critical(double significance, std::size_t n) {
    return std::sqrt(std::log(2.0 / significance) / (2.0 * static_cast<double>(n)));
}

} // namespace teststats
