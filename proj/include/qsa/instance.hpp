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
#include <cstdint>
#include <cstdio>
#include <istream>
#include <iterator>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qsa/errors.hpp"
#include "qsa/rng.hpp"

namespace qsa {

using RawMatrix = std::vector<std::vector<double>>;

inline constexpr double kDefaultAlpha = std::numbers::e;
inline constexpr int kMinCities = 3;
inline constexpr double kSymmetryTolerance = 1e-12;

namespace detail {

/// Formats a double with `digits` significant digits (shortest %g form).
inline std::string format_sig(double value, int digits = 12) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

inline void check_square_symmetric(const RawMatrix &raw) {
    const std::size_t n = raw.size();
    for (const auto &row : raw) {
        if (row.size() != n)
            throw InvalidArgument("distance matrix is not square");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(raw[j][j]) > kSymmetryTolerance)
            throw InvalidArgument("distance matrix diagonal must be zero");
        for (std::size_t k = j + 1; k < n; ++k) {
            if (std::abs(raw[j][k] - raw[k][j]) > kSymmetryTolerance)
                throw InvalidArgument("distance matrix is asymmetric");
        }
    }
}

inline double max_off_diagonal(const RawMatrix &raw) {
    double max = 0.0;
    for (std::size_t j = 0; j < raw.size(); ++j)
        for (std::size_t k = 0; k < raw.size(); ++k) {
            if (j == k)
                continue;
            if (!(raw[j][k] > 0.0))
                throw DegenerateInstance(
                    "off-diagonal distances must be strictly positive");
            max = std::max(max, raw[j][k]);
        }
    return max;
}

} // namespace detail

/// Rescales a symmetric, zero-diagonal, strictly positive distance matrix so
/// its largest off-diagonal entry is exactly 1. Idempotent.
inline RawMatrix normalize(const RawMatrix &raw) {
    if (raw.empty())
        throw InvalidArgument("empty distance matrix");
    detail::check_square_symmetric(raw);
    const double max = detail::max_off_diagonal(raw);
    RawMatrix out(raw.size(), std::vector<double>(raw.size(), 0.0));
    for (std::size_t j = 0; j < raw.size(); ++j)
        for (std::size_t k = 0; k < raw.size(); ++k)
            out[j][k] = (j == k) ? 0.0 : raw[j][k] / max;
    return out;
}

/**
 * A symmetric TSP instance in normalized form.
 *
 * Distances d_jk are dimensionless, lie in (0, 1], and the largest
 * off-diagonal entry is exactly 1. The bias base alpha > 1 turns distances
 * into edge biases q_jk = alpha^(-d_jk); beta = ln(alpha) is the derived
 * inverse temperature. Immutable after construction.
 */
class TspInstance {
  public:
    static TspInstance from_distances(const RawMatrix &raw,
                                      double alpha = kDefaultAlpha) {
        if (raw.size() < static_cast<std::size_t>(kMinCities))
            throw InvalidSize("instance needs at least " +
                              std::to_string(kMinCities) + " cities, got " +
                              std::to_string(raw.size()));
        RawMatrix norm = normalize(raw);
        const int n = static_cast<int>(norm.size());
        std::vector<double> flat(static_cast<std::size_t>(n) * n, 0.0);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                flat[static_cast<std::size_t>(j) * n + k] = norm[j][k];
        return TspInstance(n, std::move(flat), alpha);
    }

    int n() const noexcept { return n_; }
    double alpha() const noexcept { return alpha_; }

    /// Inverse temperature beta = ln(alpha); always derived, never stored.
    double beta() const noexcept { return std::log(alpha_); }

    /// Normalized distance between cities j and k (1-based).
    double distance(int j, int k) const {
        check_edge(j, k);
        return flat_[index(j, k)];
    }

    /// Edge bias q_jk = alpha^(-d_jk), guaranteed in [1/alpha, 1).
    double bias(int j, int k) const {
        return std::exp(-beta() * distance(j, k));
    }

    /// Same distances under a different bias base.
    TspInstance with_alpha(double alpha) const {
        return TspInstance(n_, flat_, alpha);
    }

    RawMatrix distances() const {
        RawMatrix out(n_, std::vector<double>(n_, 0.0));
        for (int j = 1; j <= n_; ++j)
            for (int k = 1; k <= n_; ++k)
                out[j - 1][k - 1] = flat_[index(j, k)];
        return out;
    }

    double min_off_diagonal() const {
        double min = std::numeric_limits<double>::infinity();
        for (int j = 1; j <= n_; ++j)
            for (int k = j + 1; k <= n_; ++k)
                min = std::min(min, distance(j, k));
        return min;
    }

  private:
    TspInstance(int n, std::vector<double> flat, double alpha)
        : n_(n), flat_(std::move(flat)), alpha_(alpha) {
        if (!(alpha_ > 1.0))
            throw InvalidArgument("alpha must be > 1, got " +
                                  detail::format_sig(alpha_));
    }

    std::size_t index(int j, int k) const noexcept {
        return static_cast<std::size_t>(j - 1) * n_ + (k - 1);
    }

    void check_edge(int j, int k) const {
        if (j < 1 || j > n_ || k < 1 || k > n_)
            throw InvalidEdge("city index out of range [1, " +
                              std::to_string(n_) + "]");
        if (j == k)
            throw InvalidEdge("self edge (" + std::to_string(j) + ", " +
                              std::to_string(k) + ")");
    }

    int n_;
    std::vector<double> flat_;
    double alpha_;
};

/**
 * Parses the line-oriented instance format:
 *
 *   tsp <n>
 *   alpha <value|e>        (optional, default e)
 *   <n rows of n whitespace-separated distances>
 *
 * `#` starts a comment. The matrix is validated and normalized, so parsing
 * followed by normalization is idempotent. Errors carry the offending line.
 */
inline TspInstance parse_instance(std::istream &in) {
    std::string line;
    std::size_t lineno = 0;

    auto next_tokens = [&](std::vector<std::string> &tokens) -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            std::istringstream ls(line);
            tokens.assign(std::istream_iterator<std::string>(ls),
                          std::istream_iterator<std::string>());
            if (!tokens.empty())
                return true;
        }
        ++lineno;
        return false;
    };

    auto parse_double = [&](const std::string &tok) -> double {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception &) {
            throw ParseError(lineno, "expected a number, got '" + tok + "'");
        }
        if (pos != tok.size())
            throw ParseError(lineno, "trailing characters in number '" + tok + "'");
        return v;
    };

    std::vector<std::string> tokens;
    if (!next_tokens(tokens))
        throw ParseError(lineno, "empty instance file");
    if (tokens.size() != 2 || tokens[0] != "tsp")
        throw ParseError(lineno, "expected header 'tsp <n>'");
    int n = 0;
    try {
        n = std::stoi(tokens[1]);
    } catch (const std::exception &) {
        throw ParseError(lineno, "city count '" + tokens[1] + "' is not an integer");
    }
    if (n < kMinCities)
        throw ParseError(lineno, "city count must be >= " +
                                     std::to_string(kMinCities) + ", got " +
                                     std::to_string(n));

    if (!next_tokens(tokens))
        throw ParseError(lineno, "missing distance rows");

    double alpha = kDefaultAlpha;
    std::size_t alpha_line = 0;
    if (tokens[0] == "alpha") {
        if (tokens.size() != 2)
            throw ParseError(lineno, "expected 'alpha <value>'");
        alpha_line = lineno;
        alpha = (tokens[1] == "e") ? kDefaultAlpha : parse_double(tokens[1]);
        if (!next_tokens(tokens))
            throw ParseError(lineno, "missing distance rows");
    }

    RawMatrix raw;
    std::vector<std::size_t> row_lines;
    for (int row = 0; row < n; ++row) {
        if (row > 0 && !next_tokens(tokens))
            throw ParseError(lineno, "expected " + std::to_string(n) +
                                         " matrix rows, got " + std::to_string(row));
        if (tokens.size() != static_cast<std::size_t>(n))
            throw ParseError(lineno, "expected " + std::to_string(n) +
                                         " entries per row, got " +
                                         std::to_string(tokens.size()));
        std::vector<double> values;
        values.reserve(n);
        for (const auto &tok : tokens)
            values.push_back(parse_double(tok));
        raw.push_back(std::move(values));
        row_lines.push_back(lineno);
    }

    // Re-run the matrix validations here so the report carries a line number.
    for (int j = 0; j < n; ++j) {
        if (std::abs(raw[j][j]) > kSymmetryTolerance)
            throw ParseError(row_lines[j], "diagonal entry must be zero");
        for (int k = 0; k < n; ++k) {
            if (j != k && !(raw[j][k] > 0.0))
                throw ParseError(row_lines[j],
                                 "off-diagonal distance must be positive");
            if (k > j && std::abs(raw[j][k] - raw[k][j]) > kSymmetryTolerance)
                throw ParseError(row_lines[k], "matrix is asymmetric at (" +
                                                   std::to_string(j + 1) + ", " +
                                                   std::to_string(k + 1) + ")");
        }
    }
    if (!(alpha > 1.0))
        throw ParseError(alpha_line ? alpha_line : 1, "alpha must be > 1");

    return TspInstance::from_distances(raw, alpha);
}

inline TspInstance parse_instance(const std::string &text) {
    std::istringstream in(text);
    return parse_instance(in);
}

/// Writes the instance format with 12 significant digits per distance;
/// parse_instance round-trips the result to within 1e-12.
inline std::string serialize(const TspInstance &inst) {
    std::ostringstream out;
    out << "tsp " << inst.n() << "\n";
    if (inst.alpha() == kDefaultAlpha)
        out << "alpha e\n";
    else
        out << "alpha " << detail::format_sig(inst.alpha()) << "\n";
    for (int j = 1; j <= inst.n(); ++j) {
        for (int k = 1; k <= inst.n(); ++k) {
            if (k > 1)
                out << " ";
            out << (j == k ? "0" : detail::format_sig(inst.distance(j, k)));
        }
        out << "\n";
    }
    return out.str();
}

/// Random symmetric instance: i.i.d. uniform(0.05, 1) off-diagonal entries,
/// then normalized. Deterministic per seed.
inline TspInstance random_instance(int n, std::uint64_t seed,
                                   double alpha = kDefaultAlpha) {
    if (n < kMinCities)
        throw InvalidSize("instance needs at least " +
                          std::to_string(kMinCities) + " cities, got " +
                          std::to_string(n));
    rng::Stream stream(seed, rng::kInstanceStream);
    RawMatrix raw(n, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            raw[j][k] = raw[k][j] = stream.next_uniform(0.05, 1.0);
    return TspInstance::from_distances(raw, alpha);
}

/// The embedded four-city demo instance (alpha = e) driven by `qsa demo`.
inline TspInstance demo_instance() {
    return TspInstance::from_distances({{0.0, 0.7, 0.5, 1.0},
                                        {0.7, 0.0, 0.8, 0.6},
                                        {0.5, 0.8, 0.0, 0.9},
                                        {1.0, 0.6, 0.9, 0.0}});
}

} // namespace qsa
