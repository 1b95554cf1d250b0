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
#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsa/anneal.hpp"
#include "qsa/errors.hpp"
#include "qsa/gibbs.hpp"
#include "qsa/instance.hpp"
#include "qsa/resources.hpp"
#include "qsa/statevector.hpp"
#include "qsa/tours.hpp"

namespace qsa::cli {

using Json = nlohmann::ordered_json;

// Exit codes, stable for CI: 0 success, 1 check failure, 2 usage/input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

using qsa::detail::format_sig;

inline double parse_alpha_token(const std::string &token) {
    if (token == "e")
        return kDefaultAlpha;
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &pos);
    } catch (const std::exception &) {
        throw InvalidArgument("alpha value '" + token + "' is not a number");
    }
    if (pos != token.size())
        throw InvalidArgument("alpha value '" + token + "' is not a number");
    if (!(value > 1.0))
        throw InvalidArgument("alpha must be > 1 (or the literal 'e')");
    return value;
}

inline std::vector<double> parse_grid(const std::string &text) {
    std::vector<double> grid;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string token =
            text.substr(start, comma == std::string::npos ? std::string::npos
                                                          : comma - start);
        if (token.empty())
            throw InvalidArgument("empty entry in alpha grid");
        grid.push_back(parse_alpha_token(token));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw InvalidArgument("alpha grid must be strictly increasing");
    return grid;
}

struct CommonOptions {
    std::string instance_path;
    int random_n = 0;
    std::string alpha_token = "e";
    bool alpha_given = false;
    std::uint64_t seed = 1;
    std::string format = "text";
    int threads = 0;

    int resolved_threads() const {
        if (threads > 0)
            return threads;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
};

inline void add_source_options(CLI::App *cmd, CommonOptions &opt) {
    auto *instance =
        cmd->add_option("--instance", opt.instance_path, "instance file path");
    auto *random = cmd->add_option("--random", opt.random_n,
                                   "generate a random instance with N cities");
    instance->excludes(random);
    random->excludes(instance);
}

inline void add_common_options(CLI::App *cmd, CommonOptions &opt) {
    cmd->add_option("--alpha", opt.alpha_token,
                    "bias base alpha (> 1, or the literal 'e')")
        ->each([&opt](const std::string &) { opt.alpha_given = true; });
    cmd->add_option("--seed", opt.seed, "RNG seed");
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "structured"}));
    cmd->add_option("--threads", opt.threads,
                    "worker bound for sampling and comparison runs "
                    "(default: all cores)");
}

inline TspInstance load_instance(const CommonOptions &opt) {
    std::optional<TspInstance> inst;
    if (!opt.instance_path.empty()) {
        std::ifstream in(opt.instance_path);
        if (!in)
            throw InvalidArgument("cannot open instance file '" +
                                  opt.instance_path + "'");
        inst = parse_instance(in);
    } else if (opt.random_n != 0) {
        inst = random_instance(opt.random_n, opt.seed);
    } else {
        throw InvalidArgument("exactly one of --instance or --random is required");
    }
    if (opt.alpha_given)
        inst = inst->with_alpha(parse_alpha_token(opt.alpha_token));
    return *inst;
}

inline Json to_json(const ResourceEstimate &est) {
    return Json{{"m_bits", est.m_bits},
                {"success_prob", est.success_prob},
                {"expected_repeats", est.expected_repeats},
                {"expected_repeats_to_optimum", est.expected_repeats_to_optimum},
                {"energy_scale", est.energy_scale},
                {"aa_repeats", est.aa_repeats}};
}

inline Json to_json(const CpReport &report) {
    return Json{{"n", report.n},         {"alpha", report.alpha},
                {"k", report.k},         {"lhs", report.lhs},
                {"rhs", report.rhs},     {"satisfied", report.satisfied}};
}

inline Json to_json(const DegeneracyReport &report) {
    return Json{{"min_distance_gap", report.min_distance_gap},
                {"distance_ties", report.distance_ties},
                {"min_tour_gap", report.min_tour_gap},
                {"distance_gap_flagged", report.distance_gap_flagged},
                {"tour_gap_flagged", report.tour_gap_flagged},
                {"distance_threshold", report.distance_threshold},
                {"tour_threshold", report.tour_threshold}};
}

inline Json to_json(const MethodSummary &summary) {
    Json j{{"method", summary.method},     {"runs", summary.runs},
           {"budget", summary.budget},     {"hits", summary.hits},
           {"hit_rate", summary.hit_rate}, {"censored", summary.censored}};
    j["mean_cost_to_hit"] =
        summary.mean_cost_to_hit ? Json(*summary.mean_cost_to_hit) : Json(nullptr);
    j["mean_best_distance"] = summary.mean_best_distance
                                  ? Json(*summary.mean_best_distance)
                                  : Json(nullptr);
    return j;
}

inline std::string resource_line(const ResourceEstimate &est) {
    return "resources: m_bits=" + std::to_string(est.m_bits) +
           " success_prob=" + format_sig(est.success_prob, 6) +
           " expected_repeats=" + format_sig(est.expected_repeats, 6) +
           " expected_repeats_to_optimum=" +
           format_sig(est.expected_repeats_to_optimum, 6) +
           " energy_scale=" + format_sig(est.energy_scale, 6) +
           " aa_repeats=" + std::to_string(est.aa_repeats);
}

// ---------------------------------------------------------------------------
// demo

struct DemoCheck {
    std::string name;
    double computed;
    double expected;
    double tolerance;
    bool pass;
};

/// Reference values for the four-city demo, rounded as printed in the demo
/// table (4 decimals for q/weights/probabilities, 2 for the solution rate).
struct DemoReference {
    static constexpr double kEdgeTol = 5e-5;
    static constexpr double kTableTol = 5e-4;
    static constexpr double kRateTol = 5e-3;

    static constexpr std::array<double, 6> q{0.4966, 0.6065, 0.3679,
                                             0.4493, 0.5488, 0.4066};
    static constexpr std::array<double, 6> weight{0.0334, 0.0672, 0.0550,
                                                  0.0672, 0.0550, 0.0334};
    static constexpr std::array<double, 6> distance{3.4, 2.7, 2.9,
                                                    2.7, 2.9, 3.4};
    static constexpr std::array<double, 6> probability{0.1073, 0.2159, 0.1767,
                                                       0.2159, 0.1767, 0.1073};
    static constexpr double z = 0.3112;
    static constexpr double solution = 0.43;
    static constexpr double unbiased = 0.33;
};

inline int run_demo(const CommonOptions &opt, std::ostream &out,
                    std::ostream &err) {
    TspInstance inst = demo_instance();
    const bool overridden =
        opt.alpha_given && parse_alpha_token(opt.alpha_token) != kDefaultAlpha;
    if (opt.alpha_given)
        inst = inst.with_alpha(parse_alpha_token(opt.alpha_token));

    const TourDistribution dist = gibbs_distribution(inst);
    const OptimalTours best = optimal_tours(inst);
    const double solution = solution_probability(dist, best.tours);
    const double unbiased = static_cast<double>(best.tours.size()) /
                            static_cast<double>(dist.entries.size());
    const ResourceEstimate estimate = estimate_resources(inst);

    std::vector<DemoCheck> checks;
    if (!overridden) {
        const auto add = [&](const std::string &name, double computed,
                             double expected, double tol) {
            checks.push_back(
                {name, computed, expected, tol,
                 std::abs(computed - expected) <= tol});
        };
        static constexpr std::array<std::pair<int, int>, 6> kEdges{
            {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}};
        for (std::size_t i = 0; i < kEdges.size(); ++i) {
            const auto [j, k] = kEdges[i];
            add("q(" + std::to_string(j) + "," + std::to_string(k) + ")",
                inst.bias(j, k), DemoReference::q[i], DemoReference::kEdgeTol);
        }
        for (std::size_t i = 0; i < dist.entries.size(); ++i) {
            const std::string tour = to_string(dist.entries[i].tour);
            add("Pq " + tour, dist.entries[i].weight, DemoReference::weight[i],
                DemoReference::kEdgeTol);
            add("D " + tour, tour_distance(inst, dist.entries[i].tour),
                DemoReference::distance[i], 1e-9);
            add("p " + tour, dist.entries[i].probability,
                DemoReference::probability[i], DemoReference::kTableTol);
        }
        add("Z", dist.z, DemoReference::z, DemoReference::kTableTol);
        add("P(solution)", solution, DemoReference::solution,
            DemoReference::kRateTol);
        add("P(unbiased)", unbiased, DemoReference::unbiased,
            DemoReference::kRateTol);
    }
    const bool all_passed =
        std::all_of(checks.begin(), checks.end(),
                    [](const DemoCheck &c) { return c.pass; });

    if (opt.format == "structured") {
        Json j{{"command", "demo"}, {"n", inst.n()}, {"alpha", inst.alpha()}};
        Json edges = Json::array();
        for (int a = 1; a <= inst.n(); ++a)
            for (int b = a + 1; b <= inst.n(); ++b)
                edges.push_back(Json{{"j", a},
                                     {"k", b},
                                     {"d", inst.distance(a, b)},
                                     {"q", inst.bias(a, b)}});
        j["edges"] = edges;
        Json tours = Json::array();
        for (const auto &entry : dist.entries)
            tours.push_back(Json{{"tour", to_string(entry.tour)},
                                 {"distance", tour_distance(inst, entry.tour)},
                                 {"weight", entry.weight},
                                 {"probability", entry.probability}});
        j["tours"] = tours;
        j["z"] = dist.z;
        j["solution_probability"] = solution;
        j["unbiased_probability"] = unbiased;
        j["resource_estimate"] = to_json(estimate);
        j["checks_skipped"] = overridden;
        Json checks_json = Json::array();
        for (const auto &c : checks)
            checks_json.push_back(Json{{"name", c.name},
                                       {"computed", c.computed},
                                       {"expected", c.expected},
                                       {"tolerance", c.tolerance},
                                       {"pass", c.pass}});
        j["checks"] = checks_json;
        j["all_passed"] = all_passed;
        out << j.dump(2) << "\n";
    } else {
        out << "four-city demo instance (alpha = "
            << format_sig(inst.alpha(), 12) << ")\n\nedges:\n";
        char buf[128];
        for (int a = 1; a <= inst.n(); ++a)
            for (int b = a + 1; b <= inst.n(); ++b) {
                std::snprintf(buf, sizeof(buf), "  d(%d,%d)=%.1f  q=%.4f\n", a,
                              b, inst.distance(a, b), inst.bias(a, b));
                out << buf;
            }
        out << "\ntours:\n";
        for (const auto &entry : dist.entries) {
            std::snprintf(buf, sizeof(buf),
                          "  %s  Πq=%.4f  D=%.1f  p=%.4f\n",
                          to_string(entry.tour).c_str(), entry.weight,
                          tour_distance(inst, entry.tour), entry.probability);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf),
                      "\nZ=%.4f\nP(solution)=%.2f  (unbiased: %.2f)\n\n",
                      dist.z, solution, unbiased);
        out << buf;
        out << resource_line(estimate) << "\n";
        if (overridden) {
            out << "\nreference checks skipped (alpha overridden)\n";
        } else {
            out << "\nchecks:\n";
            for (const auto &c : checks) {
                std::snprintf(buf, sizeof(buf), "  %s %-14s computed=%s expected=%s\n",
                              c.pass ? "PASS" : "FAIL", c.name.c_str(),
                              format_sig(c.computed, 6).c_str(),
                              format_sig(c.expected, 6).c_str());
                out << buf;
            }
            if (all_passed)
                out << "all " << checks.size() << " checks passed\n";
        }
    }

    if (!all_passed) {
        for (const auto &c : checks)
            if (!c.pass) {
                err << "error: demo check failed: " << c.name << " computed "
                    << format_sig(c.computed, 9) << " expected "
                    << format_sig(c.expected, 9) << " (tolerance "
                    << format_sig(c.tolerance, 3) << ")\n";
                return kExitCheckFailed;
            }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze

inline int run_analyze(const CommonOptions &opt, int k, std::ostream &out,
                       std::ostream & /*err*/) {
    const TspInstance inst = load_instance(opt);
    const TourDistribution dist = gibbs_distribution(inst);
    const ZBounds bounds = z_bounds(inst.n(), inst.alpha());
    const bool within = bounds.lower <= dist.z && dist.z <= bounds.upper;
    const ResourceEstimate estimate = estimate_resources(inst);
    const CpReport cp = cp_check(inst, k);
    const DegeneracyReport degeneracy = degeneracy_report(inst);

    std::vector<std::uint64_t> ranks(dist.entries.size());
    std::iota(ranks.begin(), ranks.end(), 0u);
    std::stable_sort(ranks.begin(), ranks.end(),
                     [&](std::uint64_t a, std::uint64_t b) {
                         return dist.entries[a].probability >
                                dist.entries[b].probability;
                     });
    const std::size_t top = std::min<std::size_t>(5, ranks.size());
    const double solution_prob = std::pow(inst.alpha(), -cp.lhs);

    if (opt.format == "structured") {
        Json j{{"command", "analyze"},
               {"n", inst.n()},
               {"alpha", inst.alpha()},
               {"tour_count", dist.entries.size()},
               {"z", dist.z}};
        j["z_bounds"] =
            Json{{"lower", bounds.lower}, {"upper", bounds.upper}, {"within", within}};
        Json tours = Json::array();
        for (std::size_t i = 0; i < top; ++i) {
            const auto &entry = dist.entries[ranks[i]];
            tours.push_back(Json{{"tour", to_string(entry.tour)},
                                 {"distance", tour_distance(inst, entry.tour)},
                                 {"probability", entry.probability}});
        }
        j["top_tours"] = tours;
        j["solution_probability"] = solution_prob;
        j["resource_estimate"] = to_json(estimate);
        j["cp_report"] = to_json(cp);
        j["degeneracy_report"] = to_json(degeneracy);
        out << j.dump(2) << "\n";
        return kExitOk;
    }

    out << "instance: n=" << inst.n() << " alpha=" << format_sig(inst.alpha(), 12)
        << " tours=" << dist.entries.size() << "\n";
    out << "top tours:\n";
    for (std::size_t i = 0; i < top; ++i) {
        const auto &entry = dist.entries[ranks[i]];
        out << "  " << to_string(entry.tour)
            << "  D=" << format_sig(tour_distance(inst, entry.tour), 6)
            << "  p=" << format_sig(entry.probability, 6) << "\n";
    }
    out << "Z = " << format_sig(dist.z, 12) << "\n";
    out << "Z within [(n-1)!/alpha^n, (n-1)!/alpha] = ["
        << format_sig(bounds.lower, 6) << ", " << format_sig(bounds.upper, 6)
        << "]: " << (within ? "yes" : "no") << "\n";
    out << resource_line(estimate) << "\n";
    out << "CP(k=" << k << "): satisfied: " << (cp.satisfied ? "yes" : "no")
        << "  P(optimal)=" << format_sig(solution_prob, 6)
        << " n^-k=" << format_sig(std::pow(inst.n(), -k), 6)
        << " lhs=" << format_sig(cp.lhs, 6) << " rhs=" << format_sig(cp.rhs, 6)
        << "\n";
    out << "degeneracy: min_distance_gap=" << format_sig(degeneracy.min_distance_gap, 6)
        << " ties=" << (degeneracy.distance_ties ? "yes" : "no")
        << " min_tour_gap=" << format_sig(degeneracy.min_tour_gap, 6)
        << " flags=[";
    std::string flags;
    if (degeneracy.distance_gap_flagged)
        flags += "distance-gap";
    if (degeneracy.tour_gap_flagged)
        flags += flags.empty() ? "tour-gap" : ",tour-gap";
    out << flags << "]\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sample

inline int run_sample(const CommonOptions &opt, const std::string &backend,
                      std::size_t shots, const std::string &log_path,
                      std::ostream &out, std::ostream &err) {
    if (shots == 0)
        throw InvalidArgument("--shots must be at least 1");
    const TspInstance inst = load_instance(opt);

    std::string resolved = backend;
    if (resolved == "auto")
        resolved = inst.n() <= QubitRegister::kDefaultMaxCities ? "dense" : "tour";

    std::vector<double> analytic;
    std::vector<Tour> samples;
    if (resolved == "dense") {
        if (inst.n() == QubitRegister::kHardMaxCities)
            err << "warning: dense backend at n=5 tracks a 2^30-dimensional "
                   "basis; expect a memory-heavy run\n";
        auto reg = QubitRegister::prepare_tour_superposition(
            inst.n(), QubitRegister::kHardMaxCities);
        reg.apply_bias_gates(inst);
        reg.project_valid();
        analytic = reg.tour_probabilities();
        samples = reg.measure(opt.seed, shots, opt.resolved_threads());
    } else {
        auto state = TourStateVector::prepare_tour_superposition(inst.n());
        state.apply_bias_gates(inst);
        state.project_valid();
        analytic = state.tour_probabilities();
        samples = state.measure(opt.seed, shots, opt.resolved_threads());
    }

    std::vector<std::uint64_t> counts(analytic.size(), 0);
    for (const Tour &t : samples)
        ++counts[tour_rank(t)];

    if (!log_path.empty()) {
        std::ofstream log(log_path);
        if (!log)
            throw InvalidArgument("cannot open log file '" + log_path + "'");
        for (std::size_t i = 0; i < samples.size(); ++i)
            log << "shot=" << i << " tour=" << to_string(samples[i])
                << " D=" << format_sig(tour_distance(inst, samples[i]), 12)
                << "\n";
    }

    double max_dev = 0.0;
    std::vector<double> empirical(analytic.size());
    for (std::size_t r = 0; r < analytic.size(); ++r) {
        empirical[r] =
            static_cast<double>(counts[r]) / static_cast<double>(shots);
        max_dev = std::max(max_dev, std::abs(empirical[r] - analytic[r]));
    }

    if (opt.format == "structured") {
        Json j{{"command", "sample"}, {"backend", resolved},
               {"n", inst.n()},       {"alpha", inst.alpha()},
               {"shots", shots},      {"seed", opt.seed}};
        Json tours = Json::array();
        std::uint64_t rank = 0;
        for_each_tour(inst.n(), [&](const Tour &t) {
            tours.push_back(Json{{"tour", to_string(t)},
                                 {"analytic", analytic[rank]},
                                 {"empirical", empirical[rank]},
                                 {"count", counts[rank]}});
            ++rank;
        });
        j["tours"] = tours;
        j["max_abs_deviation"] = max_dev;
        out << j.dump(2) << "\n";
        return kExitOk;
    }

    out << "backend: " << resolved << "  n=" << inst.n() << "  shots=" << shots
        << "  seed=" << opt.seed << "\n";
    char buf[128];
    out << "tour         analytic      empirical     |diff|\n";
    std::uint64_t rank = 0;
    for_each_tour(inst.n(), [&](const Tour &t) {
        std::snprintf(buf, sizeof(buf), "%-11s  %-12.6f  %-12.6f  %.6f\n",
                      to_string(t).c_str(), analytic[rank], empirical[rank],
                      std::abs(empirical[rank] - analytic[rank]));
        out << buf;
        ++rank;
    });
    out << "max |empirical - analytic| = " << format_sig(max_dev, 6) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

inline int run_sweep(const CommonOptions &opt, const std::string &grid_text,
                     int k, std::ostream &out, std::ostream & /*err*/) {
    const std::vector<double> grid = parse_grid(grid_text);
    const TspInstance inst = load_instance(opt);
    const OptimalTours best = optimal_tours(inst);
    const double gap = qsa::detail::min_positive_distance_gap(inst);

    struct Row {
        double alpha;
        double z;
        double p_optimal;
        double success_prob;
        double expected_repeats;
        int m_bits;
        bool cp_satisfied;
    };
    std::vector<Row> rows;
    rows.reserve(grid.size());
    for (const double alpha : grid) {
        const TspInstance scaled = inst.with_alpha(alpha);
        const TourDistribution dist = gibbs_distribution(scaled);
        Row row;
        row.alpha = alpha;
        row.z = dist.z;
        row.p_optimal = solution_probability(dist, best.tours);
        row.success_prob = dist.z / static_cast<double>(dist.entries.size());
        row.expected_repeats = 1.0 / row.success_prob;
        row.m_bits = gap > 0.0 ? precision_bits(alpha, 1.0, gap) : 0;
        row.cp_satisfied =
            row.p_optimal * std::pow(static_cast<double>(inst.n()), k) >= 1.0;
        rows.push_back(row);
    }

    if (opt.format == "structured") {
        Json j{{"command", "sweep"}, {"n", inst.n()}, {"k", k}};
        Json rows_json = Json::array();
        for (const Row &row : rows)
            rows_json.push_back(Json{{"alpha", row.alpha},
                                     {"z", row.z},
                                     {"p_optimal", row.p_optimal},
                                     {"success_prob", row.success_prob},
                                     {"expected_repeats", row.expected_repeats},
                                     {"m_bits", row.m_bits},
                                     {"cp_satisfied", row.cp_satisfied}});
        j["rows"] = rows_json;
        out << j.dump(2) << "\n";
        return kExitOk;
    }

    out << "alpha          Z              P(optimal)    success_prob   "
           "expected_repeats  m_bits  CP(k="
        << k << ")\n";
    char buf[192];
    for (const Row &row : rows) {
        std::snprintf(buf, sizeof(buf),
                      "%-13s  %-13s  %-12s  %-13s  %-16s  %-6d  %s\n",
                      format_sig(row.alpha, 6).c_str(),
                      format_sig(row.z, 6).c_str(),
                      format_sig(row.p_optimal, 6).c_str(),
                      format_sig(row.success_prob, 6).c_str(),
                      format_sig(row.expected_repeats, 6).c_str(), row.m_bits,
                      row.cp_satisfied ? "yes" : "no");
        out << buf;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// compare

inline int run_compare(const CommonOptions &opt, std::size_t trials,
                       std::size_t steps, std::size_t runs,
                       const std::string &schedule_name, double schedule_param,
                       const std::string &log_path, std::ostream &out,
                       std::ostream & /*err*/) {
    const TspInstance inst = load_instance(opt);
    MetropolisSchedule schedule = MetropolisSchedule::logarithmic(1.0);
    if (schedule_name == "logarithmic")
        schedule = MetropolisSchedule::logarithmic(schedule_param);
    else if (schedule_name == "geometric")
        schedule = MetropolisSchedule::geometric(schedule_param);
    else if (schedule_name == "constant")
        schedule = MetropolisSchedule::constant(schedule_param);
    else
        throw InvalidArgument("unknown schedule '" + schedule_name + "'");

    const ComparisonTable table = compare(inst, trials, steps, runs, opt.seed,
                                          schedule, opt.resolved_threads());

    if (!log_path.empty()) {
        std::ofstream log(log_path);
        if (!log)
            throw InvalidArgument("cannot open log file '" + log_path + "'");
        const OptimalTours best = optimal_tours(inst);
        for (std::size_t r = 0; r < runs && trials > 0; ++r) {
            AnnealOptions options;
            options.target_distance = best.distance;
            const AnnealRun run = run_quantum_annealing(
                inst, trials, rng::derive_seed(opt.seed, r), options);
            log << "# run " << r << " seed=" << run.seed << "\n"
                << format_run_log(run);
        }
    }

    if (opt.format == "structured") {
        Json j{{"command", "compare"},
               {"n", inst.n()},
               {"alpha", inst.alpha()},
               {"runs", runs},
               {"seed", opt.seed},
               {"optimal_distance", table.optimal_distance},
               {"theoretical_expected_repeats_to_optimum",
                table.theoretical_expected_repeats_to_optimum},
               {"quantum", to_json(table.quantum)},
               {"metropolis", to_json(table.metropolis)}};
        out << j.dump(2) << "\n";
        return kExitOk;
    }

    out << "comparison on n=" << inst.n()
        << " alpha=" << format_sig(inst.alpha(), 6) << " runs=" << runs
        << " seed=" << opt.seed << " schedule=" << schedule.name() << "("
        << format_sig(schedule.param, 6) << ")\n";
    out << format_comparison(table);
    return kExitOk;
}

} // namespace detail

/// Parses argv-style arguments (program name excluded) and executes one
/// subcommand, writing human or structured output to `out`. Fixed seed and
/// input yield byte-identical output.
inline int run(std::vector<std::string> args, std::ostream &out,
               std::ostream &err) {
    CLI::App app{"exact sampler, annealer, and resource analyzer for "
                 "bias-weighted tour measurement"};
    app.require_subcommand(1);

    detail::CommonOptions demo_opt;
    auto *demo_cmd =
        app.add_subcommand("demo", "run the embedded four-city example and "
                                   "check it against its reference values");
    demo_cmd->add_option("--alpha", demo_opt.alpha_token,
                         "bias base alpha (> 1, or the literal 'e')")
        ->each([&demo_opt](const std::string &) { demo_opt.alpha_given = true; });
    demo_cmd->add_option("--format", demo_opt.format, "output format")
        ->check(CLI::IsMember({"text", "structured"}));

    detail::CommonOptions analyze_opt;
    int analyze_k = 2;
    auto *analyze_cmd = app.add_subcommand(
        "analyze", "distribution, bounds, resource, CP, and degeneracy report");
    detail::add_source_options(analyze_cmd, analyze_opt);
    detail::add_common_options(analyze_cmd, analyze_opt);
    analyze_cmd->add_option("--k", analyze_k, "CP polynomial degree");

    detail::CommonOptions sample_opt;
    std::string sample_backend = "auto";
    std::size_t sample_shots = 100000;
    std::string sample_log;
    auto *sample_cmd = app.add_subcommand(
        "sample", "measure the post-selected state and compare frequencies "
                  "with the analytic distribution");
    detail::add_source_options(sample_cmd, sample_opt);
    detail::add_common_options(sample_cmd, sample_opt);
    sample_cmd->add_option("--backend", sample_backend, "simulation backend")
        ->check(CLI::IsMember({"dense", "tour", "auto"}));
    sample_cmd->add_option("--shots", sample_shots, "number of measurements");
    sample_cmd->add_option("--log", sample_log, "write a per-shot log file");

    detail::CommonOptions sweep_opt;
    std::string sweep_grid;
    int sweep_k = 2;
    auto *sweep_cmd = app.add_subcommand(
        "sweep", "evaluate Z, P(optimal), and resource columns over an "
                 "increasing alpha grid");
    detail::add_source_options(sweep_cmd, sweep_opt);
    detail::add_common_options(sweep_cmd, sweep_opt);
    sweep_cmd->add_option("--grid", sweep_grid, "comma-separated alphas, e.g. e,4,8")
        ->required();
    sweep_cmd->add_option("--k", sweep_k, "CP polynomial degree");

    detail::CommonOptions compare_opt;
    std::size_t compare_trials = 1000;
    std::size_t compare_steps = 100000;
    std::size_t compare_runs = 30;
    std::string compare_schedule = "logarithmic";
    double compare_schedule_param = 1.0;
    std::string compare_log;
    auto *compare_cmd = app.add_subcommand(
        "compare", "benchmark the quantum protocol against the Metropolis "
                   "baseline over seeded runs");
    detail::add_source_options(compare_cmd, compare_opt);
    detail::add_common_options(compare_cmd, compare_opt);
    compare_cmd->add_option("--trials", compare_trials,
                            "quantum trial budget per run");
    compare_cmd->add_option("--steps", compare_steps,
                            "metropolis step budget per run");
    compare_cmd->add_option("--runs", compare_runs, "independent seeded runs");
    compare_cmd->add_option("--schedule", compare_schedule, "cooling schedule")
        ->check(CLI::IsMember({"logarithmic", "geometric", "constant"}));
    compare_cmd->add_option("--schedule-param", compare_schedule_param,
                            "schedule parameter (c, r, or beta)");
    compare_cmd->add_option("--log", compare_log,
                            "write quantum run logs to a file");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (demo_cmd->parsed())
            return detail::run_demo(demo_opt, out, err);
        if (analyze_cmd->parsed())
            return detail::run_analyze(analyze_opt, analyze_k, out, err);
        if (sample_cmd->parsed())
            return detail::run_sample(sample_opt, sample_backend, sample_shots,
                                      sample_log, out, err);
        if (sweep_cmd->parsed())
            return detail::run_sweep(sweep_opt, sweep_grid, sweep_k, out, err);
        if (compare_cmd->parsed())
            return detail::run_compare(compare_opt, compare_trials,
                                       compare_steps, compare_runs,
                                       compare_schedule, compare_schedule_param,
                                       compare_log, out, err);
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    err << "error: no subcommand\n";
    return kExitUsage;
}

} // namespace qsa::cli
