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
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qsa/errors.hpp"
#include "qsa/gates.hpp"
#include "qsa/instance.hpp"
#include "qsa/rng.hpp"
#include "qsa/tours.hpp"

namespace qsa {

using Amplitude = std::complex<double>;

/// Result of post-selecting on the valid-tour subspace. The projected state
/// is renormalized; the success probability is the pre-projection norm^2 of
/// the kept subspace.
struct ProjectionResult {
    double success_probability;
    double discarded_norm_sq;
};

inline constexpr double kUnderflowFloor = 1e-300;

namespace detail {

/// Inverse-CDF sampling over a probability table sorted in descending order.
/// Shot i draws its uniform from the counter-based stream at counter i, so
/// any partition of the shot range across threads yields identical samples.
inline std::vector<std::uint32_t> sample_indices(std::span<const double> probs,
                                                 std::uint64_t seed,
                                                 std::size_t shots, int threads) {
    if (probs.empty())
        throw InvalidArgument("cannot sample from an empty probability table");
    std::vector<std::uint32_t> order(probs.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                         return probs[a] > probs[b];
                     });
    std::vector<double> cdf(order.size());
    double running = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        running += probs[order[i]];
        cdf[i] = running;
    }

    const rng::Stream stream(seed, rng::kMeasureStream);
    std::vector<std::uint32_t> samples(shots);
    auto draw_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double u = stream.unit_at(i) * running;
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            std::size_t pick = static_cast<std::size_t>(it - cdf.begin());
            if (pick >= order.size())
                pick = order.size() - 1;
            samples[i] = order[pick];
        }
    };

    if (threads <= 1 || shots < 4096) {
        draw_range(0, shots);
    } else {
        const std::size_t workers =
            std::min<std::size_t>(static_cast<std::size_t>(threads), shots);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (shots + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(shots, lo + chunk);
            if (lo < hi)
                pool.emplace_back(draw_range, lo, hi);
        }
        for (auto &t : pool)
            t.join();
    }
    return samples;
}

} // namespace detail

/**
 * Gate-level sparse statevector over the n-blocks-of-n-bits tour encoding
 * plus one ancilla qubit per leg.
 *
 * Marker qubit (block j, position p) is 0 exactly when the j-th visited city
 * is p; each valid basis state therefore has exactly n marker zeros, one per
 * block. Leg ancillas start in |0> and absorb the bias rotations: the branch
 * of tour s with all ancillas still |0> carries amplitude
 * sqrt(prod q)/sqrt((n-1)!) after apply_bias_gates.
 *
 * Only reachable basis states are stored; the full 2^(n^2+n) vector is never
 * materialized.
 */
class QubitRegister {
  public:
    static constexpr int kDefaultMaxCities = 4;
    static constexpr int kHardMaxCities = 5;

    /// Equal superposition over all (n-1)! valid tour encodings, ancillas |0>.
    /// The default cap of 4 cities (2^20 basis dimension) can be raised to 5
    /// (2^30); callers opting in should expect the memory cost.
    static QubitRegister prepare_tour_superposition(int n,
                                                    int max_cities = kDefaultMaxCities) {
        const int cap = std::min(max_cities, kHardMaxCities);
        if (n < kMinCities)
            throw InvalidSize("dense backend needs at least " +
                              std::to_string(kMinCities) + " cities");
        if (n > cap)
            throw TooLarge("dense backend caps at " + std::to_string(cap) +
                           " cities, got " + std::to_string(n));
        QubitRegister reg(n);
        const double amp = 1.0 / std::sqrt(static_cast<double>(tour_count(n)));
        for_each_tour(n, [&](const Tour &t) {
            reg.amps_.emplace(reg.encode_tour(t), Amplitude(amp, 0.0));
        });
        return reg;
    }

    int n() const noexcept { return n_; }
    int qubit_count() const noexcept { return n_ * n_ + n_; }

    /// Bit index of the marker for block `block`, position `position` (1-based).
    int marker_qubit(int block, int position) const {
        check_block(block);
        check_block(position);
        return (block - 1) * n_ + (position - 1);
    }

    /// Bit index of the ancilla that absorbs the rotation for leg `leg`.
    int leg_ancilla(int leg) const {
        check_block(leg);
        return n_ * n_ + (leg - 1);
    }

    /// Basis key of a tour: all marker bits 1 except one zero per block at
    /// the visited position; ancillas 0.
    std::uint64_t encode_tour(const Tour &tour) const {
        validate_tour(tour, n_);
        std::uint64_t key = (std::uint64_t{1} << (n_ * n_)) - 1;
        for (int j = 1; j <= n_; ++j)
            key &= ~(std::uint64_t{1} << marker_qubit(j, tour.order[j - 1]));
        return key;
    }

    /// Inverts encode_tour; throws InternalError on a key outside the valid
    /// subspace (stray ancilla or a block without exactly one zero).
    Tour decode_tour(std::uint64_t key) const {
        if (key >> (n_ * n_))
            throw InternalError("basis state has a nonzero leg ancilla");
        Tour tour;
        tour.order.reserve(n_);
        for (int j = 1; j <= n_; ++j) {
            int place = 0;
            for (int p = 1; p <= n_; ++p) {
                if (!((key >> marker_qubit(j, p)) & 1)) {
                    if (place != 0)
                        throw InternalError("block " + std::to_string(j) +
                                            " has more than one marker zero");
                    place = p;
                }
            }
            if (place == 0)
                throw InternalError("block " + std::to_string(j) +
                                    " has no marker zero");
            tour.order.push_back(place);
        }
        validate_tour(tour, n_);
        return tour;
    }

    /**
     * Applies a single-qubit gate to `target`, restricted to basis states
     * whose control qubits carry the required bit values. Controls must not
     * include the target.
     */
    void apply_controlled_gate(const GateMatrix &m, int target,
                               std::span<const std::pair<int, int>> controls) {
        check_qubit(target);
        for (const auto &[qubit, want] : controls) {
            check_qubit(qubit);
            if (qubit == target)
                throw InvalidArgument("control qubit equals target");
            if (want != 0 && want != 1)
                throw InvalidArgument("control value must be 0 or 1");
        }

        const std::uint64_t target_bit = std::uint64_t{1} << target;
        std::vector<std::uint64_t> bases;
        for (const auto &[key, amp] : amps_) {
            bool active = true;
            for (const auto &[qubit, want] : controls)
                if (static_cast<int>((key >> qubit) & 1) != want) {
                    active = false;
                    break;
                }
            if (active)
                bases.push_back(key & ~target_bit);
        }
        std::sort(bases.begin(), bases.end());
        bases.erase(std::unique(bases.begin(), bases.end()), bases.end());

        for (const std::uint64_t base : bases) {
            const Amplitude a0 = amplitude(base);
            const Amplitude a1 = amplitude(base | target_bit);
            store(base, m[0][0] * a0 + m[0][1] * a1);
            store(base | target_bit, m[1][0] * a0 + m[1][1] * a1);
        }
    }

    /**
     * Applies the bias rotation of every leg: for leg j and each ordered
     * city pair (a, b), rotate ancilla j by U(q_ab) controlled on marker
     * (j, a) = 0 and marker (j+1, b) = 0, blocks wrapping so leg n weighs
     * the closing edge back to city 1. Exactly one control pair fires per
     * leg on each tour branch.
     */
    void apply_bias_gates(const TspInstance &inst) {
        if (inst.n() != n_)
            throw InvalidArgument("instance has " + std::to_string(inst.n()) +
                                  " cities but the register encodes " +
                                  std::to_string(n_));
        for (int leg = 1; leg <= n_; ++leg) {
            const int next_block = leg % n_ + 1;
            for (int a = 1; a <= n_; ++a) {
                for (int b = 1; b <= n_; ++b) {
                    if (a == b)
                        continue;
                    const auto gate = RotationGate::from_bias(inst.bias(a, b));
                    const std::array<std::pair<int, int>, 2> controls{
                        {{marker_qubit(leg, a), 0},
                         {marker_qubit(next_block, b), 0}}};
                    apply_controlled_gate(gate.matrix, leg_ancilla(leg),
                                          controls);
                }
            }
        }
    }

    /// Post-selects on the valid subspace (exactly one marker zero per block,
    /// all ancillas zero), renormalizes, and reports the branch accounting.
    ProjectionResult project_valid() {
        double kept = 0.0;
        double discarded = 0.0;
        for (auto it = amps_.begin(); it != amps_.end();) {
            const double p = std::norm(it->second);
            if (is_valid_key(it->first)) {
                kept += p;
                ++it;
            } else {
                discarded += p;
                it = amps_.erase(it);
            }
        }
        if (kept < kUnderflowFloor)
            throw NumericalUnderflow("post-selection success probability "
                                     "underflowed");
        const double scale = 1.0 / std::sqrt(kept);
        for (auto &[key, amp] : amps_)
            amp *= scale;
        return {kept, discarded};
    }

    /// Draws `shots` i.i.d. samples from |amp|^2 and decodes them to tours.
    /// Deterministic per seed and independent of the thread count.
    std::vector<Tour> measure(std::uint64_t seed, std::size_t shots,
                              int threads = 1) const {
        std::vector<std::uint64_t> keys;
        std::vector<double> probs;
        keys.reserve(amps_.size());
        probs.reserve(amps_.size());
        for (const auto &[key, amp] : amps_) {
            keys.push_back(key);
            probs.push_back(std::norm(amp));
        }
        const auto picks = detail::sample_indices(probs, seed, shots, threads);
        std::vector<Tour> tours;
        tours.reserve(shots);
        for (const auto pick : picks)
            tours.push_back(decode_tour(keys[pick]));
        return tours;
    }

    Amplitude amplitude(std::uint64_t key) const {
        const auto it = amps_.find(key);
        return it == amps_.end() ? Amplitude{} : it->second;
    }

    double norm_squared() const {
        double total = 0.0;
        for (const auto &[key, amp] : amps_)
            total += std::norm(amp);
        return total;
    }

    /// Probability per tour rank carried by valid basis states.
    std::vector<double> tour_probabilities() const {
        std::vector<double> probs(tour_count(n_), 0.0);
        for (const auto &[key, amp] : amps_)
            if (is_valid_key(key))
                probs[tour_rank(decode_tour(key))] += std::norm(amp);
        return probs;
    }

    std::size_t state_count() const noexcept { return amps_.size(); }

    /// Debug dump: `<bits> <re> <im>` per nonzero basis state, marker bits
    /// grouped by block with ancillas last.
    std::string dump() const {
        std::string out;
        for (const auto &[key, amp] : amps_) {
            for (int q = 0; q < qubit_count(); ++q)
                out += ((key >> q) & 1) ? '1' : '0';
            out += ' ';
            out += detail::format_sig(amp.real());
            out += ' ';
            out += detail::format_sig(amp.imag());
            out += '\n';
        }
        return out;
    }

  private:
    explicit QubitRegister(int n) : n_(n) {}

    void check_block(int index) const {
        if (index < 1 || index > n_)
            throw InvalidArgument("index " + std::to_string(index) +
                                  " out of range [1, " + std::to_string(n_) + "]");
    }

    void check_qubit(int qubit) const {
        if (qubit < 0 || qubit >= qubit_count())
            throw InvalidArgument("qubit " + std::to_string(qubit) +
                                  " out of range");
    }

    bool is_valid_key(std::uint64_t key) const {
        if (key >> (n_ * n_))
            return false;
        const std::uint64_t block_mask = (std::uint64_t{1} << n_) - 1;
        for (int j = 0; j < n_; ++j) {
            const std::uint64_t block = (key >> (j * n_)) & block_mask;
            if (std::popcount(block_mask & ~block) != 1)
                return false;
        }
        return true;
    }

    void store(std::uint64_t key, Amplitude amp) {
        if (amp == Amplitude{})
            amps_.erase(key);
        else
            amps_[key] = amp;
    }

    int n_;
    std::map<std::uint64_t, Amplitude> amps_;
};

/**
 * Exact reduced-basis backend: one amplitude per fixed-start tour. Biasing
 * multiplies amp(s) by sqrt(prod q_s) directly, which matches the dense
 * register's valid branch amplitude state-for-state.
 */
class TourStateVector {
  public:
    static TourStateVector prepare_tour_superposition(int n) {
        // tour_count enforces the enumeration cap.
        const std::uint64_t count = tour_count(n);
        TourStateVector state(n);
        state.amps_.assign(count, Amplitude(1.0 / std::sqrt(static_cast<double>(count)), 0.0));
        return state;
    }

    int n() const noexcept { return n_; }

    std::span<const Amplitude> amplitudes() const noexcept { return amps_; }

    void apply_bias_gates(const TspInstance &inst) {
        if (inst.n() != n_)
            throw InvalidArgument("instance has " + std::to_string(inst.n()) +
                                  " cities but the state encodes " +
                                  std::to_string(n_));
        const double half_beta = 0.5 * inst.beta();
        std::uint64_t rank = 0;
        for_each_tour(n_, [&](const Tour &t) {
            amps_[rank++] *= std::exp(-half_beta * tour_distance(inst, t));
        });
    }

    /// The tour basis is the valid subspace, so projection reduces to
    /// renormalization; the lost mass is the bias rotation's discarded branch.
    ProjectionResult project_valid() {
        const double kept = norm_squared();
        if (kept < kUnderflowFloor)
            throw NumericalUnderflow("post-selection success probability "
                                     "underflowed");
        const double scale = 1.0 / std::sqrt(kept);
        for (auto &amp : amps_)
            amp *= scale;
        return {kept, std::max(0.0, 1.0 - kept)};
    }

    std::vector<Tour> measure(std::uint64_t seed, std::size_t shots,
                              int threads = 1) const {
        const auto probs = tour_probabilities();
        const auto picks = detail::sample_indices(probs, seed, shots, threads);
        std::vector<Tour> tours;
        tours.reserve(shots);
        for (const auto pick : picks)
            tours.push_back(tour_from_rank(n_, pick));
        return tours;
    }

    std::vector<double> tour_probabilities() const {
        std::vector<double> probs(amps_.size());
        for (std::size_t i = 0; i < amps_.size(); ++i)
            probs[i] = std::norm(amps_[i]);
        return probs;
    }

    double norm_squared() const {
        double total = 0.0;
        for (const auto &amp : amps_)
            total += std::norm(amp);
        return total;
    }

  private:
    explicit TourStateVector(int n) : n_(n) {}

    int n_;
    std::vector<Amplitude> amps_;
};

} // namespace qsa
