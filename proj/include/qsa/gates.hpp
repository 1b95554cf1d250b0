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

#include <array>
#include <cmath>

#include "qsa/errors.hpp"

namespace qsa {

using GateMatrix = std::array<std::array<double, 2>, 2>;

/**
 * Real orthogonal rotation parameterized by a bias q in (0, 1]:
 *
 *   U(q) = [  sqrt(q)    sqrt(1-q) ]
 *          [ -sqrt(1-q)  sqrt(q)   ]
 *
 * Measuring |0> after applying U(q) to |0> succeeds with probability q and
 * to |1> with probability 1-q. theta = arccos(sqrt(q)) is the rotation angle.
 */
struct RotationGate {
    double q;
    double theta;
    GateMatrix matrix;

    static RotationGate from_bias(double q) {
        if (!(q > 0.0) || q > 1.0)
            throw InvalidArgument("gate bias must lie in (0, 1]");
        const double c = std::sqrt(q);
        const double s = std::sqrt(1.0 - q);
        return {q, std::acos(c), {{{c, s}, {-s, c}}}};
    }

    /// The transpose, which is also the inverse.
    GateMatrix transposed() const {
        return {{{matrix[0][0], matrix[1][0]}, {matrix[0][1], matrix[1][1]}}};
    }
};

} // namespace qsa
