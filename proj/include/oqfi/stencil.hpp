// Copyright 2026 the oqfi authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <vector>

#include "oqfi/errors.hpp"
#include "oqfi/types.hpp"

namespace oqfi {

/// Finite-difference step control shared by every derivative-based
/// operation.  h <= 0 selects the default 1e-3 * max(1, |g|); one
/// Richardson level (h, h/2) is applied when enabled.
struct StencilConfig {
  double h = 0.0;
  bool richardson = true;
  int max_halvings = 24;

  double step(double g) const {
    return h > 0.0 ? h : 1e-3 * std::max(1.0, std::abs(g));
  }
};

/// Central-difference weights for the m-th derivative on the given
/// offsets (Fornberg's algorithm); the returned weights include the
/// grid spacing, i.e. f^(m)(0) ~= sum_i w_i f(x_i).
std::vector<double> fd_weights(int order, const std::vector<double>& x);

/// Mixed second derivative d^2 f / da db at (0,0) from the four-corner
/// stencil (+-h, +-h), with one Richardson level when enabled.
Complex mixed_second_derivative(
    const std::function<Complex(double, double)>& f, double h,
    bool richardson);

/// Adaptive m-th derivative of a scalar function at x = 0 on the
/// symmetric (2m+1)-point stencil: halves h until two successive
/// Richardson estimates agree to rel_tol (or the budget is exhausted),
/// falling back to the most converged pair.  Needed near a dynamical
/// phase transition, where higher derivatives grow with powers of the
/// correlation time and any fixed step is wrong.
double adaptive_derivative(const std::function<double(double)>& f, int order,
                           double h0, int max_halvings,
                           double rel_tol = 1e-6);

}  // namespace oqfi
