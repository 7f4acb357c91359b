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

#include <vector>

#include "oqfi/lindblad.hpp"

namespace oqfi {

/// Discretized system+output step: K_0 = e^{-i dt H} sqrt(1 - dt sum_j
/// L_j^dag L_j), K_{j>0} = e^{-i dt H} sqrt(dt) L_j.  The set is exactly
/// trace preserving; the residual of sum K^dag K - I is reported.
struct KrausSet {
  double delta_t = 0.0;
  std::vector<CMatrix> operators;  // K_0 .. K_k
  double completeness_defect = 0.0;
};

/// Throws PreconditionError naming the maximum admissible delta_t when
/// dt * lambda_max(sum L^dag L) >= 1 (square root argument not PSD).
KrausSet kraus_ops(const QModel& model, double g, double delta_t);

/// Brute-force fidelity <Psi_{g1}(t) | Psi_{g2}(t)> of the discretized
/// system+output state by explicit enumeration of all (k+1)^n emission
/// records, cross-checked against the one-step two-sided transfer map
/// (the paths must agree within 1e-12).  Budget: (k+1)^n <= 2^20.
///
/// Note the ordering: this is the conjugate of the deformed-generator
/// fidelity(g1, g2, ...), i.e. it converges to fidelity(g2, g1, ...) as
/// delta_t -> 0.
struct EnumeratedFidelity {
  Complex enumeration;
  Complex transfer;
  int n_steps = 0;
  double delta_t = 0.0;
};
EnumeratedFidelity enumerate_fidelity(const QModel& model, double g1,
                                      double g2, double t, int n_steps,
                                      const CVector& chi);

}  // namespace oqfi
