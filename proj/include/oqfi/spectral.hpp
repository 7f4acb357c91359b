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

#include "oqfi/lindblad.hpp"
#include "oqfi/linalg.hpp"

namespace oqfi {

/// Slow/fast timescales of a Liouvillian spectrum.  tau and gap_ratio
/// are +infinity at an exact DPT (Re lambda_2 within group_tol of 0).
struct Timescales {
  Complex lambda2;
  Complex lambda3;
  double tau = 0.0;        // (-Re lambda_2)^-1
  double tau_prime = 0.0;  // (-Re lambda_3)^-1
  double gap_ratio = 0.0;  // Re lambda_3 / Re lambda_2
};

Timescales timescales(const SpectralDecomp& decomp);

/// Projection P = |rho_1><l_1| + |rho_2><l_2| onto the two slowest
/// eigenvectors, as a d^2 x d^2 matrix.  Requires gap_ratio > 10 so the
/// intermediate time regime tau' << t << tau exists.
CMatrix projector_P(const SpectralDecomp& decomp);

/// Metastable-phase construction from the second left eigenvector l_2.
struct PhaseSplit {
  CMatrix projector_A;  // d x d orthogonal projector, active subspace
  CMatrix projector_I;  // inactive subspace
  CVector chi_A;        // extreme eigenvectors of l_2
  CVector chi_I;
  double mu_A = 0.0;    // emission rates on the designated channel
  double mu_I = 0.0;    // (labels fixed so mu_A >= mu_I)
  double p_A = 0.0;     // overlap of the initial state with each subspace
  double p_I = 0.0;
  double cluster_tol = 0.0;  // eigenvalue clustering width actually used
};

/// Splits the Hilbert space into active/inactive metastable subspaces by
/// diagonalizing l_2 (phase-aligned to Hermitian), clustering its
/// eigenvalues within 10% of the spread around the extremes, and
/// measuring the channel emission rate from each extreme eigenvector by
/// evolving it for 40 tau' and averaging over the second half of the
/// window.  Requires lambda_2 real and l_2 Hermitian within
/// 1e-9 * ||L||_1.  channel is 1-based.
PhaseSplit metastable_split(const SpectralDecomp& decomp, const CVector& chi,
                            int channel, const QModel& model, double g);

}  // namespace oqfi
