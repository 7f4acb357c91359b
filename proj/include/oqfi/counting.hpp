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
#include "oqfi/stencil.hpp"

namespace oqfi {

/// Finite-time counting cumulant generating function
/// log Tr{ e^{t L(s)} |chi><chi| }, principal branch.  The counting
/// channel is the model's phase channel (channel 1 when unset).
Complex cgf(const QModel& model, double g, double s, double t,
            const CVector& chi);

/// Asymptotic dynamical free energy theta(s): the largest-real-part
/// eigenvalue of the tilted generator.  Flagged when the imaginary part
/// exceeds 1e-10 * max(1, spectral radius).
struct ThetaValue {
  double value = 0.0;
  double im_residue = 0.0;
  bool flagged = false;
};
ThetaValue theta_asymptotic(const QModel& model, double g, double s);

/// Count cumulants kappa_n = (-1)^n d^n_s Theta_t(s)|_0 for n = 1 ..
/// max_order (<= 4), by order-n central differences on 2n+1 points with
/// Richardson and step halving.  kappa_1 is the mean count, kappa_2 the
/// variance.
std::vector<double> cumulants(const QModel& model, double g, double t,
                              const CVector& chi, int max_order,
                              const StencilConfig& cfg);

/// s-scan of the CGF: finite-t (Theta_t(s)/t, branch-tracked along the
/// scan) or asymptotic theta(s), plus the activity -d theta/d s.
struct CgfScan {
  RVector s_grid;
  bool asymptotic = false;
  double t = 0.0;                 // finite-t scans only
  std::vector<Complex> theta_t;   // Theta_t(s)/t
  RVector theta;                  // theta(s)
  RVector activity;               // -d theta / d s on the grid
};
CgfScan scan_cgf_finite(const QModel& model, double g, const RVector& s_grid,
                        double t, const CVector& chi);
CgfScan scan_theta(const QModel& model, double g, const RVector& s_grid);

/// Wigner function of the projected system-output cat state
/// sqrt(p_I)|alpha_I> + sqrt(p_A)|alpha_A>, alpha_X = e^{i phi}
/// sqrt(t mu_X), in the convention where a coherent state has variance
/// 1/2 in each quadrature (peak at Q = sqrt(2) Re alpha).
struct WignerGridSpec {
  double q_min = 0.0, q_max = 0.0;
  int nq = 0;
  double p_min = 0.0, p_max = 0.0;
  int np = 0;
};
struct WignerGrid {
  RVector q_axis;
  RVector p_axis;
  RMatrix values;  // values(i, j) = W(q_i, p_j); integrates to 1
  double p_i = 0.0, p_a = 0.0, mu_i = 0.0, mu_a = 0.0, t = 0.0, phi = 0.0;
};
WignerGrid cat_wigner(double p_i, double p_a, double mu_i, double mu_a,
                      double t, double phi, const WignerGridSpec& grid);

}  // namespace oqfi
