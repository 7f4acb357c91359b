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
#include <string>

#include "oqfi/lindblad.hpp"
#include "oqfi/spectral.hpp"
#include "oqfi/stencil.hpp"

namespace oqfi {

enum class QfiMethod {
  fd,
  spectral_finite,
  asymptotic_linearization,
  quadratic_coefficient,
  variance4,
};

std::string to_string(QfiMethod m);

struct QfiDiagnostics {
  double h_used = 0.0;
  double im_residue = 0.0;   // |Im| of 4 * mixed d^2 log-fidelity
  bool clamped = false;      // small negative estimate clamped to 0
  int halvings = 0;          // phase-winding halvings applied
  bool winding_flagged = false;
};

/// One (t, QFI) record from any of the QFI routes.
struct QfiPoint {
  double t = 0.0;
  double value = 0.0;
  QfiMethod method = QfiMethod::fd;
  QfiDiagnostics diag;
};

using StateFamily = std::function<CVector(double)>;

/// QFI of a pure-state family from the 4-point mixed central difference
/// of log <psi_{g+a} | psi_{g+b}> over (+-h, +-h), times 4.  The family
/// must be normalized within 1e-12 at every evaluated point.
double pure_state_qfi(const StateFamily& family, double g,
                      const StencilConfig& cfg,
                      QfiDiagnostics* diag = nullptr);

/// System+output fidelity Tr{ e^{t L_{g1,g2}} |chi><chi| }.
Complex fidelity(const QModel& model, double g1, double g2, double t,
                 const CVector& chi);

/// QFI by finite differences of the log fidelity.  h is auto-halved (up
/// to cfg.max_halvings) whenever stencil log-fidelity imaginary parts
/// differ by more than pi/2, so a rapidly rotating fidelity phase cannot
/// alias through the principal branch.
QfiPoint qfi_fd(const QModel& model, double g, double t, const CVector& chi,
                const StencilConfig& cfg);

/// Exact finite-time QFI from the spectral decomposition of the
/// generator (unique stationary state required); derivative
/// superoperators by central differences on the deformed generator.
QfiPoint qfi_spectral_finite(const QModel& model, double g, double t,
                             const CVector& chi, const StencilConfig& cfg);

/// Asymptotic linear QFI rate, two routes:
///   route 1: 4 * mixed derivative of the top deformed eigenvalue
///            lambda_1(g1,g2), branch-tracked by eigenvector overlap;
///   route 2: 4 Tr{d2L rho_ss} - 8 Re Tr{dL [L^-1]_P1 dL rho_ss}.
/// Returns route 1 and throws NumericalError unless
/// |route1 - route2| <= 1e-4 * max(1, |route1|).
struct AsymptoticRate {
  double rate = 0.0;  // = route1
  double route1 = 0.0;
  double route2 = 0.0;
};
AsymptoticRate qfi_asymptotic_rate(const QModel& model, double g,
                                   const StencilConfig& cfg);

/// Quadratic-regime coefficient c2 (QFI ~= c2 t^2 for tau' << t << tau):
///   c2 = 4 d^2_{g1 g2} Re Tr{L_{g1,g} P L_{g,g2} P |chi><chi|}
///        - |2 d_{g1} Tr{L_{g1,g} P |chi><chi|}|^2.
double qfi_quadratic_regime(const QModel& model, double g, const CVector& chi,
                            const StencilConfig& cfg);

/// Two-phase coefficient 4 p_A p_I (mu_A - mu_I)^2.
double qfi_two_phase(double p_a, double p_i, double mu_a, double mu_i);

/// Benchmark state families: GHZ-encoded phase (QFI = N^2) and the
/// uncorrelated product encoding (QFI = N), on N qubits.
StateFamily ghz_family(int n_qubits);
StateFamily product_phase_family(int n_qubits);

/// Derivative superoperators of the deformed generator at (g, g), by
/// central differences (with Richardson when enabled).
struct DeformedDerivs {
  CMatrix d1;   // d/d g1
  CMatrix d2;   // d/d g2
  CMatrix d12;  // mixed second
};
DeformedDerivs deformed_derivatives(const QModel& model, double g,
                                    const StencilConfig& cfg);

}  // namespace oqfi
