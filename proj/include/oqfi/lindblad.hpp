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

#include <optional>
#include <string>
#include <vector>

#include "oqfi/errors.hpp"
#include "oqfi/linalg.hpp"
#include "oqfi/types.hpp"

namespace oqfi {

/// Operator family g -> sum_m g^m A_m.  The optional phase factor
/// e^{-ig} of a designated jump channel is applied by QModel, not here.
struct OperatorFamily {
  std::vector<CMatrix> coeffs;  // A_0 .. A_M

  CMatrix eval(double g) const;
  Index dim() const { return coeffs.empty() ? 0 : coeffs.front().rows(); }
  bool depends_on_g() const;

  static OperatorFamily constant(CMatrix a) { return {{std::move(a)}}; }
};

/// Parameterized open-system model: Hilbert-space dimension, Hamiltonian
/// family H(g), jump families L_j(g), and an optional channel that
/// acquires the phase factor e^{-ig}.  Channel indices are 1-based.
struct QModel {
  Index dim = 0;
  OperatorFamily hamiltonian;
  std::vector<OperatorFamily> jumps;
  std::optional<int> phase_channel;

  int n_channels() const { return static_cast<int>(jumps.size()); }

  /// H(g); throws PreconditionError if not Hermitian within 1e-12.
  CMatrix hamiltonian_op(double g) const;

  /// L_j(g) including the phase factor on the designated channel.
  CMatrix jump_op(int channel, double g) const;

  /// Structural checks independent of g (dimensions, channel range).
  void validate() const;
};

enum class SuperopKind { liouvillian, deformed, counting };

/// Dense superoperator acting on column-stacked density matrices.
struct Superop {
  CMatrix matrix;  // d^2 x d^2
  Index dim = 0;   // d
  SuperopKind kind = SuperopKind::liouvillian;

  /// Fixed vectorization convention carried so tests can assert it.
  static constexpr const char* kVectorization =
      "column-stacking: vec(AXB) = kron(B^T, A) vec(X)";
};

/// Lindblad generator rho -> -i[H,rho] + sum_j (L_j rho L_j^dag
/// - 1/2 {L_j^dag L_j, rho}) at parameter g.  The identity is verified
/// to be a left null vector (trace preservation) within 1e-10.
Superop build_liouvillian(const QModel& model, double g);

/// Two-parameter deformation: rho -> -i H(g1) rho + i rho H(g2)
/// + sum_j [L_j(g1) rho L_j(g2)^dag - 1/2(L_j(g1)^dag L_j(g1) rho
/// + rho L_j(g2)^dag L_j(g2))].  Reduces to the Liouvillian at g1 = g2.
Superop build_deformed(const QModel& model, double g1, double g2);

/// Counting (tilted) generator: Liouvillian plus
/// (e^{-s} - 1) * (sandwich L_ch . L_ch^dag); channel is 1-based.
Superop build_counting(const QModel& model, double g, double s, int channel);

/// Unique stationary state of a liouvillian-kind superoperator:
/// Hermitian, unit trace, positive semidefinite within tolerance.
/// Throws DegenerateStationaryError when the zero eigenvalue is
/// degenerate (carrying the degeneracy count).
CMatrix stationary_state(const Superop& superop);

/// Same, reusing a precomputed decomposition of the superoperator.
CMatrix stationary_state(const Superop& superop, const SpectralDecomp& decomp);

}  // namespace oqfi
