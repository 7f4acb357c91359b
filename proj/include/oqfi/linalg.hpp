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

/// Matrix exponential by scaling-and-squaring with the order-13 diagonal
/// Pade approximant and 1-norm based scaling.
///
/// Throws PreconditionError for non-square or non-finite input and
/// NumericalError when the required number of squarings exceeds the
/// scaling budget.
CMatrix matexp(const CMatrix& m);

/// Biorthonormal eigensystem of a square complex matrix.
///
/// Eigenvalues are sorted by descending real part, ties broken by
/// descending imaginary part.  Right eigenvectors are the columns of
/// `right` (unit 2-norm); left eigenvectors are the columns of `left`,
/// fixed by left = inverse(right)^dagger so that
/// left.col(j).dot(right.col(k)) = delta_jk by construction.
///
/// When the source is a d^2 x d^2 superoperator, right_op(k)/left_op(k)
/// devectorize column k into the d x d operator rho_k / l_k with
/// <l_j | rho_k> := Tr(l_j^dagger rho_k) = delta_jk.
struct SpectralDecomp {
  CVector eigenvalues;
  CMatrix right;
  CMatrix left;
  std::vector<std::vector<Index>> degenerate_groups;  // only groups of size > 1
  double group_tol = 0.0;
  bool defective = false;

  Index size() const { return eigenvalues.size(); }

  /// Side length d when the source space is d x d operators; throws if
  /// the dimension is not a perfect square.
  Index operator_dim() const;
  CMatrix right_op(Index k) const { return unvec(right.col(k), operator_dim()); }
  CMatrix left_op(Index k) const { return unvec(left.col(k), operator_dim()); }

  /// Index of the degenerate group containing k, or -1 if k is simple.
  int group_of(Index k) const;
  /// Size of the eigenvalue cluster containing k (1 if simple).
  int multiplicity(Index k) const;
};

/// Full eigensystem of a square matrix.  group_tol <= 0 selects the
/// default 1e-9 * max(1, spectral radius).  A defective (numerically
/// non-diagonalizable) input is returned with `defective` set; spectral
/// operations consuming the decomposition refuse such inputs.
SpectralDecomp spectrum(const CMatrix& m, double group_tol = 0.0);

/// Spectral function restricted to eigenspaces:
///   sum_{k not in exclude} f(lambda_k) |rho_k><l_k|
/// as a matrix in the source space.  `exclude` holds 0-based eigenvalue
/// indices covering every singularity of f.
CMatrix restricted_function(const SpectralDecomp& decomp,
                            const std::function<Complex(Complex)>& f,
                            const std::vector<Index>& exclude = {});

/// phi1(x) = (e^x - 1)/x and phi2(x) = (e^x - 1 - x)/x^2, evaluated
/// stably near x = 0 (series) and exactly elsewhere.  Entire functions.
Complex phi1(Complex x);
Complex phi2(Complex x);

}  // namespace oqfi
