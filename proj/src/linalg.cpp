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

#include "oqfi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace oqfi {

namespace {

// Order-13 diagonal Pade coefficients for exp (Higham 2005).
constexpr double kPade13[14] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

// theta_13: largest 1-norm for which the unscaled order-13 approximant
// meets double precision.
constexpr double kTheta13 = 5.371920351148152;

constexpr int kMaxSquarings = 60;

}  // namespace

CMatrix matexp(const CMatrix& m) {
  if (m.rows() != m.cols())
    throw PreconditionError("matexp: input must be square");
  if (!all_finite(m))
    throw PreconditionError("matexp: input has non-finite entries");

  const Index n = m.rows();
  const double norm = one_norm(m);
  int squarings = 0;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    if (squarings > kMaxSquarings)
      throw NumericalError("matexp: 1-norm " + std::to_string(norm) +
                           " exceeds the scaling budget");
  }
  const CMatrix a = m / std::pow(2.0, squarings);

  const CMatrix id = identity(n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a2 * a4;

  const CMatrix u =
      a * (a6 * (kPade13[13] * a6 + kPade13[11] * a4 + kPade13[9] * a2) +
           kPade13[7] * a6 + kPade13[5] * a4 + kPade13[3] * a2 +
           kPade13[1] * id);
  const CMatrix v =
      a6 * (kPade13[12] * a6 + kPade13[10] * a4 + kPade13[8] * a2) +
      kPade13[6] * a6 + kPade13[4] * a4 + kPade13[2] * a2 + kPade13[0] * id;

  Eigen::PartialPivLU<CMatrix> lu(v - u);
  CMatrix r = lu.solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;

  if (!all_finite(r))
    throw NumericalError("matexp: result is not finite");
  return r;
}

Index SpectralDecomp::operator_dim() const {
  const Index n = eigenvalues.size();
  const Index d = static_cast<Index>(std::llround(std::sqrt(double(n))));
  if (d * d != n)
    throw PreconditionError(
        "SpectralDecomp: source space dimension is not a perfect square");
  return d;
}

int SpectralDecomp::group_of(Index k) const {
  for (size_t gi = 0; gi < degenerate_groups.size(); ++gi)
    for (Index idx : degenerate_groups[gi])
      if (idx == k) return static_cast<int>(gi);
  return -1;
}

int SpectralDecomp::multiplicity(Index k) const {
  const int g = group_of(k);
  return g < 0 ? 1 : static_cast<int>(degenerate_groups[g].size());
}

SpectralDecomp spectrum(const CMatrix& m, double group_tol) {
  if (m.rows() != m.cols())
    throw PreconditionError("spectrum: input must be square");
  if (!all_finite(m))
    throw PreconditionError("spectrum: input has non-finite entries");

  const Index n = m.rows();
  Eigen::ComplexEigenSolver<CMatrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw NumericalError("spectrum: eigensolver failed to converge");

  SpectralDecomp out;
  const CVector raw_vals = solver.eigenvalues();
  const CMatrix raw_vecs = solver.eigenvectors();

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (raw_vals(a).real() != raw_vals(b).real())
      return raw_vals(a).real() > raw_vals(b).real();
    return raw_vals(a).imag() > raw_vals(b).imag();
  });

  // Stabilize ties: real parts that agree to roundoff (conjugate pairs,
  // exact degeneracies) must sort by descending imaginary part
  // regardless of last-ulp noise, or the ordering would depend on the
  // representation of the input.
  const double tie_tol =
      1e-10 * std::max(1.0, raw_vals.cwiseAbs().maxCoeff());
  for (Index i = 0; i < n;) {
    Index j = i + 1;
    while (j < n && std::abs(raw_vals(order[j]).real() -
                             raw_vals(order[j - 1]).real()) < tie_tol)
      ++j;
    std::sort(order.begin() + i, order.begin() + j, [&](Index a, Index b) {
      return raw_vals(a).imag() > raw_vals(b).imag();
    });
    i = j;
  }

  out.eigenvalues.resize(n);
  out.right.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = raw_vals(order[k]);
    out.right.col(k) = raw_vecs.col(order[k]).normalized();
  }

  const double radius = out.eigenvalues.cwiseAbs().maxCoeff();
  out.group_tol = group_tol > 0.0 ? group_tol : 1e-9 * std::max(1.0, radius);

  // Transitive clustering of eigenvalues closer than group_tol.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(out.eigenvalues(i) - out.eigenvalues(j)) < out.group_tol)
        parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
  std::vector<std::vector<Index>> clusters(n);
  for (Index i = 0; i < n; ++i) clusters[find(static_cast<int>(i))].push_back(i);
  for (auto& c : clusters)
    if (c.size() > 1) {
      std::sort(c.begin(), c.end());
      out.degenerate_groups.push_back(c);
    }
  std::sort(out.degenerate_groups.begin(), out.degenerate_groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  // Left vectors from the inverse of the right-vector matrix; this gives
  // biorthonormality by construction whenever the input is diagonalizable.
  Eigen::FullPivLU<CMatrix> lu(out.right);
  if (!lu.isInvertible()) {
    out.defective = true;
    out.left = CMatrix::Zero(n, n);
    return out;
  }
  out.left = lu.inverse().adjoint();

  const double src_norm = std::max(1e-300, m.norm());
  const double recon_err =
      (out.right * out.eigenvalues.asDiagonal() * out.left.adjoint() - m)
          .norm() /
      src_norm;
  if (recon_err > 1e-7) out.defective = true;
  return out;
}

CMatrix restricted_function(const SpectralDecomp& decomp,
                            const std::function<Complex(Complex)>& f,
                            const std::vector<Index>& exclude) {
  if (decomp.defective)
    throw PreconditionError(
        "restricted_function: decomposition is defective; spectral "
        "operations refuse non-diagonalizable inputs");
  const Index n = decomp.size();
  CVector weights = CVector::Zero(n);
  for (Index k = 0; k < n; ++k) {
    if (std::find(exclude.begin(), exclude.end(), k) != exclude.end())
      continue;
    const Complex fx = f(decomp.eigenvalues(k));
    if (!std::isfinite(fx.real()) || !std::isfinite(fx.imag()))
      throw NumericalError(
          "restricted_function: f is singular at non-excluded eigenvalue index " +
          std::to_string(k));
    weights(k) = fx;
  }
  return decomp.right * weights.asDiagonal() * decomp.left.adjoint();
}

Complex phi1(Complex x) {
  if (std::abs(x) < 0.5) {
    Complex sum = 0.0, term = 1.0;
    for (int k = 1; k <= 20; ++k) {
      sum += term;
      term *= x / double(k + 1);
    }
    return sum;
  }
  return (std::exp(x) - 1.0) / x;
}

Complex phi2(Complex x) {
  if (std::abs(x) < 0.5) {
    Complex sum = 0.0, term = 0.5;
    for (int k = 1; k <= 20; ++k) {
      sum += term;
      term *= x / double(k + 2);
    }
    return sum;
  }
  return (std::exp(x) - 1.0 - x) / (x * x);
}

}  // namespace oqfi
