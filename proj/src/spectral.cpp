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

#include "oqfi/spectral.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace oqfi {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Timescales timescales(const SpectralDecomp& decomp) {
  if (decomp.defective)
    throw PreconditionError("timescales: defective decomposition");
  if (decomp.size() < 3)
    throw PreconditionError("timescales: need at least 3 eigenvalues (d >= 2)");

  Timescales ts;
  ts.lambda2 = decomp.eigenvalues(1);
  ts.lambda3 = decomp.eigenvalues(2);
  if (ts.lambda2.real() > decomp.group_tol ||
      ts.lambda3.real() > ts.lambda2.real() + decomp.group_tol)
    throw PreconditionError(
        "timescales: spectrum is not ordered like a Liouvillian's");

  const bool gapless = ts.lambda2.real() >= -decomp.group_tol;
  ts.tau = gapless ? kInf : 1.0 / (-ts.lambda2.real());
  ts.tau_prime = ts.lambda3.real() >= -decomp.group_tol
                     ? kInf
                     : 1.0 / (-ts.lambda3.real());
  ts.gap_ratio = gapless ? kInf : ts.lambda3.real() / ts.lambda2.real();
  return ts;
}

CMatrix projector_P(const SpectralDecomp& decomp) {
  const Timescales ts = timescales(decomp);
  if (!(ts.gap_ratio > 10.0))
    throw PreconditionError(
        "projector_P: gap ratio " + std::to_string(ts.gap_ratio) +
        " <= 10; no intermediate time regime tau' << t << tau exists");
  return decomp.right.col(0) * decomp.left.col(0).adjoint() +
         decomp.right.col(1) * decomp.left.col(1).adjoint();
}

namespace {

// l_2 with its arbitrary eigenvector phase removed: if m = e^{i theta} H
// with H Hermitian, Tr(m^2) = e^{2 i theta} Tr(H^2) and Tr(H^2) > 0.
// Tr(m^2) ~ 0 means no phase makes m Hermitian (e.g. l_2 is a coherence,
// as for pure amplitude damping) and the construction does not apply.
CMatrix phase_align(const CMatrix& m) {
  const Complex tr2 = (m * m).trace();
  if (std::abs(tr2) < 1e-14 * m.squaredNorm())
    throw PreconditionError(
        "metastable_split: l_2 is not Hermitian under any phase; the "
        "two-phase construction does not apply to this generator");
  const double theta = 0.5 * std::arg(tr2);
  return m * std::exp(-kI * theta);
}

// At an exact DPT the zero group is two-dimensional and the eigensolver
// basis within it is arbitrary.  The trace functional vec(I) lies in the
// group's left span; the component orthogonal to it is a well-defined
// substitute for l_2 (a combination a P_A + b P_I with a, b of opposite
// sign, which is all the splitting needs).
CVector canonical_l2_vec(const SpectralDecomp& decomp,
                         const std::vector<Index>& zero_group) {
  const Index d = decomp.operator_dim();
  const CVector u = vec(identity(d)).normalized();
  CVector best = CVector::Zero(d * d);
  double best_norm = -1.0;
  for (Index k : zero_group) {
    CVector w = decomp.left.col(k);
    w -= u.dot(w) * u;
    if (w.norm() > best_norm) {
      best_norm = w.norm();
      best = w;
    }
  }
  if (best_norm < 1e-10)
    throw NumericalError(
        "metastable_split: degenerate zero group has no trace-orthogonal "
        "left direction");
  return best;
}

}  // namespace

PhaseSplit metastable_split(const SpectralDecomp& decomp, const CVector& chi,
                            int channel, const QModel& model, double g) {
  if (decomp.defective)
    throw PreconditionError("metastable_split: defective decomposition");
  const Index d = decomp.operator_dim();
  if (chi.size() != d)
    throw PreconditionError("metastable_split: chi has wrong dimension");
  if (std::abs(chi.norm() - 1.0) > 1e-9)
    throw PreconditionError("metastable_split: chi is not normalized");

  const double radius = decomp.eigenvalues.cwiseAbs().maxCoeff();
  const double tol = 1e-9 * std::max(1.0, radius);

  const Complex lambda2 = decomp.eigenvalues(1);
  if (std::abs(lambda2.imag()) > tol)
    throw PreconditionError(
        "metastable_split: complex lambda_2 unsupported (Im = " +
        std::to_string(lambda2.imag()) + ")");

  // l_2: second left eigenvector, or the canonical trace-orthogonal
  // direction when the zero eigenvalue is exactly degenerate.
  const int zero_grp = decomp.group_of(0);
  CVector l2_vec;
  if (zero_grp >= 0 && decomp.group_of(1) == zero_grp) {
    const auto& group = decomp.degenerate_groups[zero_grp];
    if (group.size() > 2)
      throw PreconditionError(
          "metastable_split: zero-eigenvalue degeneracy > 2 unsupported");
    l2_vec = canonical_l2_vec(decomp, group);
  } else {
    l2_vec = decomp.left.col(1);
  }

  CMatrix l2 = unvec(l2_vec, d);
  l2 /= l2.norm();
  l2 = phase_align(l2);
  const double herm_residual = (l2 - l2.adjoint()).cwiseAbs().maxCoeff();
  if (herm_residual > std::max(tol, 1e-9))
    throw PreconditionError(
        "metastable_split: l_2 is not Hermitian within tolerance (residual " +
        std::to_string(herm_residual) + ")");
  l2 = 0.5 * (l2 + l2.adjoint().eval());

  Eigen::SelfAdjointEigenSolver<CMatrix> es(l2);
  const RVector evals = es.eigenvalues();  // ascending
  const double lo = evals(0), hi = evals(d - 1);
  const double spread = hi - lo;
  if (spread < 1e-12)
    throw NumericalError("metastable_split: l_2 has no spectral spread");
  const double cluster_tol = 0.1 * spread;

  PhaseSplit out;
  out.cluster_tol = cluster_tol;
  out.projector_A = CMatrix::Zero(d, d);
  out.projector_I = CMatrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) {
    if (evals(k) >= hi - cluster_tol)
      out.projector_A += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
    else if (evals(k) <= lo + cluster_tol)
      out.projector_I += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  }
  out.chi_A = es.eigenvectors().col(d - 1);
  out.chi_I = es.eigenvectors().col(0);

  // Quasi-stationary emission rate from each extreme eigenvector:
  // evolve for 40 tau' and average Tr(L_ch^dag L_ch rho(t)) over the
  // second half of the window.  (The fast modes then carry e^{-20} of
  // their initial weight, which keeps the exact-block-model rate
  // property at its 1e-6 tolerance; a 10 tau' window would leave e^{-5}
  // relaxation residue in the average.)
  const Timescales ts = timescales(decomp);
  if (!std::isfinite(ts.tau_prime))
    throw PreconditionError("metastable_split: no finite relaxation timescale");
  const CMatrix l_ch = model.jump_op(channel, g);
  const CVector obs = vec((l_ch.adjoint() * l_ch).eval());
  auto rate_from = [&](const CVector& state) {
    const CVector rho0 = vec((state * state.adjoint()).eval());
    const CVector weights0 = decomp.left.adjoint() * rho0;
    double acc = 0.0;
    const int n_samples = 21;
    for (int i = 0; i < n_samples; ++i) {
      const double t = (20.0 + 20.0 * i / (n_samples - 1)) * ts.tau_prime;
      CVector w = weights0;
      for (Index k = 0; k < decomp.size(); ++k)
        w(k) *= std::exp(t * decomp.eigenvalues(k));
      const CVector rho_t = decomp.right * w;
      acc += (obs.dot(rho_t)).real();
    }
    return acc / n_samples;
  };
  out.mu_A = rate_from(out.chi_A);
  out.mu_I = rate_from(out.chi_I);

  if (out.mu_A < out.mu_I) {
    std::swap(out.mu_A, out.mu_I);
    std::swap(out.projector_A, out.projector_I);
    std::swap(out.chi_A, out.chi_I);
  }

  auto overlap = [&](const CMatrix& proj) {
    double p = (chi.adjoint() * proj * chi)(0, 0).real();
    if (p < 0.0 && p > -1e-9) p = 0.0;
    if (p > 1.0 && p < 1.0 + 1e-9) p = 1.0;
    return p;
  };
  out.p_A = overlap(out.projector_A);
  out.p_I = overlap(out.projector_I);
  return out;
}

}  // namespace oqfi
