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

#include "oqfi/mps.hpp"

#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>

namespace oqfi {

KrausSet kraus_ops(const QModel& model, double g, double delta_t) {
  model.validate();
  if (delta_t <= 0.0) throw PreconditionError("kraus_ops: delta_t must be > 0");

  const CMatrix h = model.hamiltonian_op(g);
  std::vector<CMatrix> ls;
  CMatrix damp = CMatrix::Zero(model.dim, model.dim);
  for (int j = 1; j <= model.n_channels(); ++j) {
    ls.push_back(model.jump_op(j, g));
    damp += ls.back().adjoint() * ls.back();
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> es(damp);
  const double lam_max = es.eigenvalues().maxCoeff();
  if (delta_t * lam_max >= 1.0)
    throw PreconditionError(
        "kraus_ops: delta_t * lambda_max(sum L^dag L) >= 1; maximum "
        "admissible delta_t is " +
        std::to_string(1.0 / lam_max));

  CVector sq = (1.0 - delta_t * es.eigenvalues().array()).sqrt().matrix().cast<Complex>();
  const CMatrix root =
      es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().adjoint();
  const CMatrix u = matexp(-kI * delta_t * h);

  KrausSet set;
  set.delta_t = delta_t;
  set.operators.push_back(u * root);
  for (const CMatrix& l : ls)
    set.operators.push_back(std::sqrt(delta_t) * (u * l));

  CMatrix check = CMatrix::Zero(model.dim, model.dim);
  for (const CMatrix& k : set.operators) check += k.adjoint() * k;
  set.completeness_defect =
      (check - identity(model.dim)).cwiseAbs().maxCoeff();
  return set;
}

EnumeratedFidelity enumerate_fidelity(const QModel& model, double g1,
                                      double g2, double t, int n_steps,
                                      const CVector& chi) {
  if (n_steps < 1) throw PreconditionError("enumerate_fidelity: n_steps >= 1");
  if (std::abs(chi.norm() - 1.0) > 1e-9)
    throw PreconditionError("enumerate_fidelity: chi is not normalized");
  const int n_kraus = model.n_channels() + 1;
  double records = 1.0;
  for (int i = 0; i < n_steps; ++i) {
    records *= n_kraus;
    if (records > double(1 << 20))
      throw PreconditionError(
          "enumerate_fidelity: (k+1)^n exceeds the 2^20 record budget");
  }

  const double dt = t / n_steps;
  const KrausSet k1 = kraus_ops(model, g1, dt);
  const KrausSet k2 = kraus_ops(model, g2, dt);

  // Path 1: explicit sum over records of <K_rec(g1) chi, K_rec(g2) chi>.
  Complex total = 0.0;
  std::function<void(int, const CVector&, const CVector&)> recurse =
      [&](int depth, const CVector& a1, const CVector& a2) {
        if (depth == n_steps) {
          total += a1.dot(a2);
          return;
        }
        for (int j = 0; j < n_kraus; ++j)
          recurse(depth + 1, (k1.operators[j] * a1).eval(),
                  (k2.operators[j] * a2).eval());
      };
  recurse(0, chi, chi);

  // Path 2: n-th power of the one-step two-sided transfer map
  // X -> sum_j K_{j,g2} X K_{j,g1}^dag applied to |chi><chi|.
  const Index d = model.dim;
  CMatrix phi = CMatrix::Zero(d * d, d * d);
  for (int j = 0; j < n_kraus; ++j)
    phi += kron(k1.operators[j].conjugate(), k2.operators[j]);
  CVector v = vec((chi * chi.adjoint()).eval());
  for (int step = 0; step < n_steps; ++step) v = phi * v;
  const Complex transfer = vec(identity(d)).dot(v);

  if (std::abs(total - transfer) > 1e-12)
    throw NumericalError(
        "enumerate_fidelity: enumeration and transfer-map paths disagree");

  EnumeratedFidelity out;
  out.enumeration = total;
  out.transfer = transfer;
  out.n_steps = n_steps;
  out.delta_t = dt;
  return out;
}

}  // namespace oqfi
