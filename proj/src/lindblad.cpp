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

#include "oqfi/lindblad.hpp"

#include <cmath>

namespace oqfi {

CMatrix OperatorFamily::eval(double g) const {
  if (coeffs.empty()) throw PreconditionError("OperatorFamily: no coefficients");
  CMatrix out = coeffs.front();
  double gm = 1.0;
  for (size_t m = 1; m < coeffs.size(); ++m) {
    gm *= g;
    out += gm * coeffs[m];
  }
  return out;
}

bool OperatorFamily::depends_on_g() const {
  for (size_t m = 1; m < coeffs.size(); ++m)
    if (coeffs[m].cwiseAbs().maxCoeff() > 0.0) return true;
  return false;
}

CMatrix QModel::hamiltonian_op(double g) const {
  CMatrix h = hamiltonian.eval(g);
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw PreconditionError("QModel: H(g) is not Hermitian at g = " +
                            std::to_string(g));
  return h;
}

CMatrix QModel::jump_op(int channel, double g) const {
  if (channel < 1 || channel > n_channels())
    throw PreconditionError("QModel: jump channel " + std::to_string(channel) +
                            " out of range [1, " +
                            std::to_string(n_channels()) + "]");
  CMatrix l = jumps[channel - 1].eval(g);
  if (phase_channel && *phase_channel == channel)
    l *= std::exp(-kI * g);
  return l;
}

void QModel::validate() const {
  if (dim < 1) throw PreconditionError("QModel: dim must be >= 1");
  if (jumps.empty()) throw PreconditionError("QModel: at least one jump channel required");
  if (phase_channel && (*phase_channel < 1 || *phase_channel > n_channels()))
    throw PreconditionError("QModel: phase_channel out of range [1, k]");
  auto check_family = [&](const OperatorFamily& fam, const std::string& name) {
    if (fam.coeffs.empty())
      throw PreconditionError("QModel: empty operator family for " + name);
    for (const CMatrix& a : fam.coeffs) {
      if (a.rows() != dim || a.cols() != dim)
        throw PreconditionError("QModel: coefficient of " + name +
                                " has wrong shape");
      if (!all_finite(a))
        throw PreconditionError("QModel: non-finite coefficient in " + name);
    }
  };
  check_family(hamiltonian, "H");
  for (int j = 0; j < n_channels(); ++j)
    check_family(jumps[j], "L_" + std::to_string(j + 1));
}

namespace {

// vec(AXB) = kron(B^T, A) vec(X) throughout.
CMatrix left_mult(const CMatrix& a) { return kron(identity(a.rows()), a); }
CMatrix right_mult(const CMatrix& b) {
  return kron(b.transpose(), identity(b.rows()));
}
CMatrix sandwich(const CMatrix& a, const CMatrix& b) {
  // rho -> a * rho * b^dagger
  return kron(b.conjugate(), a);
}

}  // namespace

Superop build_liouvillian(const QModel& model, double g) {
  model.validate();
  const CMatrix h = model.hamiltonian_op(g);
  const Index d = model.dim;

  CMatrix m = -kI * (left_mult(h) - right_mult(h));
  for (int j = 1; j <= model.n_channels(); ++j) {
    const CMatrix l = model.jump_op(j, g);
    const CMatrix ldl = l.adjoint() * l;
    m += sandwich(l, l) - 0.5 * (left_mult(ldl) + right_mult(ldl));
  }

  Superop out{std::move(m), d, SuperopKind::liouvillian};
  const CVector id_vec = vec(identity(d));
  const double tp_residual =
      (id_vec.adjoint() * out.matrix).cwiseAbs().maxCoeff();
  if (tp_residual > 1e-10 * std::max(1.0, one_norm(out.matrix)))
    throw NumericalError(
        "build_liouvillian: identity is not a left null vector (residual " +
        std::to_string(tp_residual) + ")");
  return out;
}

Superop build_deformed(const QModel& model, double g1, double g2) {
  model.validate();
  const CMatrix h1 = model.hamiltonian_op(g1);
  const CMatrix h2 = model.hamiltonian_op(g2);
  const Index d = model.dim;

  CMatrix m = -kI * left_mult(h1) + kI * right_mult(h2);
  for (int j = 1; j <= model.n_channels(); ++j) {
    const CMatrix l1 = model.jump_op(j, g1);
    const CMatrix l2 = model.jump_op(j, g2);
    m += sandwich(l1, l2) - 0.5 * (left_mult(l1.adjoint() * l1) +
                                   right_mult(l2.adjoint() * l2));
  }
  return Superop{std::move(m), d, SuperopKind::deformed};
}

Superop build_counting(const QModel& model, double g, double s, int channel) {
  Superop out = build_liouvillian(model, g);
  const CMatrix l = model.jump_op(channel, g);
  out.matrix += (std::exp(-s) - 1.0) * sandwich(l, l);
  out.kind = SuperopKind::counting;
  return out;
}

CMatrix stationary_state(const Superop& superop) {
  return stationary_state(superop, spectrum(superop.matrix));
}

CMatrix stationary_state(const Superop& superop, const SpectralDecomp& decomp) {
  if (superop.kind != SuperopKind::liouvillian)
    throw PreconditionError("stationary_state: superoperator is not a liouvillian");
  if (decomp.defective)
    throw PreconditionError("stationary_state: defective generator");

  const int mult = decomp.multiplicity(0);
  if (mult > 1)
    throw DegenerateStationaryError(
        "stationary_state: zero eigenvalue has degeneracy " +
        std::to_string(mult),
        mult);
  if (std::abs(decomp.eigenvalues(0)) > decomp.group_tol * 10.0 &&
      std::abs(decomp.eigenvalues(0)) > 1e-9)
    throw NumericalError("stationary_state: leading eigenvalue is not zero");

  const Index d = superop.dim;
  CMatrix rho = unvec(decomp.right.col(0), d);
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12)
    throw NumericalError("stationary_state: traceless zero eigenvector");
  rho /= tr;

  const double herm_residual = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm_residual > 1e-9)
    throw NumericalError("stationary_state: state is not Hermitian (residual " +
                         std::to_string(herm_residual) + ")");
  rho = 0.5 * (rho + rho.adjoint().eval());

  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw NumericalError("stationary_state: state has a negative eigenvalue " +
                         std::to_string(es.eigenvalues().minCoeff()));
  return rho;
}

}  // namespace oqfi
