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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "oqfi/models.hpp"
#include "test_common.hpp"

using namespace oqfi;
using namespace oqfi::test;

TEST_CASE("d=1 Poisson: gain and loss cancel on scalars") {
  const QModel m = instantiate({"poisson", {{"mu", 1.0}}});
  const Superop liou = build_liouvillian(m, 0.0);
  REQUIRE(liou.matrix.rows() == 1);
  CHECK(std::abs(liou.matrix(0, 0)) < 1e-14);
  const CMatrix rho = stationary_state(liou);
  CHECK(std::abs(rho(0, 0) - 1.0) < 1e-12);
}

TEST_CASE("amplitude damping: spectrum and stationary state") {
  const QModel m = instantiate({"damping", {{"gamma", 1.0}}});
  const Superop liou = build_liouvillian(m, 0.0);
  const SpectralDecomp dec = spectrum(liou.matrix);
  CHECK(std::abs(dec.eigenvalues(0)) < 1e-12);
  CHECK(std::abs(dec.eigenvalues(1) + 0.5) < 1e-12);
  CHECK(std::abs(dec.eigenvalues(2) + 0.5) < 1e-12);
  CHECK(std::abs(dec.eigenvalues(3) + 1.0) < 1e-12);

  const CMatrix rho = stationary_state(liou, dec);
  CHECK(std::abs(rho(0, 0) - 1.0) < 1e-12);
  CHECK(max_abs(rho - rho.adjoint().eval()) < 1e-12);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
}

TEST_CASE("blockcat: populations invariant, coherences decay, degenerate zero") {
  const double mu_a = 1.0, mu_i = 0.1;
  const QModel m = instantiate({"blockcat", {{"mu_A", mu_a}, {"mu_I", mu_i}}});
  const Superop liou = build_liouvillian(m, 0.0);
  const SpectralDecomp dec = spectrum(liou.matrix);

  const double c = 0.5 * std::pow(std::sqrt(mu_a) - std::sqrt(mu_i), 2);
  CHECK(std::abs(dec.eigenvalues(0)) < 1e-12);
  CHECK(std::abs(dec.eigenvalues(1)) < 1e-12);
  CHECK(std::abs(dec.eigenvalues(2) + c) < 1e-12);
  CHECK(std::abs(dec.eigenvalues(3) + c) < 1e-12);
  CHECK(dec.multiplicity(0) == 2);

  try {
    stationary_state(liou, dec);
    FAIL("expected DegenerateStationaryError");
  } catch (const DegenerateStationaryError& e) {
    CHECK(e.degeneracy == 2);
  }
}

TEST_CASE("deformed generator reduces to the Liouvillian at g1 = g2") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const QModel m = random_model(rng);
    const double g = 0.3;
    const CMatrix liou = build_liouvillian(m, g).matrix;
    const CMatrix def = build_deformed(m, g, g).matrix;
    CHECK(max_abs(def - liou) < 1e-14 * std::max(1.0, one_norm(liou)));
  }
}

TEST_CASE("phase encoding: deformation is (e^{-i dphi} - 1) times the sandwich") {
  const QModel m = instantiate({"blockcat", {{"mu_A", 1.0}, {"mu_I", 0.1}}});
  const CMatrix l1 = m.jump_op(1, 0.0);
  const CMatrix sandwich = kron(l1.conjugate(), l1);
  const CMatrix liou = build_liouvillian(m, 0.0).matrix;

  const double phi1 = 0.4, phi2 = 0.15;
  const Complex factor = std::exp(-kI * (phi1 - phi2)) - 1.0;
  const CMatrix expected = liou + factor * sandwich;
  const CMatrix got = build_deformed(m, phi1, phi2).matrix;
  CHECK(max_abs(got - expected) < 1e-12);
}

TEST_CASE("counting generator: s = 0, scalar case, deformed substitution") {
  const QModel poisson = instantiate({"poisson", {{"mu", 2.0}}});
  const double s = 0.3;
  CHECK(std::abs(build_counting(poisson, 0.0, s, 1).matrix(0, 0) -
                 2.0 * (std::exp(-s) - 1.0)) < 1e-14);

  const QModel m = instantiate({"threelevel", {}});
  const CMatrix liou = build_liouvillian(m, 0.0).matrix;
  CHECK(max_abs(build_counting(m, 0.0, 0.0, 1).matrix - liou) < 1e-14);

  // Substitution identity: L(s) equals the phase-deformed generator
  // analytically continued to dphi = -i s, i.e. L + (e^{-s}-1) sandwich
  // with the sandwich extracted from a real-dphi deformation.
  const double dphi0 = 0.7;
  const CMatrix sandwich =
      (build_deformed(m, dphi0, 0.0).matrix - liou) /
      (std::exp(-kI * dphi0) - 1.0);
  const CMatrix expected = liou + (std::exp(-s) - 1.0) * sandwich;
  CHECK(max_abs(build_counting(m, 0.0, s, 1).matrix - expected) < 1e-12);

  CHECK_THROWS_AS(build_counting(m, 0.0, s, 2), PreconditionError);
}

TEST_CASE("trace preservation, positivity, hermiticity over a random ensemble") {
  Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const QModel m = random_model(rng);
    const Superop liou = build_liouvillian(m, 0.0);
    const CVector chi = random_pure_state(m.dim, rng);
    const CVector rho0 = vec((chi * chi.adjoint()).eval());

    for (double t : {0.1, 1.0, 10.0}) {
      const CVector rho_t_vec = matexp(t * liou.matrix) * rho0;
      const CMatrix rho_t = unvec(rho_t_vec, m.dim);
      CHECK(std::abs(rho_t.trace() - 1.0) < 1e-9);
      CHECK(max_abs(rho_t - rho_t.adjoint().eval()) < 1e-10);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(
          (0.5 * (rho_t + rho_t.adjoint().eval())).eval());
      CHECK(es.eigenvalues().minCoeff() > -1e-8);
    }
  }
}

TEST_CASE("self-fidelity: Tr e^{t L_{g,g}} |chi><chi| = 1") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const QModel m = random_model(rng);
    const double g = 0.2;
    const CVector chi = random_pure_state(m.dim, rng);
    const CVector rho0 = vec((chi * chi.adjoint()).eval());
    const CVector id_vec = vec(identity(m.dim));
    const Complex f =
        id_vec.dot(matexp(5.0 * build_deformed(m, g, g).matrix) * rho0);
    CHECK(std::abs(f - 1.0) < 1e-9);
  }
}

TEST_CASE("liouvillian invariants: left null vector and zero top eigenvalue") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const QModel m = random_model(rng);
    const Superop liou = build_liouvillian(m, 0.0);
    const CVector id_vec = vec(identity(m.dim));
    CHECK((id_vec.adjoint() * liou.matrix).cwiseAbs().maxCoeff() <
          1e-10 * std::max(1.0, one_norm(liou.matrix)));
    const SpectralDecomp dec = spectrum(liou.matrix);
    CHECK(std::abs(dec.eigenvalues(0)) <
          1e-10 * std::max(1.0, one_norm(liou.matrix)));
  }
}

TEST_CASE("non-Hermitian Hamiltonian is rejected") {
  QModel m;
  m.dim = 2;
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 1) = Complex(0.0, 1.0);  // anti-Hermitian piece
  m.hamiltonian = OperatorFamily::constant(h);
  m.jumps.push_back(OperatorFamily::constant(CMatrix::Identity(2, 2)));
  CHECK_THROWS_AS(build_liouvillian(m, 0.0), PreconditionError);
}

TEST_CASE("vectorization convention tag") {
  CHECK(std::string(Superop::kVectorization).find("column-stacking") !=
        std::string::npos);
  // vec(A X B) = kron(B^T, A) vec(X) on a concrete instance
  Rng rng(3);
  const CMatrix a = random_cmatrix(3, 3, rng);
  const CMatrix x = random_cmatrix(3, 3, rng);
  const CMatrix b = random_cmatrix(3, 3, rng);
  const CVector lhs = vec((a * x * b).eval());
  const CVector rhs = kron(b.transpose(), a) * vec(x);
  CHECK((lhs - rhs).norm() < 1e-12 * lhs.norm());
}

TEST_CASE("polynomial operator family evaluation") {
  // L(g) = A0 + g A1 + g^2 A2
  CMatrix a0 = CMatrix::Identity(2, 2);
  CMatrix a1 = CMatrix::Zero(2, 2);
  a1(0, 1) = 2.0;
  CMatrix a2 = CMatrix::Zero(2, 2);
  a2(1, 0) = Complex(0.0, 1.0);
  OperatorFamily fam{{a0, a1, a2}};
  const CMatrix at = fam.eval(0.5);
  CHECK(std::abs(at(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(at(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(at(1, 0) - Complex(0.0, 0.25)) < 1e-15);
  CHECK(fam.depends_on_g());
  CHECK_FALSE(OperatorFamily::constant(a0).depends_on_g());
}
