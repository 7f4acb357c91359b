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
#include "oqfi/spectral.hpp"
#include "test_common.hpp"

using namespace oqfi;
using namespace oqfi::test;

TEST_CASE("every builtin passes the Liouvillian invariants") {
  for (const char* name :
       {"poisson", "damping", "blockcat", "threelevel", "rabi"}) {
    CAPTURE(name);
    const QModel m = instantiate(builtin_defaults(name));
    const Superop liou = build_liouvillian(m, 0.0);
    const CVector id_vec = vec(identity(m.dim));
    CHECK((id_vec.adjoint() * liou.matrix).cwiseAbs().maxCoeff() <
          1e-10 * std::max(1.0, one_norm(liou.matrix)));
    const SpectralDecomp dec = spectrum(liou.matrix);
    CHECK(std::abs(dec.eigenvalues(0).real()) <
          1e-10 * std::max(1.0, one_norm(liou.matrix)));

    // evolution preserves trace and positivity from a generic state
    Rng rng(1234);
    const CVector chi = random_pure_state(m.dim, rng);
    const CMatrix rho_t =
        unvec(matexp(3.0 * liou.matrix) * vec((chi * chi.adjoint()).eval()),
              m.dim);
    CHECK(std::abs(rho_t.trace() - 1.0) < 1e-9);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(
        (0.5 * (rho_t + rho_t.adjoint().eval())).eval());
    CHECK(es.eigenvalues().minCoeff() > -1e-8);
  }
}

TEST_CASE("parameter domains are enforced") {
  CHECK_THROWS_AS(instantiate({"poisson", {{"mu", 0.0}}}), ConfigError);
  CHECK_THROWS_AS(instantiate({"damping", {{"gamma", -1.0}}}), ConfigError);
  CHECK_THROWS_AS(instantiate({"blockcat", {{"mu_A", 0.1}, {"mu_I", 1.0}}}),
                  ConfigError);
  CHECK_THROWS_AS(instantiate({"threelevel", {{"Omega", -2.0}}}), ConfigError);
  CHECK_THROWS_AS(instantiate({"rabi", {{"kappa", 0.0}}}), ConfigError);
  CHECK_THROWS_AS(instantiate({"nosuchmodel", {}}), ConfigError);
}

TEST_CASE("blockcat: two exactly orthogonal stationary phases") {
  const QModel m = instantiate({"blockcat", {{"mu_A", 1.0}, {"mu_I", 0.1}}});
  const SpectralDecomp dec = spectrum(build_liouvillian(m, 0.0).matrix);
  CHECK(dec.multiplicity(0) == 2);

  // both per-block stationary states are genuinely stationary
  const CMatrix liou = build_liouvillian(m, 0.0).matrix;
  for (int block : {0, 1}) {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(block, block) = 1.0;
    CHECK((liou * vec(rho)).norm() < 1e-14);
  }
}

TEST_CASE("threelevel defaults: gap ratio at least 1e3 (pinned tuning)") {
  const QModel m = instantiate(builtin_defaults("threelevel"));
  const SpectralDecomp dec = spectrum(build_liouvillian(m, 0.0).matrix);
  const Timescales ts = timescales(dec);
  CHECK(ts.gap_ratio >= 1e3);
  CHECK(std::isfinite(ts.tau));
  CHECK(ts.tau > 100.0 * ts.tau_prime);
}

TEST_CASE("rabi: unique stationary state, order-one gap ratio") {
  const QModel m = instantiate(builtin_defaults("rabi"));
  const Superop liou = build_liouvillian(m, 0.0);
  const SpectralDecomp dec = spectrum(liou.matrix);
  CHECK(dec.multiplicity(0) == 1);
  const CMatrix rho = stationary_state(liou, dec);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
  const Timescales ts = timescales(dec);
  CHECK(ts.gap_ratio < 10.0);
}

TEST_CASE("defaults fill in missing parameters") {
  const QModel m = instantiate({"threelevel", {{"Omega_s", 0.04}}});
  CHECK(m.dim == 3);
  // kappa default 4 shows up in the jump operator
  CHECK(std::abs(m.jump_op(1, 0.0)(0, 1) - 2.0) < 1e-15);
}

TEST_CASE("phase channel is set on every builtin") {
  for (const char* name :
       {"poisson", "damping", "blockcat", "threelevel", "rabi"}) {
    const QModel m = instantiate(builtin_defaults(name));
    REQUIRE(m.phase_channel.has_value());
    CHECK(*m.phase_channel == 1);
    // the Liouvillian itself is independent of the phase g
    const CMatrix l0 = build_liouvillian(m, 0.0).matrix;
    const CMatrix l1 = build_liouvillian(m, 0.8).matrix;
    CHECK(max_abs(l0 - l1) < 1e-13 * std::max(1.0, one_norm(l0)));
  }
}
