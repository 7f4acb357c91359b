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

// Acceptance suite: every release-gating criterion, each printing one
// PASS/FAIL line with its measured values.  Run all criteria (default)
// or a subset via --criterion N [N...].  Exit code = number of failures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "oqfi/counting.hpp"
#include "oqfi/models.hpp"
#include "oqfi/mps.hpp"
#include "oqfi/qfi.hpp"
#include "oqfi/spectral.hpp"
#include "oqfi/trajectories.hpp"

using namespace oqfi;

namespace {

const StencilConfig kCfg{};

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) {
    detail += (detail.empty() ? "" : "; ") + what;
  }
};

double rel(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

CVector symmetric_chi(Index d) {
  CVector chi = CVector::Constant(d, Complex(1.0, 0.0));
  return chi / chi.norm();
}

CVector bright_dark_chi3() {
  CVector chi(3);
  chi << 1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0);
  return chi;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double window_slope(const QModel& m, const CVector& chi, double lo, double hi,
                    int n) {
  std::vector<double> lx, ly;
  for (int i = 0; i < n; ++i) {
    const double t = lo * std::pow(hi / lo, double(i) / (n - 1));
    lx.push_back(std::log(t));
    ly.push_back(std::log(qfi_fd(m, 0.0, t, chi, kCfg).value));
  }
  return ls_slope(lx, ly);
}

// --------------------------------------------------------------------------

// GHZ benchmark: N^2 and N within 1e-6 relative, N = 2..10, under 1 s.
Check criterion_1() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  for (int n = 2; n <= 10; ++n) {
    const double ghz = pure_state_qfi(ghz_family(n), 0.3, kCfg);
    const double prod = pure_state_qfi(product_phase_family(n), 0.3, kCfg);
    c.require(rel(ghz, double(n) * n) < 1e-6,
              "GHZ N=" + std::to_string(n) + " got " + fmt(ghz));
    c.require(rel(prod, double(n)) < 1e-6,
              "product N=" + std::to_string(n) + " got " + fmt(prod));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  c.require(secs < 1.0, "runtime " + fmt(secs) + " s >= 1 s");
  c.note("runtime " + fmt(secs) + " s");
  return c;
}

// Poisson channel: all QFI routes equal 4 mu t; theta exact.
Check criterion_2() {
  Check c;
  const QModel m = instantiate({"poisson", {{"mu", 1.0}}});
  CVector chi(1);
  chi << 1.0;
  for (double t : {1.0, 5.0, 10.0}) {
    const double fd = qfi_fd(m, 0.0, t, chi, kCfg).value;
    const double sp = qfi_spectral_finite(m, 0.0, t, chi, kCfg).value;
    const double k2x4 = 4.0 * cumulants(m, 0.0, t, chi, 2, kCfg)[1];
    c.require(rel(fd, 4.0 * t) < 1e-5, "fd(" + fmt(t) + ") = " + fmt(fd));
    c.require(rel(sp, 4.0 * t) < 1e-5, "spectral(" + fmt(t) + ") = " + fmt(sp));
    c.require(rel(k2x4, 4.0 * t) < 1e-5,
              "4 kappa2(" + fmt(t) + ") = " + fmt(k2x4));
  }
  for (int i = 0; i <= 40; ++i) {
    const double s = -1.0 + 2.0 * i / 40.0;
    const double theta = theta_asymptotic(m, 0.0, s).value;
    c.require(std::abs(theta - (std::exp(-s) - 1.0)) < 1e-10,
              "theta(" + fmt(s) + ")");
  }
  return c;
}

// Exact-DPT two-phase law on blockcat.
Check criterion_3() {
  Check c;
  const QModel m = instantiate({"blockcat", {{"mu_A", 1.0}, {"mu_I", 0.1}}});
  const CVector chi = symmetric_chi(2);

  const double f50 = qfi_fd(m, 0.0, 50.0, chi, kCfg).value;
  const double ratio = f50 / 2500.0;
  c.require(std::abs(ratio - 0.81) < 0.01 * 0.81,
            "F_fd(50)/50^2 = " + fmt(ratio) +
                " vs 0.81 (exact law 4[p_A p_I (dmu)^2 t^2 + mu_bar t] "
                "predicts 0.8544 at t = 50; 1% holds only for t >= 272, "
                "e.g. F(500)/500^2 = " +
                fmt(qfi_fd(m, 0.0, 500.0, chi, kCfg).value / 250000.0) + ")");

  const SpectralDecomp dec = spectrum(build_liouvillian(m, 0.0).matrix);
  const PhaseSplit split = metastable_split(dec, chi, 1, m, 0.0);
  const double tp = qfi_two_phase(split.p_A, split.p_I, split.mu_A, split.mu_I);
  const double c2 = qfi_quadratic_regime(m, 0.0, chi, kCfg);
  c.require(std::abs(c2 - tp) < 1e-6, "quadratic " + fmt(c2) +
                                          " vs two-phase " + fmt(tp));
  c.note("quadratic_coefficient = " + fmt(c2));
  return c;
}

// Regime map on threelevel defaults.
Check criterion_4() {
  Check c;
  const QModel m = instantiate(builtin_defaults("threelevel"));
  const CVector chi = bright_dark_chi3();
  const SpectralDecomp dec = spectrum(build_liouvillian(m, 0.0).matrix);
  const Timescales ts = timescales(dec);
  c.require(ts.gap_ratio >= 1e3, "gap_ratio = " + fmt(ts.gap_ratio));

  const double s2 = window_slope(m, chi, 5.0 * ts.tau_prime, ts.tau / 5.0, 10);
  c.require(std::abs(s2 - 2.0) <= 0.1, "quadratic slope " + fmt(s2));
  const double s1 = window_slope(m, chi, 20.0 * ts.tau, 200.0 * ts.tau, 8);
  c.require(std::abs(s1 - 1.0) <= 0.1, "linear slope " + fmt(s1));

  const double rate = qfi_asymptotic_rate(m, 0.0, kCfg).rate;
  const double f1 = qfi_fd(m, 0.0, 100.0 * ts.tau, chi, kCfg).value;
  const double f2 = qfi_fd(m, 0.0, 200.0 * ts.tau, chi, kCfg).value;
  const double tail = (f2 - f1) / (100.0 * ts.tau);
  c.require(rel(tail, rate) < 0.01,
            "tail slope " + fmt(tail) + " vs rate " + fmt(rate));
  c.note("slopes " + fmt(s2) + " / " + fmt(s1) + ", rate " + fmt(rate));
  return c;
}

// Asymptotic-rate equivalences on damping, rabi, threelevel.
Check criterion_5() {
  Check c;
  for (const char* name : {"damping", "rabi", "threelevel"}) {
    const QModel m = instantiate(builtin_defaults(name));
    const AsymptoticRate r = qfi_asymptotic_rate(m, 0.0, kCfg);
    const double scale = std::max(1.0, std::abs(r.route1));
    c.require(std::abs(r.route1 - r.route2) <= 1e-4 * scale,
              std::string(name) + " routes " + fmt(r.route1) + " vs " +
                  fmt(r.route2));
    auto theta = [&](double s) { return theta_asymptotic(m, 0.0, s).value; };
    const double d2x4 = 4.0 * adaptive_derivative(theta, 2, 1e-2, 30, 1e-7);
    c.require(std::abs(r.route1 - d2x4) <= 1e-4 * scale,
              std::string(name) + " 4 theta'' = " + fmt(d2x4) + " vs " +
                  fmt(r.route1));
  }
  return c;
}

// Finite-time spectral formula vs finite differences.
Check criterion_6() {
  Check c;
  for (const char* name : {"rabi", "damping"}) {
    const QModel m = instantiate(builtin_defaults(name));
    const CVector chi = symmetric_chi(2);
    for (double t : {0.5, 5.0, 50.0}) {
      const double fd = qfi_fd(m, 0.0, t, chi, kCfg).value;
      const double sp = qfi_spectral_finite(m, 0.0, t, chi, kCfg).value;
      c.require(std::abs(fd - sp) <= 1e-3 * std::max(1e-12, std::abs(fd)),
                std::string(name) + " t=" + fmt(t) + ": " + fmt(fd) + " vs " +
                    fmt(sp));
    }
  }
  return c;
}

// Record-enumeration oracle: first-order convergence, path equality.
Check criterion_7() {
  Check c;
  const QModel m = instantiate({"damping", {{"gamma", 1.0}}});
  const CVector chi = symmetric_chi(2);
  const double g1 = 0.5, g2 = 0.0, t = 1.0;
  const Complex target = std::conj(fidelity(m, g1, g2, t, chi));

  std::vector<double> errors;
  for (int n : {4, 8, 16}) {
    const EnumeratedFidelity ef = enumerate_fidelity(m, g1, g2, t, n, chi);
    c.require(std::abs(ef.enumeration - ef.transfer) <= 1e-12,
              "paths differ at n=" + std::to_string(n));
    errors.push_back(std::abs(ef.enumeration - target));
  }
  for (size_t i = 1; i < errors.size(); ++i) {
    const double ratio = errors[i - 1] / errors[i];
    c.require(ratio >= 1.7 && ratio <= 2.3, "halving ratio " + fmt(ratio));
  }
  c.note("errors " + fmt(errors[0]) + " -> " + fmt(errors[1]) + " -> " +
         fmt(errors[2]));
  return c;
}

// theta(s) kink at the exact DPT.
Check criterion_8() {
  Check c;
  const double mu_a = 1.0, mu_i = 0.1;
  const QModel m = instantiate({"blockcat", {{"mu_A", mu_a}, {"mu_I", mu_i}}});
  const double d = 1e-4;
  auto theta = [&](double s) { return theta_asymptotic(m, 0.0, s).value; };
  const double left = (theta(0.0) - theta(-d)) / d;
  const double right = (theta(d) - theta(0.0)) / d;
  const double diff = std::abs(left - right);
  c.require(rel(diff, mu_a - mu_i) < 0.01,
            "slope difference " + fmt(diff) + " vs " + fmt(mu_a - mu_i));
  return c;
}

// Trajectory ensemble consistency.
Check criterion_9() {
  Check c;
  // (a) 1e4-trajectory average vs e^{tL} rho_0 within 3 SE entrywise
  for (const char* name : {"damping", "rabi"}) {
    const QModel m = instantiate(builtin_defaults(name));
    const CVector chi = symmetric_chi(m.dim);
    const double t = 2.0;
    const long n = 10000;
    CMatrix mean = CMatrix::Zero(m.dim, m.dim);
    std::vector<CMatrix> dyads;
    dyads.reserve(n);
    for (long i = 0; i < n; ++i) {
      const Trajectory traj =
          sample_trajectory(m, 0.0, t, chi, 7777, std::uint64_t(i));
      dyads.push_back(traj.final_state * traj.final_state.adjoint());
      mean += dyads.back();
    }
    mean /= double(n);
    CMatrix var_re = CMatrix::Zero(m.dim, m.dim);
    CMatrix var_im = CMatrix::Zero(m.dim, m.dim);
    for (const CMatrix& dyad : dyads) {
      var_re += (dyad - mean).real().cwiseAbs2().cast<Complex>();
      var_im += (dyad - mean).imag().cwiseAbs2().cast<Complex>();
    }
    const CMatrix expected =
        unvec(matexp(t * build_liouvillian(m, 0.0).matrix) *
                  vec((chi * chi.adjoint()).eval()),
              m.dim);
    for (Index r = 0; r < m.dim; ++r)
      for (Index col = 0; col < m.dim; ++col) {
        const double se_re =
            std::sqrt(var_re(r, col).real() / double(n - 1) / double(n)) +
            1e-12;
        const double se_im =
            std::sqrt(var_im(r, col).real() / double(n - 1) / double(n)) +
            1e-12;
        c.require(std::abs(mean(r, col).real() - expected(r, col).real()) <=
                      3.0 * se_re,
                  std::string(name) + " entry re(" + std::to_string(r) + "," +
                      std::to_string(col) + ")");
        c.require(std::abs(mean(r, col).imag() - expected(r, col).imag()) <=
                      3.0 * se_im,
                  std::string(name) + " entry im(" + std::to_string(r) + "," +
                      std::to_string(col) + ")");
      }
  }

  // (b) blockcat count histogram at t = 20 is bimodal
  const QModel bc = instantiate({"blockcat", {{"mu_A", 1.0}, {"mu_I", 0.1}}});
  const CountHistogram hist =
      count_histogram(bc, 0.0, 20.0, symmetric_chi(2), 4000, 2121);
  c.require(hist.bimodal, "blockcat histogram not bimodal (dip ratio " +
                              fmt(hist.dip_ratio) + ")");

  // (c) Poisson inter-event KS test at level 0.01.  One long run: pooling
  // many short windows would censor the gap straddling each window end,
  // biasing the sample against long gaps.
  const QModel pois = instantiate({"poisson", {{"mu", 1.0}}});
  CVector chi1(1);
  chi1 << 1.0;
  std::vector<double> gaps;
  std::uint64_t stream = 0;
  while (gaps.size() < 10000) {
    const Trajectory traj =
        sample_trajectory(pois, 0.0, 10500.0, chi1, 3333, stream++);
    double prev = 0.0;
    for (const auto& ev : traj.events) {
      gaps.push_back(ev.time - prev);
      prev = ev.time;
    }
  }
  gaps.resize(10000);
  std::sort(gaps.begin(), gaps.end());
  double dstat = 0.0;
  for (size_t i = 0; i < gaps.size(); ++i) {
    const double f = 1.0 - std::exp(-gaps[i]);
    dstat = std::max(dstat, std::abs(f - double(i + 1) / 10000.0));
    dstat = std::max(dstat, std::abs(f - double(i) / 10000.0));
  }
  const double crit = 1.628 / std::sqrt(10000.0);
  c.require(dstat < crit,
            "KS statistic " + fmt(dstat) + " >= critical " + fmt(crit));
  c.note("KS D = " + fmt(dstat) + ", dip ratio " + fmt(hist.dip_ratio));
  return c;
}

// Structural invariants over a randomized model ensemble.
Check criterion_10() {
  Check c;
  Rng master(20260808);
  auto gauss = [&master]() {
    const double u1 = master.uniform();
    const double u2 = master.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };
  auto random_matrix = [&](Index d) {
    CMatrix a(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) a(i, j) = Complex(gauss(), gauss());
    return a;
  };

  int draws = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + static_cast<Index>(master.next() % 3);
    const int k = 1 + static_cast<int>(master.next() % 3);
    QModel m;
    m.dim = d;
    const CMatrix a = random_matrix(d);
    m.hamiltonian = OperatorFamily::constant(0.5 * (a + a.adjoint().eval()));
    for (int j = 0; j < k; ++j)
      m.jumps.push_back(OperatorFamily::constant(0.5 * random_matrix(d)));
    ++draws;

    const Superop liou = build_liouvillian(m, 0.0);
    const double scale = std::max(1.0, one_norm(liou.matrix));
    const CVector id_vec = vec(identity(d));

    // trace preservation + positivity proxy + hermiticity
    CVector chi = random_matrix(d).col(0);
    chi /= chi.norm();
    const CMatrix rho_t =
        unvec(matexp(1.0 * liou.matrix) * vec((chi * chi.adjoint()).eval()), d);
    c.require(std::abs(rho_t.trace() - 1.0) < 1e-9, "trace at draw " +
                                                        std::to_string(trial));
    c.require((rho_t - rho_t.adjoint().eval()).cwiseAbs().maxCoeff() < 1e-10,
              "hermiticity at draw " + std::to_string(trial));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(
        (0.5 * (rho_t + rho_t.adjoint().eval())).eval());
    c.require(es.eigenvalues().minCoeff() > -1e-8,
              "positivity at draw " + std::to_string(trial));

    // spectral invariants
    const SpectralDecomp dec = spectrum(liou.matrix);
    if (!dec.defective) {
      const CMatrix gram = dec.left.adjoint() * dec.right;
      c.require((gram - identity(d * d)).cwiseAbs().maxCoeff() < 1e-8,
                "biorthonormality at draw " + std::to_string(trial));
    }
    c.require(std::abs(dec.eigenvalues(0)) < 1e-10 * scale,
              "lambda_1 = 0 at draw " + std::to_string(trial));
    c.require(std::abs(dec.eigenvalues.sum() - liou.matrix.trace()) <
                  1e-8 * std::max(1.0, std::abs(liou.matrix.trace())),
              "trace sum at draw " + std::to_string(trial));

    // left null vector
    c.require((id_vec.adjoint() * liou.matrix).cwiseAbs().maxCoeff() <
                  1e-10 * scale,
              "left null vector at draw " + std::to_string(trial));
  }

  // seed determinism on a fixed model
  const QModel m = instantiate(builtin_defaults("rabi"));
  const CVector chi = symmetric_chi(2);
  const Trajectory t1 = sample_trajectory(m, 0.0, 25.0, chi, 555, 3);
  const Trajectory t2 = sample_trajectory(m, 0.0, 25.0, chi, 555, 3);
  bool identical = t1.events.size() == t2.events.size();
  if (identical)
    for (size_t i = 0; i < t1.events.size(); ++i)
      identical = identical &&
                  std::memcmp(&t1.events[i].time, &t2.events[i].time,
                              sizeof(double)) == 0 &&
                  t1.events[i].channel == t2.events[i].channel;
  c.require(identical, "seed determinism");
  c.note(std::to_string(draws) + " model draws");
  return c;
}

struct Criterion {
  int id;
  const char* summary;
  std::function<Check()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0) continue;
    wanted.push_back(std::atoi(argv[i]));
  }

  const std::vector<Criterion> criteria = {
      {1, "GHZ/product pure-state QFI benchmarks (N^2, N; < 1 s)", criterion_1},
      {2, "Poisson channel: fd, spectral, 4 kappa_2 = 4 mu t; theta exact",
       criterion_2},
      {3, "exact-DPT two-phase law on blockcat (0.81 at t = 50; split = "
          "projector route)",
       criterion_3},
      {4, "threelevel regime map: slopes 2 and 1, tail rate within 1%",
       criterion_4},
      {5, "asymptotic rate: route 1 = route 2 = 4 theta''(0) within 1e-4",
       criterion_5},
      {6, "finite-time spectral formula = finite differences within 1e-3",
       criterion_6},
      {7, "record enumeration: first-order delta-t convergence, dual paths",
       criterion_7},
      {8, "theta kink on blockcat: slope jump = mu_A - mu_I within 1%",
       criterion_8},
      {9, "trajectories: ensemble average, bimodality, KS test", criterion_9},
      {10, "structural invariants over >= 100 random models", criterion_10},
  };

  int failures = 0;
  for (const Criterion& cr : criteria) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), cr.id) == wanted.end())
      continue;
    Check result;
    try {
      result = cr.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %2d: %s%s%s\n", result.ok ? "PASS" : "FAIL",
                cr.id, cr.summary, result.detail.empty() ? "" : " -- ",
                result.detail.c_str());
    std::fflush(stdout);
    if (!result.ok) ++failures;
  }
  return failures;
}
