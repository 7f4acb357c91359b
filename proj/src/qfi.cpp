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

#include "oqfi/qfi.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <numbers>

namespace oqfi {

// ---------------------------------------------------------------------------
// stencil machinery

std::vector<double> fd_weights(int order, const std::vector<double>& x) {
  // Fornberg (1988), weights at z = 0 for derivative `order`.
  const int n = static_cast<int>(x.size()) - 1;
  if (order < 0 || order > n)
    throw PreconditionError("fd_weights: derivative order exceeds stencil");
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(order + 1, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = x[0];
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i];
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][order];
  return w;
}

Complex mixed_second_derivative(
    const std::function<Complex(double, double)>& f, double h,
    bool richardson) {
  auto level = [&](double hh) {
    return (f(hh, hh) - f(hh, -hh) - f(-hh, hh) + f(-hh, -hh)) /
           (4.0 * hh * hh);
  };
  const Complex d = level(h);
  if (!richardson) return d;
  const Complex dhalf = level(h / 2.0);
  return (4.0 * dhalf - d) / 3.0;
}

namespace {

// Shared halving driver.  Near a DPT the truncation error of a fixed
// step can grow for the first few halvings (the function has structure
// on the scale of the inverse correlation time) and only then enter the
// h^2 regime, before cancellation noise takes over at tiny h.  So: halve
// down the whole budget unless two successive estimates agree to
// rel_tol, and fall back to the pair with the smallest disagreement.
template <typename Value>
Value converge_by_halving(const std::function<Value(double)>& estimate,
                          double h0, int max_halvings, double rel_tol) {
  Value prev = estimate(h0);
  Value best = prev;
  double best_diff = std::numeric_limits<double>::infinity();
  double h = h0;
  for (int k = 0; k < max_halvings; ++k) {
    h /= 2.0;
    const Value cur = estimate(h);
    const double diff = std::abs(cur - prev);
    if (diff <= rel_tol * std::max(1.0, std::abs(cur))) return cur;
    if (diff < best_diff) {
      best_diff = diff;
      best = cur;
    }
    prev = cur;
  }
  return best;
}

}  // namespace

double adaptive_derivative(const std::function<double(double)>& f, int order,
                           double h0, int max_halvings, double rel_tol) {
  auto single = [&](double h) {
    std::vector<double> offsets(2 * order + 1);
    for (int i = 0; i <= 2 * order; ++i) offsets[i] = (i - order) * h;
    const std::vector<double> w = fd_weights(order, offsets);
    double acc = 0.0;
    for (size_t i = 0; i < offsets.size(); ++i) acc += w[i] * f(offsets[i]);
    return acc;
  };
  std::function<double(double)> est = [&](double h) {
    // One Richardson level assuming leading error O(h^2); a higher true
    // order only improves the combination.
    return (4.0 * single(h / 2.0) - single(h)) / 3.0;
  };
  return converge_by_halving(est, h0, max_halvings, rel_tol);
}

// ---------------------------------------------------------------------------
// shared mixed log-derivative core

namespace {

struct LogStencilResult {
  Complex qfi_raw;  // 4 * mixed second derivative of log f
  double h_used = 0.0;
  int halvings = 0;
  bool winding_flagged = false;
};

// The four stencil corners of log f(g+a, g+b).  The phase-winding guard
// halves h while any two corners' imaginary parts differ by more than
// pi/2: for long times the fidelity phase rotates fast and the
// principal-branch log would alias.  The amplitude guard halves while
// |Re log f| exceeds a small trust bound: near an exact DPT the count
// distribution is bimodal with sigma of the same order as the mean, and
// the stencil must stay inside the quadratic regime of the log-fidelity
// ((2 h sigma)^2 small) or the higher cumulants bias the difference.  A
// fidelity magnitude below 1e-12 (log unstable) is treated the same way;
// each condition is an error only once the halving budget is spent.
LogStencilResult mixed_log_qfi(
    const std::function<Complex(double, double)>& f, double h0,
    bool richardson, int max_halvings, bool winding_guard) {
  constexpr double kAmplitudeTrust = 0.03;
  auto corners = [&](double h, Complex out[4]) -> bool {
    const double a[4] = {h, h, -h, -h};
    const double b[4] = {h, -h, h, -h};
    for (int i = 0; i < 4; ++i) {
      const Complex fi = f(a[i], b[i]);
      if (std::abs(fi) < 1e-12) return false;
      out[i] = std::log(fi);
    }
    return true;
  };
  auto winding = [](const Complex c[4]) {
    double w = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        w = std::max(w, std::abs(c[i].imag() - c[j].imag()));
    return w;
  };
  auto amplitude = [](const Complex c[4]) {
    double a = 0.0;
    for (int i = 0; i < 4; ++i) a = std::max(a, std::abs(c[i].real()));
    return a;
  };

  LogStencilResult res;
  double h = h0;
  Complex lg[4];
  bool ok = corners(h, lg);
  if (!ok && !winding_guard)
    throw NumericalError(
        "qfi stencil: fidelity magnitude below 1e-12, log unstable");
  if (winding_guard) {
    int k = 0;
    while (!ok || winding(lg) > std::numbers::pi / 2.0 ||
           amplitude(lg) > kAmplitudeTrust) {
      if (++k > max_halvings)
        throw NumericalError(
            ok ? "qfi stencil: phase winding persists after max halvings"
               : "qfi stencil: fidelity underflow persists after max halvings");
      h /= 2.0;
      ok = corners(h, lg);
    }
    res.halvings = k;
    res.winding_flagged = k > 0;
  }

  auto second_diff = [](const Complex c[4], double hh) {
    return (c[0] - c[1] - c[2] + c[3]) / (4.0 * hh * hh);
  };
  Complex d = second_diff(lg, h);
  if (richardson) {
    Complex lg2[4];
    corners(h / 2.0, lg2);
    d = (4.0 * second_diff(lg2, h / 2.0) - d) / 3.0;
  }
  res.qfi_raw = 4.0 * d;
  res.h_used = h;
  return res;
}

// Clamp policy for the real part of the raw estimate.
double finalize_qfi(const LogStencilResult& res, QfiDiagnostics* diag) {
  double value = res.qfi_raw.real();
  const double im = std::abs(res.qfi_raw.imag());
  bool clamped = false;
  if (value < 0.0) {
    if (value < -1e-6)
      throw NumericalError("qfi: estimate " + std::to_string(value) +
                           " below the -1e-6 clamp window");
    value = 0.0;
    clamped = true;
  }
  if (im > 1e-6 * std::max(1.0, value))
    throw NumericalError("qfi: imaginary residue " + std::to_string(im) +
                         " exceeds 1e-6 * max(1, value)");
  if (diag) {
    diag->h_used = res.h_used;
    diag->im_residue = im;
    diag->clamped = clamped;
    diag->halvings = res.halvings;
    diag->winding_flagged = res.winding_flagged;
  }
  return value;
}

}  // namespace

std::string to_string(QfiMethod m) {
  switch (m) {
    case QfiMethod::fd: return "fd";
    case QfiMethod::spectral_finite: return "spectral_finite";
    case QfiMethod::asymptotic_linearization: return "asymptotic_linearization";
    case QfiMethod::quadratic_coefficient: return "quadratic_coefficient";
    case QfiMethod::variance4: return "variance4";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// operations

double pure_state_qfi(const StateFamily& family, double g,
                      const StencilConfig& cfg, QfiDiagnostics* diag) {
  auto state = [&](double offset) {
    CVector psi = family(g + offset);
    if (std::abs(psi.norm() - 1.0) > 1e-12)
      throw PreconditionError(
          "pure_state_qfi: family is not normalized at g + " +
          std::to_string(offset));
    return psi;
  };
  auto f = [&](double a, double b) { return state(a).dot(state(b)); };
  const LogStencilResult res =
      mixed_log_qfi(f, cfg.step(g), cfg.richardson, cfg.max_halvings,
                    /*winding_guard=*/false);
  return finalize_qfi(res, diag);
}

Complex fidelity(const QModel& model, double g1, double g2, double t,
                 const CVector& chi) {
  if (t < 0.0) throw PreconditionError("fidelity: t must be >= 0");
  if (std::abs(chi.norm() - 1.0) > 1e-9)
    throw PreconditionError("fidelity: chi is not normalized");
  const Superop def = build_deformed(model, g1, g2);
  const CVector rho0 = vec((chi * chi.adjoint()).eval());
  const CVector id_vec = vec(identity(model.dim));
  return id_vec.dot(matexp(t * def.matrix) * rho0);
}

QfiPoint qfi_fd(const QModel& model, double g, double t, const CVector& chi,
                const StencilConfig& cfg) {
  auto f = [&](double a, double b) {
    return fidelity(model, g + a, g + b, t, chi);
  };
  QfiPoint p;
  p.t = t;
  p.method = QfiMethod::fd;
  const LogStencilResult res = mixed_log_qfi(
      f, cfg.step(g), cfg.richardson, cfg.max_halvings, /*winding_guard=*/true);
  p.value = finalize_qfi(res, &p.diag);
  return p;
}

DeformedDerivs deformed_derivatives(const QModel& model, double g,
                                    const StencilConfig& cfg) {
  auto def = [&](double a, double b) {
    return build_deformed(model, g + a, g + b).matrix;
  };
  auto level = [&](double h) {
    DeformedDerivs d;
    d.d1 = (def(h, 0) - def(-h, 0)) / (2.0 * h);
    d.d2 = (def(0, h) - def(0, -h)) / (2.0 * h);
    d.d12 = (def(h, h) - def(h, -h) - def(-h, h) + def(-h, -h)) /
            (4.0 * h * h);
    return d;
  };
  const double h = cfg.step(g);
  DeformedDerivs a = level(h);
  if (!cfg.richardson) return a;
  const DeformedDerivs b = level(h / 2.0);
  a.d1 = (4.0 * b.d1 - a.d1) / 3.0;
  a.d2 = (4.0 * b.d2 - a.d2) / 3.0;
  a.d12 = (4.0 * b.d12 - a.d12) / 3.0;
  return a;
}

QfiPoint qfi_spectral_finite(const QModel& model, double g, double t,
                             const CVector& chi, const StencilConfig& cfg) {
  const Superop liou = build_liouvillian(model, g);
  const SpectralDecomp dec = spectrum(liou.matrix);
  if (dec.defective)
    throw PreconditionError("qfi_spectral_finite: defective generator");
  if (dec.multiplicity(0) > 1)
    throw DegenerateStationaryError(
        "qfi_spectral_finite: degenerate stationary state (degeneracy " +
            std::to_string(dec.multiplicity(0)) + "); use the two-phase route",
        dec.multiplicity(0));

  const Index d = model.dim;
  const CVector rho_ss = vec(stationary_state(liou, dec));
  const CVector rho0 = vec((chi * chi.adjoint()).eval());
  const CVector id_vec = vec(identity(d));
  const DeformedDerivs dl = deformed_derivatives(model, g, cfg);

  auto tr = [&](const CVector& v) { return id_vec.dot(v); };

  const CMatrix rt = restricted_function(
      dec, [t](Complex lam) { return t * phi1(t * lam); }, {0});
  const CMatrix st = restricted_function(
      dec, [t](Complex lam) { return t * t * phi2(t * lam); }, {0});
  const CMatrix linv =
      restricted_function(dec, [](Complex lam) { return 1.0 / lam; }, {0});

  const Complex m1 = tr(dl.d1 * rho_ss);
  const Complex m12 = tr(dl.d12 * rho_ss);

  // Double-sum integral kernel: t e^{t l_k}/l_k on the diagonal and
  // (e^{t l_j} - e^{t l_k})/(l_k (l_j - l_k)) off it, with the analytic
  // limit substituted when eigenvalues coincide within group_tol.
  const Index n = dec.size();
  CMatrix wt = CMatrix::Zero(n, n);
  for (Index k = 1; k < n; ++k) {
    const Complex lk = dec.eigenvalues(k);
    for (Index j = 1; j < n; ++j) {
      const Complex lj = dec.eigenvalues(j);
      Complex coeff;
      if (j == k || std::abs(lj - lk) < dec.group_tol)
        coeff = t * std::exp(t * lk) / lk;
      else
        coeff = (std::exp(t * lj) - std::exp(t * lk)) / (lk * (lj - lk));
      const Complex dkj = dec.left.col(k).dot(dl.d2 * dec.right.col(j));
      wt += (coeff * dkj) * (dec.right.col(k) * dec.left.col(j).adjoint());
    }
  }

  const Complex a_term = t * m1 + tr(dl.d1 * (rt * rho0));
  Complex total = 0.0;
  total += -4.0 * std::norm(a_term);
  total += 4.0 * (t * m12 + tr(dl.d12 * (rt * rho0)));
  total += 4.0 * t * t * std::norm(m1);
  total += 8.0 * std::real(m1 * tr(dl.d2 * (st * rho0)));
  total += 8.0 * std::real(tr(dl.d1 * (st * (dl.d2 * rho_ss))));
  total += -8.0 * std::real(tr(dl.d1 * (linv * (dl.d2 * (rt * rho0)))));
  total += 8.0 * std::real(tr(dl.d1 * (wt * rho0)));

  QfiPoint p;
  p.t = t;
  p.method = QfiMethod::spectral_finite;
  LogStencilResult res;
  res.qfi_raw = total;
  res.h_used = cfg.step(g);
  p.value = finalize_qfi(res, &p.diag);
  return p;
}

AsymptoticRate qfi_asymptotic_rate(const QModel& model, double g,
                                   const StencilConfig& cfg) {
  const Superop liou = build_liouvillian(model, g);
  const SpectralDecomp dec = spectrum(liou.matrix);
  if (dec.defective)
    throw PreconditionError("qfi_asymptotic_rate: defective generator");
  if (dec.multiplicity(0) > 1)
    throw DegenerateStationaryError(
        "qfi_asymptotic_rate: degenerate stationary state (degeneracy " +
            std::to_string(dec.multiplicity(0)) + ")",
        dec.multiplicity(0));

  const CVector rho_ss = vec(stationary_state(liou, dec));
  const CVector ss_dir = rho_ss.normalized();
  const CVector id_vec = vec(identity(model.dim));

  // Route 1: mixed derivative of the top deformed eigenvalue, following
  // the branch continuously connected to rho_ss.  Near a DPT the slow
  // eigenvectors mix strongly once the deformation exceeds the gap, so a
  // stencil level whose branch tracking drops below 0.9 overlap is
  // discarded and the step halved; it is an error only if no level ever
  // tracks.
  auto lambda1 = [&](double a, double b) -> std::optional<Complex> {
    const SpectralDecomp dd =
        spectrum(build_deformed(model, g + a, g + b).matrix);
    if (dd.defective)
      throw PreconditionError(
          "qfi_asymptotic_rate: deformed generator defective");
    Index best = 0;
    double best_ov = -1.0;
    for (Index k = 0; k < dd.size(); ++k) {
      const double ov = std::abs(dd.right.col(k).dot(ss_dir));
      if (ov > best_ov) {
        best_ov = ov;
        best = k;
      }
    }
    if (best_ov < 0.9) return std::nullopt;
    return dd.eigenvalues(best);
  };
  auto level = [&](double h) -> std::optional<Complex> {
    auto second_diff = [&](double hh) -> std::optional<Complex> {
      Complex c[4];
      const double a[4] = {hh, hh, -hh, -hh};
      const double b[4] = {hh, -hh, hh, -hh};
      for (int i = 0; i < 4; ++i) {
        const auto v = lambda1(a[i], b[i]);
        if (!v) return std::nullopt;
        c[i] = *v;
      }
      return (c[0] - c[1] - c[2] + c[3]) / (4.0 * hh * hh);
    };
    const auto d = second_diff(h);
    const auto dhalf = second_diff(h / 2.0);
    if (!d || !dhalf) return std::nullopt;
    return (4.0 * *dhalf - *d) / 3.0;
  };

  std::optional<Complex> prev;
  std::optional<Complex> best;
  double best_diff = std::numeric_limits<double>::infinity();
  double h = cfg.step(g);
  for (int k = 0; k <= cfg.max_halvings; ++k, h /= 2.0) {
    const auto cur = level(h);
    if (!cur) continue;
    if (prev) {
      const double diff = std::abs(*cur - *prev);
      if (diff <= 1e-6 * std::max(1.0, std::abs(*cur))) {
        best = cur;
        best_diff = diff;
        break;
      }
      if (diff < best_diff) {
        best_diff = diff;
        best = cur;
      }
    }
    prev = cur;
  }
  if (!best)
    throw PreconditionError(
        "qfi_asymptotic_rate: branch-tracking ambiguity (no stencil level "
        "reached eigenvector overlap >= 0.9)");
  const double route1 = 4.0 * best->real();

  // Route 2: stationary-state expression through the restricted inverse.
  const DeformedDerivs dl = deformed_derivatives(model, g, cfg);
  const CMatrix linv =
      restricted_function(dec, [](Complex lam) { return 1.0 / lam; }, {0});
  const double route2 =
      4.0 * std::real(id_vec.dot(dl.d12 * rho_ss)) -
      8.0 * std::real(id_vec.dot(dl.d1 * (linv * (dl.d2 * rho_ss))));

  if (std::abs(route1 - route2) > 1e-4 * std::max(1.0, std::abs(route1)))
    throw NumericalError(
        "qfi_asymptotic_rate: routes disagree (route1 = " +
        std::to_string(route1) + ", route2 = " + std::to_string(route2) + ")");
  return AsymptoticRate{route1, route1, route2};
}

double qfi_quadratic_regime(const QModel& model, double g, const CVector& chi,
                            const StencilConfig& cfg) {
  const Superop liou = build_liouvillian(model, g);
  const SpectralDecomp dec = spectrum(liou.matrix);
  const CMatrix proj = projector_P(dec);  // enforces gap_ratio > 10

  const CVector rho0 = vec((chi * chi.adjoint()).eval());
  const CVector p_rho0 = proj * rho0;
  const CVector id_vec = vec(identity(model.dim));

  auto def = [&](double a, double b) {
    return build_deformed(model, g + a, g + b).matrix;
  };
  auto term_a = [&](double a, double b) -> Complex {
    return id_vec.dot(def(a, 0) * (proj * (def(0, b) * p_rho0)));
  };
  const Complex mixed =
      mixed_second_derivative(term_a, cfg.step(g), cfg.richardson);

  auto term_b = [&](double a) { return id_vec.dot(def(a, 0) * p_rho0); };
  const double h = cfg.step(g);
  Complex db = (term_b(h) - term_b(-h)) / (2.0 * h);
  if (cfg.richardson) {
    const Complex db2 = (term_b(h / 2.0) - term_b(-h / 2.0)) / h;
    db = (4.0 * db2 - db) / 3.0;
  }

  return 4.0 * mixed.real() - std::norm(2.0 * db);
}

double qfi_two_phase(double p_a, double p_i, double mu_a, double mu_i) {
  const double eps = 1e-9;
  if (p_a < -eps || p_a > 1.0 + eps || p_i < -eps || p_i > 1.0 + eps)
    throw PreconditionError("qfi_two_phase: probabilities must lie in [0, 1]");
  if (p_a + p_i > 1.0 + eps)
    throw PreconditionError("qfi_two_phase: p_A + p_I must not exceed 1");
  if (!std::isfinite(mu_a) || !std::isfinite(mu_i))
    throw PreconditionError("qfi_two_phase: rates must be finite");
  return 4.0 * p_a * p_i * (mu_a - mu_i) * (mu_a - mu_i);
}

StateFamily ghz_family(int n_qubits) {
  if (n_qubits < 1) throw PreconditionError("ghz_family: need n >= 1");
  const Index dim = Index{1} << n_qubits;
  return [n_qubits, dim](double g) {
    CVector psi = CVector::Zero(dim);
    psi(0) = 1.0 / std::sqrt(2.0);
    psi(dim - 1) = std::exp(-kI * (double(n_qubits) * g)) / std::sqrt(2.0);
    return psi;
  };
}

StateFamily product_phase_family(int n_qubits) {
  if (n_qubits < 1) throw PreconditionError("product_phase_family: need n >= 1");
  const Index dim = Index{1} << n_qubits;
  return [dim](double g) {
    CVector psi(dim);
    const double amp = 1.0 / std::sqrt(double(dim));
    for (Index b = 0; b < dim; ++b) {
      const int ones = std::popcount(static_cast<unsigned long long>(b));
      psi(b) = amp * std::exp(-kI * (double(ones) * g));
    }
    return psi;
  };
}

}  // namespace oqfi
