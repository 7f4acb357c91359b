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

#include "oqfi/counting.hpp"

#include <cmath>
#include <numbers>

namespace oqfi {

namespace {

int counting_channel(const QModel& model) {
  return model.phase_channel.value_or(1);
}

}  // namespace

Complex cgf(const QModel& model, double g, double s, double t,
            const CVector& chi) {
  if (t < 0.0) throw PreconditionError("cgf: t must be >= 0");
  if (std::abs(chi.norm() - 1.0) > 1e-9)
    throw PreconditionError("cgf: chi is not normalized");
  const Superop tilted = build_counting(model, g, s, counting_channel(model));
  const CVector rho0 = vec((chi * chi.adjoint()).eval());
  const CVector id_vec = vec(identity(model.dim));
  const Complex trace = id_vec.dot(matexp(t * tilted.matrix) * rho0);
  if (std::abs(trace) < 1e-300)
    throw NumericalError("cgf: trace underflow at s = " + std::to_string(s));
  return std::log(trace);
}

ThetaValue theta_asymptotic(const QModel& model, double g, double s) {
  const Superop tilted = build_counting(model, g, s, counting_channel(model));
  const SpectralDecomp dec = spectrum(tilted.matrix);
  if (dec.defective)
    throw PreconditionError("theta_asymptotic: defective tilted generator");
  const Complex top = dec.eigenvalues(0);
  const double scale = std::max(1.0, dec.eigenvalues.cwiseAbs().maxCoeff());
  ThetaValue out;
  out.value = top.real();
  out.im_residue = std::abs(top.imag());
  out.flagged = out.im_residue > 1e-10 * scale;
  return out;
}

std::vector<double> cumulants(const QModel& model, double g, double t,
                              const CVector& chi, int max_order,
                              const StencilConfig& cfg) {
  if (max_order < 1 || max_order > 4)
    throw PreconditionError("cumulants: max_order must lie in [1, 4]");
  auto theta_t = [&](double s) {
    const Complex v = cgf(model, g, s, t, chi);
    if (std::abs(v.imag()) > 1e-6 * std::max(1.0, std::abs(v.real())))
      throw NumericalError("cumulants: Theta_t is not real at s = " +
                           std::to_string(s));
    return v.real();
  };
  const double h0 = cfg.h > 0.0 ? cfg.h : 1e-2;
  std::vector<double> out;
  for (int n = 1; n <= max_order; ++n) {
    const double dn =
        adaptive_derivative(theta_t, n, h0, cfg.max_halvings, 1e-7);
    out.push_back((n % 2 == 0 ? 1.0 : -1.0) * dn);
  }
  return out;
}

CgfScan scan_cgf_finite(const QModel& model, double g, const RVector& s_grid,
                        double t, const CVector& chi) {
  if (s_grid.size() < 1) throw PreconditionError("scan_cgf_finite: empty grid");
  CgfScan scan;
  scan.s_grid = s_grid;
  scan.asymptotic = false;
  scan.t = t;
  scan.theta_t.resize(s_grid.size());
  // Continuity tracking: unwind 2 pi jumps of the imaginary part
  // relative to the previous grid point.
  double offset = 0.0;
  for (Index i = 0; i < s_grid.size(); ++i) {
    Complex v = cgf(model, g, s_grid(i), t, chi);
    v += Complex(0.0, offset);
    if (i > 0) {
      while (v.imag() - scan.theta_t[i - 1].imag() * t > std::numbers::pi) {
        v -= Complex(0.0, 2.0 * std::numbers::pi);
        offset -= 2.0 * std::numbers::pi;
      }
      while (v.imag() - scan.theta_t[i - 1].imag() * t < -std::numbers::pi) {
        v += Complex(0.0, 2.0 * std::numbers::pi);
        offset += 2.0 * std::numbers::pi;
      }
    }
    scan.theta_t[i] = v / t;
  }
  // Activity from the real part of Theta_t / t.
  RVector th(s_grid.size());
  for (Index i = 0; i < s_grid.size(); ++i) th(i) = scan.theta_t[i].real();
  scan.activity.resize(s_grid.size());
  for (Index i = 0; i < s_grid.size(); ++i) {
    const Index lo = std::max<Index>(0, i - 1);
    const Index hi = std::min<Index>(s_grid.size() - 1, i + 1);
    scan.activity(i) = -(th(hi) - th(lo)) / (s_grid(hi) - s_grid(lo));
  }
  return scan;
}

CgfScan scan_theta(const QModel& model, double g, const RVector& s_grid) {
  if (s_grid.size() < 1) throw PreconditionError("scan_theta: empty grid");
  CgfScan scan;
  scan.asymptotic = true;
  scan.s_grid = s_grid;
  scan.theta.resize(s_grid.size());
  for (Index i = 0; i < s_grid.size(); ++i)
    scan.theta(i) = theta_asymptotic(model, g, s_grid(i)).value;
  scan.activity.resize(s_grid.size());
  for (Index i = 0; i < s_grid.size(); ++i) {
    const Index lo = std::max<Index>(0, i - 1);
    const Index hi = std::min<Index>(s_grid.size() - 1, i + 1);
    scan.activity(i) = -(scan.theta(hi) - scan.theta(lo)) /
                       (s_grid(hi) - s_grid(lo));
  }
  return scan;
}

WignerGrid cat_wigner(double p_i, double p_a, double mu_i, double mu_a,
                      double t, double phi, const WignerGridSpec& grid) {
  if (std::abs(p_i + p_a - 1.0) > 1e-9)
    throw PreconditionError("cat_wigner: requires p_I + p_A = 1");
  if (p_i < 0.0 || p_a < 0.0 || mu_i < 0.0 || mu_a < 0.0 || t < 0.0)
    throw PreconditionError("cat_wigner: negative weight, rate, or time");
  if (grid.nq < 2 || grid.np < 2 || grid.q_max <= grid.q_min ||
      grid.p_max <= grid.p_min)
    throw PreconditionError("cat_wigner: degenerate grid");

  const Complex phase = std::exp(kI * phi);
  const Complex alpha[2] = {phase * std::sqrt(t * mu_i),
                            phase * std::sqrt(t * mu_a)};
  const double c[2] = {std::sqrt(p_i), std::sqrt(p_a)};

  // <beta|alpha> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(beta) alpha)
  auto coherent_overlap = [](Complex beta, Complex al) {
    return std::exp(-0.5 * std::norm(al) - 0.5 * std::norm(beta) +
                    std::conj(beta) * al);
  };
  Complex norm = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      norm += c[i] * c[j] * coherent_overlap(alpha[j], alpha[i]);

  // W_{|alpha><beta|}(z) = (2/pi) exp(conj(z) alpha - z conj(alpha))
  //                        * <beta | 2z - alpha>
  auto cross_wigner = [&](Complex z, Complex al, Complex beta) {
    return (2.0 / std::numbers::pi) *
           std::exp(std::conj(z) * al - z * std::conj(al)) *
           coherent_overlap(beta, 2.0 * z - al);
  };

  WignerGrid out;
  out.p_i = p_i;
  out.p_a = p_a;
  out.mu_i = mu_i;
  out.mu_a = mu_a;
  out.t = t;
  out.phi = phi;
  out.q_axis = RVector::LinSpaced(grid.nq, grid.q_min, grid.q_max);
  out.p_axis = RVector::LinSpaced(grid.np, grid.p_min, grid.p_max);
  out.values.resize(grid.nq, grid.np);
  for (int iq = 0; iq < grid.nq; ++iq) {
    for (int ip = 0; ip < grid.np; ++ip) {
      const Complex z(out.q_axis(iq) / std::sqrt(2.0),
                      out.p_axis(ip) / std::sqrt(2.0));
      Complex w = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          w += c[i] * c[j] * cross_wigner(z, alpha[i], alpha[j]);
      // dQ dP = 2 d^2z, so the phase-space density picks up a factor 1/2.
      out.values(iq, ip) = 0.5 * std::real(w / norm);
    }
  }
  return out;
}

}  // namespace oqfi
