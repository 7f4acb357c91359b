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

#include "oqfi/trajectories.hpp"

#include <cmath>

namespace oqfi {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t mix = stream;
  std::uint64_t x = seed ^ splitmix64(mix);
  for (auto& s : state_) s = splitmix64(x);
  bool all_zero = true;
  for (auto s : state_) all_zero = all_zero && s == 0;
  if (all_zero) state_[0] = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  double u;
  do {
    u = double(next() >> 11) * 0x1.0p-53;
  } while (u == 0.0);
  return u;
}

namespace {

// Propagation under e^{A tau}, A = -iH - (1/2) sum L^dag L, via the
// eigendecomposition of A when it is diagonalizable, else matexp.
struct Propagator {
  bool use_eig = false;
  CMatrix v;
  CMatrix v_inv;
  CVector lam;
  CMatrix a;

  explicit Propagator(const CMatrix& a_in) : a(a_in) {
    const SpectralDecomp dec = spectrum(a);
    if (!dec.defective) {
      use_eig = true;
      v = dec.right;
      v_inv = dec.left.adjoint();
      lam = dec.eigenvalues;
    }
  }

  CVector apply(const CVector& psi, double tau) const {
    if (use_eig) {
      CVector w = v_inv * psi;
      for (Index k = 0; k < lam.size(); ++k) w(k) *= std::exp(tau * lam(k));
      return v * w;
    }
    return matexp(tau * a) * psi;
  }
};

}  // namespace

Trajectory sample_trajectory(const QModel& model, double g, double t,
                             const CVector& chi, std::uint64_t seed,
                             std::uint64_t stream) {
  model.validate();
  if (t < 0.0) throw PreconditionError("sample_trajectory: t must be >= 0");
  if (chi.size() != model.dim || std::abs(chi.norm() - 1.0) > 1e-9)
    throw PreconditionError("sample_trajectory: chi invalid");

  const CMatrix h = model.hamiltonian_op(g);
  std::vector<CMatrix> ls;
  CMatrix damp = CMatrix::Zero(model.dim, model.dim);
  for (int j = 1; j <= model.n_channels(); ++j) {
    ls.push_back(model.jump_op(j, g));
    damp += ls.back().adjoint() * ls.back();
  }
  const Propagator prop(-kI * h - 0.5 * damp);

  Rng rng(seed, stream);
  Trajectory traj;
  traj.t_final = t;
  traj.seed = seed;
  traj.stream = stream;

  CVector psi = chi;
  double t_cur = 0.0;
  while (true) {
    const double remain = t - t_cur;
    const CVector at_end = prop.apply(psi, remain);
    const double surv_end = at_end.squaredNorm();
    if (surv_end > 1.0 + 1e-9)
      throw PreconditionError(
          "sample_trajectory: norm increased under no-jump evolution; "
          "model is not contractive");
    const double u = rng.uniform();
    if (surv_end > u) {
      psi = at_end.normalized();
      break;
    }
    // Bisect the jump time where ||psi(tau)||^2 = u.
    double lo = 0.0, hi = remain;
    while (hi - lo > 1e-10 * hi) {
      const double mid = 0.5 * (lo + hi);
      if (prop.apply(psi, mid).squaredNorm() > u)
        lo = mid;
      else
        hi = mid;
    }
    const double tau = 0.5 * (lo + hi);
    const CVector at_jump = prop.apply(psi, tau);

    std::vector<double> w(ls.size());
    double w_total = 0.0;
    for (size_t j = 0; j < ls.size(); ++j) {
      w[j] = (ls[j] * at_jump).squaredNorm();
      w_total += w[j];
    }
    if (w_total <= 0.0)
      throw NumericalError("sample_trajectory: vanishing jump weights");
    const double pick = rng.uniform() * w_total;
    double acc = 0.0;
    int channel = static_cast<int>(ls.size());
    for (size_t j = 0; j < ls.size(); ++j) {
      acc += w[j];
      if (pick <= acc) {
        channel = static_cast<int>(j) + 1;
        break;
      }
    }
    psi = (ls[channel - 1] * at_jump).normalized();
    t_cur += tau;
    traj.events.push_back({t_cur, channel});
  }
  traj.final_state = psi;
  return traj;
}

CountHistogram count_histogram(const QModel& model, double g, double t,
                               const CVector& chi, long n_traj,
                               std::uint64_t seed) {
  if (n_traj < 1) throw PreconditionError("count_histogram: n_traj must be >= 1");
  std::vector<long> counts(n_traj);
  long max_count = 0;
  for (long i = 0; i < n_traj; ++i) {
    const Trajectory traj =
        sample_trajectory(model, g, t, chi, seed, static_cast<std::uint64_t>(i));
    long c = 0;
    for (const auto& ev : traj.events)
      if (ev.channel == 1) ++c;
    counts[i] = c;
    max_count = std::max(max_count, c);
  }

  CountHistogram hist;
  hist.n_traj = n_traj;
  hist.t = t;
  hist.mass.assign(static_cast<size_t>(max_count) + 1, 0);
  double mean = 0.0;
  for (long c : counts) {
    ++hist.mass[static_cast<size_t>(c)];
    mean += double(c);
  }
  mean /= double(n_traj);

  hist.bandwidth = std::max(1.0, std::sqrt(mean));
  const int n_bins = static_cast<int>(hist.mass.size());
  hist.smoothed.assign(n_bins, 0.0);
  const double bw = hist.bandwidth;
  for (int k = 0; k < n_bins; ++k) {
    double acc = 0.0;
    for (int m = 0; m < n_bins; ++m) {
      const double zarg = (k - m) / bw;
      acc += double(hist.mass[m]) * std::exp(-0.5 * zarg * zarg);
    }
    hist.smoothed[k] = acc / (bw * std::sqrt(2.0 * M_PI));
  }

  for (int k = 0; k < n_bins; ++k) {
    const double left = k > 0 ? hist.smoothed[k - 1] : -1.0;
    const double right = k + 1 < n_bins ? hist.smoothed[k + 1] : -1.0;
    if (hist.smoothed[k] > left && hist.smoothed[k] >= right)
      hist.maxima.push_back(k);
  }
  if (hist.maxima.size() >= 2) {
    // Two largest maxima and the deepest dip between them.
    int p1 = hist.maxima[0];
    for (int m : hist.maxima)
      if (hist.smoothed[m] > hist.smoothed[p1]) p1 = m;
    int p2 = -1;
    for (int m : hist.maxima)
      if (m != p1 && (p2 < 0 || hist.smoothed[m] > hist.smoothed[p2])) p2 = m;
    const int lo = std::min(p1, p2), hi = std::max(p1, p2);
    double dip = hist.smoothed[lo];
    for (int k = lo; k <= hi; ++k) dip = std::min(dip, hist.smoothed[k]);
    const double smaller = std::min(hist.smoothed[p1], hist.smoothed[p2]);
    hist.dip_ratio = smaller > 0.0 ? dip / smaller : 1.0;
    hist.bimodal = hist.dip_ratio <= 0.8;
  }
  return hist;
}

IntermittencyStats intermittency_metrics(const Trajectory& trajectory,
                                         double window, double threshold_rate,
                                         int channel) {
  if (window <= 0.0)
    throw PreconditionError("intermittency_metrics: window must be > 0");
  if (window > trajectory.t_final)
    throw PreconditionError(
        "intermittency_metrics: window exceeds the trajectory length");

  const int n_windows = static_cast<int>(trajectory.t_final / window);
  std::vector<int> counts(n_windows, 0);
  for (const auto& ev : trajectory.events) {
    if (ev.channel != channel) continue;
    const int w = std::min(n_windows - 1, static_cast<int>(ev.time / window));
    ++counts[w];
  }

  IntermittencyStats stats;
  stats.window = window;
  stats.threshold = threshold_rate;
  int run_start = 0;
  auto bright = [&](int w) { return counts[w] / window >= threshold_rate; };
  for (int w = 1; w <= n_windows; ++w) {
    if (w == n_windows || bright(w) != bright(run_start)) {
      const double len = (w - run_start) * window;
      if (bright(run_start))
        stats.bright_lengths.push_back(len);
      else
        stats.dark_lengths.push_back(len);
      if (w < n_windows) ++stats.n_switches;
      run_start = w;
    }
  }
  auto mean_of = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / double(v.size());
  };
  stats.mean_bright = mean_of(stats.bright_lengths);
  stats.mean_dark = mean_of(stats.dark_lengths);
  std::vector<double> all = stats.bright_lengths;
  all.insert(all.end(), stats.dark_lengths.begin(), stats.dark_lengths.end());
  stats.mean_dwell = mean_of(all);
  return stats;
}

}  // namespace oqfi
