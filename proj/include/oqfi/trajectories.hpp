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

#pragma once

#include <cstdint>
#include <vector>

#include "oqfi/lindblad.hpp"

namespace oqfi {

/// xoshiro256** seeded through SplitMix64.  Stream derivation: the state
/// is SplitMix64(seed XOR golden-ratio-mix(stream)), so (seed, index)
/// pairs give reproducible independent streams regardless of platform or
/// thread schedule.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
  std::uint64_t next();
  /// Uniform double in the open interval (0, 1).
  double uniform();

 private:
  std::uint64_t state_[4];
};

struct TrajectoryEvent {
  double time;  // units 1/gamma_0
  int channel;  // 1-based
};

/// One quantum-jump unraveling: the emission record, the final state,
/// and the stream that produced it.
struct Trajectory {
  std::vector<TrajectoryEvent> events;
  double t_final = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  CVector final_state;
};

/// Waiting-time (norm-quantile) sampler: evolve under
/// e^{-i H_eff tau}, H_eff = H - (i/2) sum_j L_j^dag L_j, locate the
/// jump time where the squared norm crosses a uniform draw by bisection
/// to 1e-10 relative resolution, pick the channel with probability
/// proportional to ||L_j psi||^2.  Deterministic given (seed, stream).
Trajectory sample_trajectory(const QModel& model, double g, double t,
                             const CVector& chi, std::uint64_t seed,
                             std::uint64_t stream = 0);

/// Histogram of channel-1 counts over n_traj trajectories seeded
/// (seed, 0), (seed, 1), ...  Modality diagnostics are computed on a
/// Gaussian-kernel smoothing with bandwidth sqrt(mean count); the
/// bimodality criterion (two local maxima, dip <= 0.8 x smaller peak)
/// is recorded with the histogram.
struct CountHistogram {
  std::vector<long> mass;  // index = count value; sums to n_traj
  long n_traj = 0;
  double t = 0.0;
  double bandwidth = 0.0;
  std::vector<double> smoothed;
  std::vector<int> maxima;  // local maxima of the smoothed curve
  double dip_ratio = 1.0;   // dip / smaller of the two largest peaks
  bool bimodal = false;
};
CountHistogram count_histogram(const QModel& model, double g, double t,
                               const CVector& chi, long n_traj,
                               std::uint64_t seed);

/// Bright/dark segment statistics of one trajectory: the emission rate
/// in consecutive windows is thresholded (the caller supplies the
/// threshold, typically (mu_A + mu_I)/2 from metastable_split) and
/// maximal runs are classified into segments.
struct IntermittencyStats {
  std::vector<double> bright_lengths;
  std::vector<double> dark_lengths;
  double mean_bright = 0.0;  // 0 when no such segment
  double mean_dark = 0.0;
  double mean_dwell = 0.0;   // pooled over all segments
  int n_switches = 0;
  double window = 0.0;
  double threshold = 0.0;
};
IntermittencyStats intermittency_metrics(const Trajectory& trajectory,
                                         double window, double threshold_rate,
                                         int channel = 1);

}  // namespace oqfi
