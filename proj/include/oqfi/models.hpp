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

#include <map>
#include <string>

#include "oqfi/lindblad.hpp"

namespace oqfi {

/// Built-in example models.  Every builtin has a single jump channel
/// carrying the phase factor e^{-ig}, so g plays the role of the photon
/// phase and the Liouvillian itself is g-independent.
///
///   poisson    d=1, H=0, L1 = sqrt(mu):      plain Poisson emitter
///   damping    d=2, H=0, L1 = sqrt(gamma)|0><1|:  amplitude damping
///   blockcat   d=2, H=0, L1 = diag(sqrt(mu_A), sqrt(mu_I)):
///              exactly block-diagonal, two stationary states (exact DPT)
///   threelevel d=3 {g,e,s}, H = Omega(|g><e|+h.c.) + Omega_s(|e><s|+h.c.),
///              L1 = sqrt(kappa)|g><e|:  electron-shelving intermittency
///   rabi       d=2, H = Omega(|0><1|+h.c.), L1 = sqrt(kappa)|0><1|:
///              unique stationary state baseline
struct BuiltinSpec {
  std::string name;
  std::map<std::string, double> parameters;
};

/// Defaults for each builtin (threelevel: Omega=1, Omega_s=0.02, kappa=4,
/// tuned so gap_ratio >= 1e3 and guarded by tests).
BuiltinSpec builtin_defaults(const std::string& name);

/// Construct the model; throws ConfigError on unknown names or parameter
/// domain violations (all rates >= 0, blockcat requires mu_A >= mu_I).
QModel instantiate(const BuiltinSpec& spec);

}  // namespace oqfi
