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

#include "oqfi/models.hpp"

#include <cmath>

namespace oqfi {

namespace {

double get_param(const BuiltinSpec& spec, const std::string& key) {
  const BuiltinSpec defaults = builtin_defaults(spec.name);
  auto it = spec.parameters.find(key);
  if (it != spec.parameters.end()) return it->second;
  auto dit = defaults.parameters.find(key);
  if (dit != defaults.parameters.end()) return dit->second;
  throw ConfigError("model '" + spec.name + "': missing parameter '" + key + "'");
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

QModel single_channel_model(Index dim, CMatrix h, CMatrix l1) {
  QModel m;
  m.dim = dim;
  m.hamiltonian = OperatorFamily::constant(std::move(h));
  m.jumps.push_back(OperatorFamily::constant(std::move(l1)));
  m.phase_channel = 1;
  m.validate();
  return m;
}

}  // namespace

BuiltinSpec builtin_defaults(const std::string& name) {
  if (name == "poisson") return {name, {{"mu", 1.0}}};
  if (name == "damping") return {name, {{"gamma", 1.0}}};
  if (name == "blockcat") return {name, {{"mu_A", 1.0}, {"mu_I", 0.1}}};
  if (name == "threelevel")
    return {name,
            {{"Omega", 1.0}, {"Omega_s", 0.02}, {"kappa", 4.0}, {"delta_s", 0.5}}};
  if (name == "rabi") return {name, {{"Omega", 1.0}, {"kappa", 1.0}}};
  throw ConfigError("unknown builtin model '" + name + "'");
}

QModel instantiate(const BuiltinSpec& spec) {
  if (spec.name == "poisson") {
    const double mu = get_param(spec, "mu");
    require(mu > 0.0, "poisson: mu must be > 0");
    CMatrix h = CMatrix::Zero(1, 1);
    CMatrix l1(1, 1);
    l1 << std::sqrt(mu);
    return single_channel_model(1, h, l1);
  }
  if (spec.name == "damping") {
    const double gamma = get_param(spec, "gamma");
    require(gamma > 0.0, "damping: gamma must be > 0");
    CMatrix h = CMatrix::Zero(2, 2);
    CMatrix l1 = CMatrix::Zero(2, 2);
    l1(0, 1) = std::sqrt(gamma);
    return single_channel_model(2, h, l1);
  }
  if (spec.name == "blockcat") {
    const double mu_a = get_param(spec, "mu_A");
    const double mu_i = get_param(spec, "mu_I");
    require(mu_a >= mu_i && mu_i >= 0.0, "blockcat: requires mu_A >= mu_I >= 0");
    CMatrix h = CMatrix::Zero(2, 2);
    CMatrix l1 = CMatrix::Zero(2, 2);
    l1(0, 0) = std::sqrt(mu_a);
    l1(1, 1) = std::sqrt(mu_i);
    return single_channel_model(2, h, l1);
  }
  if (spec.name == "threelevel") {
    // Levels {g, e, s} = {0, 1, 2}; e<->s coupled coherently with weak
    // Omega_s so the single emissive channel carries every photon.  The
    // shelf is detuned by delta_s: on resonance the Hamiltonian has an
    // exact dark eigenstate (Omega_s|g> - Omega|s>) that the dynamics
    // never leaves, so emission would shut off permanently instead of
    // blinking.  The detuning gives the dark periods a finite lifetime.
    const double omega = get_param(spec, "Omega");
    const double omega_s = get_param(spec, "Omega_s");
    const double kappa = get_param(spec, "kappa");
    const double delta_s = get_param(spec, "delta_s");
    require(omega > 0.0 && omega_s > 0.0 && kappa > 0.0,
            "threelevel: Omega, Omega_s, kappa must be > 0");
    CMatrix h = CMatrix::Zero(3, 3);
    h(0, 1) = omega;
    h(1, 0) = omega;
    h(1, 2) = omega_s;
    h(2, 1) = omega_s;
    h(2, 2) = delta_s;
    CMatrix l1 = CMatrix::Zero(3, 3);
    l1(0, 1) = std::sqrt(kappa);
    return single_channel_model(3, h, l1);
  }
  if (spec.name == "rabi") {
    const double omega = get_param(spec, "Omega");
    const double kappa = get_param(spec, "kappa");
    require(omega > 0.0 && kappa > 0.0, "rabi: Omega, kappa must be > 0");
    CMatrix h = CMatrix::Zero(2, 2);
    h(0, 1) = omega;
    h(1, 0) = omega;
    CMatrix l1 = CMatrix::Zero(2, 2);
    l1(0, 1) = std::sqrt(kappa);
    return single_channel_model(2, h, l1);
  }
  throw ConfigError("unknown builtin model '" + spec.name + "'");
}

}  // namespace oqfi
