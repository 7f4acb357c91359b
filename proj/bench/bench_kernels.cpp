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

// Micro-benchmarks for the inner-loop kernels.  QFI scans evaluate
// thousands of matrix exponentials and eigendecompositions of d^2 x d^2
// superoperators, so regressions here dominate wall time.

#include <chrono>
#include <cstdio>

#include "oqfi/models.hpp"
#include "oqfi/qfi.hpp"
#include "oqfi/spectral.hpp"

using namespace oqfi;

namespace {

template <typename Fn>
double ns_per_op(Fn&& fn, int reps) {
  // warm up
  for (int i = 0; i < reps / 10 + 1; ++i) fn();
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::nano>(stop - start).count() / reps;
}

QModel model_of_dim(Index d) {
  if (d == 2) return instantiate(builtin_defaults("rabi"));
  if (d == 3) return instantiate(builtin_defaults("threelevel"));
  // d = 4: two detuned qubits sharing a decay channel
  QModel m;
  m.dim = 4;
  CMatrix h = CMatrix::Zero(4, 4);
  h(0, 1) = 1.0;
  h(1, 0) = 1.0;
  h(2, 3) = 0.5;
  h(3, 2) = 0.5;
  h(3, 3) = 0.3;
  CMatrix l = CMatrix::Zero(4, 4);
  l(0, 1) = 1.0;
  l(2, 3) = 0.4;
  m.hamiltonian = OperatorFamily::constant(h);
  m.jumps.push_back(OperatorFamily::constant(l));
  m.phase_channel = 1;
  return m;
}

}  // namespace

int main() {
  std::printf("%-4s %-10s %14s %14s %14s %14s\n", "d", "superop", "build/ns",
              "matexp/ns", "spectrum/ns", "qfi_fd/ns");
  for (Index d : {Index{2}, Index{3}, Index{4}}) {
    const QModel m = model_of_dim(d);
    const CMatrix liou = build_liouvillian(m, 0.0).matrix;
    CVector chi = CVector::Constant(d, Complex(1.0, 0.0));
    chi /= chi.norm();
    const StencilConfig cfg{};

    const double t_build = ns_per_op([&] { build_liouvillian(m, 0.0); }, 2000);
    const double t_exp = ns_per_op([&] { matexp(5.0 * liou); }, 2000);
    const double t_spec = ns_per_op([&] { spectrum(liou); }, 1000);
    const double t_qfi =
        ns_per_op([&] { qfi_fd(m, 0.0, 5.0, chi, cfg); }, 200);

    std::printf("%-4ld %2ldx%-7ld %14.0f %14.0f %14.0f %14.0f\n", long(d),
                long(d * d), long(d * d), t_build, t_exp, t_spec, t_qfi);
  }
  return 0;
}
