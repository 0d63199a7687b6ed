// Copyright 2026 The hamrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cmath>

#include "hamrec/lindblad.hpp"
#include "hamrec/reconstruction.hpp"
#include "hamrec/signal.hpp"

using namespace hamrec;

namespace {

PauliHamiltonian pi_pulse(int qubits, double dt, int steps) {
  PauliHamiltonian h(qubits, dt, steps);
  const double peak = M_PI / (steps * dt * 0.8);
  const std::string label = qubits == 1 ? "X" : std::string("XX");
  h.amplitude(PauliLabel(label)).setConstant(peak);
  return h;
}

ReconstructionInput synth_input(int qubits) {
  const double dt = 2e-9;
  const int steps = 125;
  auto truth = pi_pulse(qubits, dt, steps);
  std::vector<std::string> labels;
  if (qubits == 1) {
    labels = {"+Z", "-Z", "+X", "-X", "+Y", "-Y"};
  } else {
    for (const char* a : {"+X", "+Y", "+Z", "-Z"})
      for (const char* b : {"+X", "+Y", "+Z", "-Z"})
        labels.push_back(std::string(a) + b);
  }
  ReconstructionInput in;
  in.qubits = qubits;
  in.dt = dt;
  in.rates.assign(qubits, DissipationRates{});
  for (const auto& l : labels) {
    StateRecord rec;
    rec.rho0 = density_from_state_label(l);
    auto [traj, rho] = lindblad_evolve(rec.rho0, truth, in.rates);
    rec.z.resize(qubits, steps + 1);
    for (int q = 0; q < qubits; ++q)
      for (int n = 0; n <= steps; ++n) rec.z(q, n) = traj.z(q, n);
    in.states.push_back(std::move(rec));
  }
  return in;
}

}  // namespace

static void BM_LindbladStep2Q(benchmark::State& state) {
  LindbladChannels channels(2, {DissipationRates{0, 0, 0, 4e5},
                                DissipationRates{0, 0, 0, 4e5}});
  auto h = pi_pulse(2, 2e-9, 1);
  Mat rho = density_from_state_label("+X+Y");
  Mat hm = h.matrix_at(0);
  for (auto _ : state) {
    rho = lindblad_step(rho, hm, channels, 2e-9);
    benchmark::DoNotOptimize(rho);
  }
}
BENCHMARK(BM_LindbladStep2Q);

static void BM_MatrixExp4x4(benchmark::State& state) {
  auto h = pi_pulse(2, 2e-9, 1);
  Mat hm = Complex(0, -1) * 2e-9 * h.matrix_at(0);
  for (auto _ : state) {
    Mat u = matrix_exp(hm);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_MatrixExp4x4);

static void BM_Filtfilt(benchmark::State& state) {
  auto c = butterworth_coefficients({3, 50e6, PhaseMode::zero_phase}, 1e9);
  Eigen::VectorXd x(state.range(0));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = std::sin(0.01 * i);
  for (auto _ : state) {
    Eigen::VectorXd y = filter_apply(x, c, PhaseMode::zero_phase);
    benchmark::DoNotOptimize(y);
  }
}
BENCHMARK(BM_Filtfilt)->Arg(512)->Arg(4096);

static void BM_Reconstruct1Q(benchmark::State& state) {
  auto in = synth_input(1);
  for (auto _ : state) {
    auto result = reconstruct(in, ReconstructionMode::first_order);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_Reconstruct1Q)->Unit(benchmark::kMillisecond);

static void BM_Reconstruct2Q(benchmark::State& state) {
  auto in = synth_input(2);
  for (auto _ : state) {
    auto result = reconstruct(in, ReconstructionMode::first_order);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_Reconstruct2Q)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
