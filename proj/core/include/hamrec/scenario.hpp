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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hamrec/coupler.hpp"
#include "hamrec/readout.hpp"
#include "hamrec/reconstruction.hpp"

namespace hamrec {

// All angular frequencies and rates in scenario configs are rad/s; times are
// seconds. Configs round-trip losslessly through the manifest.

/// One additive component of a programmed drive waveform.
struct WaveformSpec {
  std::string label;          // Pauli word, e.g. "X" or "XI"
  std::string shape;          // "flat_top", "sine", "constant"
  double amplitude = 0.0;     // rad/s (peak); for flat_top may be derived
  double area = 0.0;          // rad; when nonzero, amplitude = area/(t_p - ramp)
  double ramp = 50e-9;        // s, flat_top cosine ramp
  double period = 0.0;        // s, sine
  double phase = 0.0;         // rad, sine
};

/// Truth Hamiltonian: either programmed Pauli waveforms or a parametric
/// coupler pulse (plus optional constant injections such as residual IZ/ZI
/// or a measured static ZZ).
struct TruthSpec {
  std::string type;  // "pauli_waveforms" | "coupler_pulse"
  std::vector<WaveformSpec> waveforms;
  // coupler_pulse:
  double pulse_phi = 0.0;       // modulation phase, beta = 2 phi
  double pulse_area = 0.0;      // rad; resolves eps_max
  double pulse_eps_max = 0.0;   // used directly when area == 0
  double pulse_ramp = 50e-9;
  double detuning_error = 0.0;  // rad/s
  std::map<std::string, double> inject;  // label -> constant amplitude, rad/s
};

struct QubitChannelSpec {
  ReadoutParams readout;
  DissipationRates rates;  // gamma_d is taken from readout (single source)
};

struct PipelineSpec {
  FilterSpec filter{3, 50e6, PhaseMode::zero_phase};
  double target_dt = 2e-9;
  std::vector<double> tau;  // per qubit; empty = auto (2/kappa)
};

struct ReconstructionSpec {
  std::string mode = "first_order";  // | "second_order" | "fast_slow"
  std::vector<std::string> recover_labels;          // empty = auto
  std::map<std::string, double> preconditioned;     // label -> rad/s constant
  bool output_filter_enabled = false;
  FilterSpec output_filter{5, 50e6, PhaseMode::zero_phase};
  bool optimize_preconditioning = false;
  std::vector<std::string> optimize_labels;
  double optimize_search_scale = 2.0 * M_PI * 1.0e6;
};

struct Scenario {
  std::string name;
  std::string description;
  std::string kind = "standard";  // | "duration_sweep" | "chevron"
  int qubits = 1;
  double t_p = 250e-9;
  double buffer = 40e-9;
  uint64_t seed = 1;
  long shots = 10000;
  bool noiseless = false;
  std::string readout_model = "adiabatic";  // | "ode"
  std::vector<std::string> initial_states;
  std::vector<QubitChannelSpec> channels;
  std::optional<CouplerParams> coupler;
  TruthSpec truth;
  std::optional<TruthSpec> control;  // reference H_c; defaults to truth
  PipelineSpec pipeline;
  ReconstructionSpec reconstruction;
  std::vector<double> sweep_durations;   // duration_sweep
  std::vector<double> chevron_detunings; // chevron, rad/s
  double chevron_max_duration = 400e-9;  // chevron

  /// Full structural validation; throws ConfigError naming the field.
  void validate() const;

  static Scenario from_json_text(const std::string& text);
  std::string to_json_text() const;
};

/// Summary returned by run_scenario (everything is also written to disk).
struct RunSummary {
  std::string output_dir;
  double mean_fidelity = 0.0;
  Eigen::VectorXd per_state_fidelity;
  double dynamical_final = 0.0;
  double dynamical_min = 0.0;
};

/// Executes the simulate -> synthesize -> condition -> reconstruct -> score
/// pipeline and writes truth_amplitudes.csv, z_traces.csv,
/// reconstructed_amplitudes.csv, diagnostics.csv, dynamical_fidelity.csv,
/// fidelity.json and manifest.json under out_root/<name>_seed<seed>/.
/// Sweep scenarios additionally write summary.csv; chevron scenarios write
/// chevron.csv instead of the reconstruction artifacts.
RunSummary run_scenario(const Scenario& scenario, const std::string& out_root);

/// Bundled scenario registry (the paper's gallery).
std::vector<std::string> list_scenarios();
Scenario bundled_scenario(const std::string& name);  // throws UnknownScenarioError
std::string describe_scenario(const std::string& name);

}  // namespace hamrec
