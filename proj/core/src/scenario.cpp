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

#include "hamrec/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "hamrec/csv.hpp"
#include "hamrec/fidelity.hpp"
#include "hamrec/rng.hpp"
#include "hamrec/version.hpp"

namespace hamrec {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// JSON round trip
// ---------------------------------------------------------------------------

double require_number(const json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number())
    throw ConfigError("config field '" + field + "' missing or not a number");
  return j[field].get<double>();
}

json waveform_to_json(const WaveformSpec& w) {
  return json{{"label", w.label},     {"shape", w.shape}, {"amplitude", w.amplitude},
              {"area", w.area},       {"ramp", w.ramp},   {"period", w.period},
              {"phase", w.phase}};
}

WaveformSpec waveform_from_json(const json& j) {
  WaveformSpec w;
  w.label = j.value("label", "");
  w.shape = j.value("shape", "");
  w.amplitude = j.value("amplitude", 0.0);
  w.area = j.value("area", 0.0);
  w.ramp = j.value("ramp", 50e-9);
  w.period = j.value("period", 0.0);
  w.phase = j.value("phase", 0.0);
  return w;
}

json truth_to_json(const TruthSpec& t) {
  json waveforms = json::array();
  for (const auto& w : t.waveforms) waveforms.push_back(waveform_to_json(w));
  return json{{"type", t.type},
              {"waveforms", waveforms},
              {"pulse_phi", t.pulse_phi},
              {"pulse_area", t.pulse_area},
              {"pulse_eps_max", t.pulse_eps_max},
              {"pulse_ramp", t.pulse_ramp},
              {"detuning_error", t.detuning_error},
              {"inject", t.inject}};
}

TruthSpec truth_from_json(const json& j) {
  TruthSpec t;
  t.type = j.value("type", "pauli_waveforms");
  if (j.contains("waveforms"))
    for (const auto& w : j["waveforms"]) t.waveforms.push_back(waveform_from_json(w));
  t.pulse_phi = j.value("pulse_phi", 0.0);
  t.pulse_area = j.value("pulse_area", 0.0);
  t.pulse_eps_max = j.value("pulse_eps_max", 0.0);
  t.pulse_ramp = j.value("pulse_ramp", 50e-9);
  t.detuning_error = j.value("detuning_error", 0.0);
  if (j.contains("inject"))
    t.inject = j["inject"].get<std::map<std::string, double>>();
  return t;
}

json readout_to_json(const ReadoutParams& p) {
  return json{{"kappa", p.kappa},
              {"chi", p.chi},
              {"omega_wm", p.omega_wm},
              {"nbar", p.nbar},
              {"eta", p.eta},
              {"sample_rate", p.sample_rate},
              {"noise_sigma", p.noise_sigma},
              {"gamma_d", p.gamma_d},
              {"dephasing_per_photon", p.dephasing_per_photon}};
}

ReadoutParams readout_from_json(const json& j) {
  ReadoutParams p;
  p.kappa = require_number(j, "kappa");
  p.chi = require_number(j, "chi");
  p.omega_wm = require_number(j, "omega_wm");
  p.nbar = j.value("nbar", 0.0);
  p.eta = j.value("eta", 1.0);
  p.sample_rate = j.value("sample_rate", 1e9);
  p.noise_sigma = j.value("noise_sigma", 0.0);
  p.gamma_d = j.value("gamma_d", 0.0);
  p.dephasing_per_photon = j.value("dephasing_per_photon", 0.0);
  return p;
}

json rates_to_json(const DissipationRates& r) {
  return json{{"gamma_down", r.gamma_down},
              {"gamma_up", r.gamma_up},
              {"gamma_phi", r.gamma_phi}};
}

DissipationRates rates_from_json(const json& j) {
  DissipationRates r;
  r.gamma_down = j.value("gamma_down", 0.0);
  r.gamma_up = j.value("gamma_up", 0.0);
  r.gamma_phi = j.value("gamma_phi", 0.0);
  return r;
}

json coupler_to_json(const CouplerParams& c) {
  return json{{"omega_c0", c.omega_c0}, {"asymmetry", c.asymmetry},
              {"g1c", c.g1c},           {"g2c", c.g2c},
              {"g12", c.g12},           {"omega_q1", c.omega_q1},
              {"omega_q2", c.omega_q2}, {"zeta_measured", c.zeta_measured}};
}

CouplerParams coupler_from_json(const json& j) {
  CouplerParams c;
  c.omega_c0 = require_number(j, "omega_c0");
  c.asymmetry = j.value("asymmetry", 0.0);
  c.g1c = require_number(j, "g1c");
  c.g2c = require_number(j, "g2c");
  c.g12 = j.value("g12", 0.0);
  c.omega_q1 = require_number(j, "omega_q1");
  c.omega_q2 = require_number(j, "omega_q2");
  c.zeta_measured = j.value("zeta_measured", 0.0);
  return c;
}

std::string phase_mode_name(PhaseMode m) {
  return m == PhaseMode::zero_phase ? "zero_phase" : "causal";
}

PhaseMode phase_mode_from_name(const std::string& s) {
  if (s == "zero_phase") return PhaseMode::zero_phase;
  if (s == "causal") return PhaseMode::causal;
  throw ConfigError("pipeline.filter.phase_mode must be zero_phase or causal");
}

json filter_to_json(const FilterSpec& f) {
  return json{{"order", f.order},
              {"critical_freq", f.critical_freq},
              {"phase_mode", phase_mode_name(f.phase_mode)}};
}

FilterSpec filter_from_json(const json& j) {
  FilterSpec f;
  f.order = j.value("order", 3);
  f.critical_freq = j.value("critical_freq", 50e6);
  f.phase_mode = phase_mode_from_name(j.value("phase_mode", "zero_phase"));
  return f;
}

// ---------------------------------------------------------------------------
// Truth construction
// ---------------------------------------------------------------------------

double flat_top_envelope(double t, double t_p, double ramp) {
  if (t < 0.0 || t >= t_p) return 0.0;
  if (ramp <= 0.0) return 1.0;
  if (t < ramp) return 0.5 * (1.0 - std::cos(M_PI * t / ramp));
  if (t > t_p - ramp) return 0.5 * (1.0 - std::cos(M_PI * (t_p - t) / ramp));
  return 1.0;
}

double waveform_value(const WaveformSpec& w, double t, double t_p) {
  if (w.shape == "flat_top") {
    const double peak = (w.area != 0.0) ? w.area / (t_p - w.ramp) : w.amplitude;
    return peak * flat_top_envelope(t, t_p, w.ramp);
  }
  if (w.shape == "sine") {
    const double period = (w.period != 0.0) ? w.period : t_p;
    return (t >= 0.0 && t < t_p)
               ? w.amplitude * std::sin(2.0 * M_PI * t / period + w.phase)
               : 0.0;
  }
  if (w.shape == "constant") return (t >= 0.0 && t < t_p) ? w.amplitude : 0.0;
  throw ConfigError("unknown waveform shape '" + w.shape + "'");
}

}  // namespace

void Scenario::validate() const {
  if (name.empty()) throw ConfigError("scenario.name must not be empty");
  if (qubits != 1 && qubits != 2)
    throw ConfigError("scenario.qubits must be 1 or 2");
  if (!(t_p > 0.0)) throw ConfigError("scenario.t_p must be positive");
  if (buffer < 0.0) throw ConfigError("scenario.buffer must be non-negative");
  if (shots < 1) throw ConfigError("scenario.shots must be >= 1");
  if (readout_model != "adiabatic" && readout_model != "ode")
    throw ConfigError("scenario.readout_model must be adiabatic or ode");
  if (static_cast<int>(channels.size()) != qubits)
    throw ConfigError("scenario.device must define one channel per qubit");
  for (const auto& ch : channels) {
    ch.readout.validate();
    ch.rates.validate();
  }

  const int d = 1 << qubits;
  const int s_min = (reconstruction.mode == "second_order") ? 3 : d * (d - 1) / qubits;
  if (static_cast<int>(initial_states.size()) < s_min)
    throw ConfigError("scenario.initial_states: the " + reconstruction.mode +
                      " mode on " + std::to_string(qubits) +
                      " qubit(s) requires S >= " + std::to_string(s_min) +
                      " initial states; got " +
                      std::to_string(initial_states.size()));
  for (const auto& s : initial_states) density_from_state_label(s);

  if (truth.type != "pauli_waveforms" && truth.type != "coupler_pulse")
    throw ConfigError("truth.type must be pauli_waveforms or coupler_pulse");
  if (truth.type == "coupler_pulse") {
    if (qubits != 2) throw ConfigError("truth.type coupler_pulse requires 2 qubits");
    if (!coupler.has_value())
      throw ConfigError("truth.type coupler_pulse requires device.coupler");
    coupler->validate();
  }
  for (const auto& w : truth.waveforms) {
    PauliLabel label(w.label);
    if (label.qubits() != qubits)
      throw ConfigError("truth waveform label '" + w.label +
                        "' does not match the qubit count");
  }

  if (!(pipeline.target_dt > 0.0))
    throw ConfigError("pipeline.target_dt must be positive");
  for (const auto& ch : channels) {
    const double f = ch.readout.sample_rate * pipeline.target_dt;
    if (std::abs(f - std::llround(f)) > 1e-9)
      throw ConfigError("pipeline.target_dt must be an integer number of samples");
  }
  if (!pipeline.tau.empty()) {
    if (static_cast<int>(pipeline.tau.size()) != qubits)
      throw ConfigError("pipeline.tau must list one delay per qubit");
    for (int q = 0; q < qubits; ++q) {
      const double auto_tau = channels[q].readout.tau();
      if (std::abs(pipeline.tau[q] - auto_tau) > 0.2 * auto_tau)
        std::cerr << "warning: scenario '" << name << "': pipeline.tau[" << q
                  << "] deviates from 2/kappa by more than 20%\n";
    }
  }

  if (reconstruction.mode != "first_order" &&
      reconstruction.mode != "second_order" && reconstruction.mode != "fast_slow")
    throw ConfigError("reconstruction.mode must be first_order, second_order or fast_slow");
  if (reconstruction.mode == "second_order" && qubits != 1)
    throw ConfigError("reconstruction.mode second_order is single-qubit only");
  for (const auto& l : reconstruction.recover_labels) (void)PauliLabel{l};
  for (const auto& entry : reconstruction.preconditioned) (void)PauliLabel{entry.first};
  if (kind != "standard" && kind != "duration_sweep" && kind != "chevron")
    throw ConfigError("scenario.kind must be standard, duration_sweep or chevron");
  if (kind == "duration_sweep" && sweep_durations.empty())
    throw ConfigError("duration_sweep scenarios need sweep_durations");
  if (kind == "chevron" && chevron_detunings.empty())
    throw ConfigError("chevron scenarios need chevron_detunings");
}

std::string Scenario::to_json_text() const {
  json j;
  j["name"] = name;
  j["description"] = description;
  j["kind"] = kind;
  j["qubits"] = qubits;
  j["t_p"] = t_p;
  j["buffer"] = buffer;
  j["seed"] = seed;
  j["shots"] = shots;
  j["noiseless"] = noiseless;
  j["readout_model"] = readout_model;
  j["initial_states"] = initial_states;
  json chans = json::array();
  for (const auto& ch : channels)
    chans.push_back(json{{"readout", readout_to_json(ch.readout)},
                         {"rates", rates_to_json(ch.rates)}});
  j["device"] = json{{"qubits", chans}};
  if (coupler.has_value()) j["device"]["coupler"] = coupler_to_json(*coupler);
  j["truth"] = truth_to_json(truth);
  if (control.has_value()) j["control"] = truth_to_json(*control);
  j["pipeline"] = json{{"filter", filter_to_json(pipeline.filter)},
                       {"target_dt", pipeline.target_dt},
                       {"tau", pipeline.tau}};
  j["reconstruction"] =
      json{{"mode", reconstruction.mode},
           {"recover_labels", reconstruction.recover_labels},
           {"preconditioned", reconstruction.preconditioned},
           {"output_filter_enabled", reconstruction.output_filter_enabled},
           {"output_filter", filter_to_json(reconstruction.output_filter)},
           {"optimize_preconditioning", reconstruction.optimize_preconditioning},
           {"optimize_labels", reconstruction.optimize_labels},
           {"optimize_search_scale", reconstruction.optimize_search_scale}};
  j["sweep_durations"] = sweep_durations;
  j["chevron_detunings"] = chevron_detunings;
  j["chevron_max_duration"] = chevron_max_duration;
  return j.dump(2) + "\n";
}

Scenario Scenario::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (j.contains("scenario")) j = j["scenario"];  // accept a manifest

  Scenario s;
  s.name = j.value("name", "");
  s.description = j.value("description", "");
  s.kind = j.value("kind", "standard");
  s.qubits = j.value("qubits", 1);
  s.t_p = j.value("t_p", 250e-9);
  s.buffer = j.value("buffer", 40e-9);
  s.seed = j.value("seed", static_cast<uint64_t>(1));
  s.shots = j.value("shots", 10000L);
  s.noiseless = j.value("noiseless", false);
  s.readout_model = j.value("readout_model", "adiabatic");
  if (j.contains("initial_states"))
    s.initial_states = j["initial_states"].get<std::vector<std::string>>();
  if (!j.contains("device") || !j["device"].contains("qubits"))
    throw ConfigError("config field 'device.qubits' missing");
  for (const auto& ch : j["device"]["qubits"]) {
    QubitChannelSpec spec;
    spec.readout = readout_from_json(ch.value("readout", json::object()));
    spec.rates = rates_from_json(ch.value("rates", json::object()));
    s.channels.push_back(spec);
  }
  if (j["device"].contains("coupler"))
    s.coupler = coupler_from_json(j["device"]["coupler"]);
  if (j.contains("truth")) s.truth = truth_from_json(j["truth"]);
  if (j.contains("control")) s.control = truth_from_json(j["control"]);
  if (j.contains("pipeline")) {
    const auto& p = j["pipeline"];
    if (p.contains("filter")) s.pipeline.filter = filter_from_json(p["filter"]);
    s.pipeline.target_dt = p.value("target_dt", 2e-9);
    if (p.contains("tau")) s.pipeline.tau = p["tau"].get<std::vector<double>>();
  }
  if (j.contains("reconstruction")) {
    const auto& r = j["reconstruction"];
    s.reconstruction.mode = r.value("mode", "first_order");
    if (r.contains("recover_labels"))
      s.reconstruction.recover_labels =
          r["recover_labels"].get<std::vector<std::string>>();
    if (r.contains("preconditioned"))
      s.reconstruction.preconditioned =
          r["preconditioned"].get<std::map<std::string, double>>();
    s.reconstruction.output_filter_enabled = r.value("output_filter_enabled", false);
    if (r.contains("output_filter"))
      s.reconstruction.output_filter = filter_from_json(r["output_filter"]);
    s.reconstruction.optimize_preconditioning =
        r.value("optimize_preconditioning", false);
    if (r.contains("optimize_labels"))
      s.reconstruction.optimize_labels =
          r["optimize_labels"].get<std::vector<std::string>>();
    s.reconstruction.optimize_search_scale =
        r.value("optimize_search_scale", 2.0 * M_PI * 1.0e6);
  }
  if (j.contains("sweep_durations"))
    s.sweep_durations = j["sweep_durations"].get<std::vector<double>>();
  if (j.contains("chevron_detunings"))
    s.chevron_detunings = j["chevron_detunings"].get<std::vector<double>>();
  s.chevron_max_duration = j.value("chevron_max_duration", 400e-9);
  return s;
}

namespace {

// ---------------------------------------------------------------------------
// Pipeline stages
// ---------------------------------------------------------------------------

struct ResolvedTruth {
  PauliHamiltonian hamiltonian;   // recon grid
  PauliHamiltonian control;       // reference H_c on the same grid
  double eps_max = 0.0;           // resolved coupler amplitude, if any
};

PauliHamiltonian build_waveform_hamiltonian(const TruthSpec& spec, int qubits,
                                            double dt, int steps, double t_p) {
  PauliHamiltonian h(qubits, dt, steps);
  for (const auto& w : spec.waveforms) {
    const int row = PauliLabel(w.label).index();
    for (int n = 0; n < steps; ++n)
      h.amplitudes()(row, n) += waveform_value(w, n * dt, t_p);
  }
  return h;
}

ResolvedTruth resolve_truth(const Scenario& sc) {
  const double dt = sc.pipeline.target_dt;
  const int steps = static_cast<int>(std::llround(sc.t_p / dt));

  auto build = [&](const TruthSpec& spec, double* eps_out) {
    if (spec.type == "pauli_waveforms")
      return build_waveform_hamiltonian(spec, sc.qubits, dt, steps, sc.t_p);

    // Coupler pulse. Resolve the modulation amplitude from the target area
    // when requested: area = (eps^2/4) |d2J| sum env^2 dt.
    ModulationPulse pulse;
    pulse.ramp_time = spec.pulse_ramp;
    pulse.duration = sc.t_p;
    pulse.phi = spec.pulse_phi;
    double eps = spec.pulse_eps_max;
    if (spec.pulse_area != 0.0) {
      double env2 = 0.0;
      for (int n = 0; n < steps; ++n) {
        const double e = pulse.envelope(n * dt);
        env2 += e * e * dt;
      }
      const double d2j = std::abs(d2j_dphi2(*sc.coupler));
      eps = std::sqrt(std::abs(spec.pulse_area) / (0.25 * d2j * env2));
    }
    pulse.eps_max = eps;
    if (eps_out != nullptr) *eps_out = eps;
    PauliHamiltonian h = modulated_two_qubit_hamiltonian(pulse, *sc.coupler, dt,
                                                         spec.detuning_error);
    for (const auto& [label, value] : spec.inject) {
      const int row = PauliLabel(label).index();
      for (int n = 0; n < steps; ++n) h.amplitudes()(row, n) += value;
    }
    return h;
  };

  ResolvedTruth out{PauliHamiltonian(sc.qubits, dt, steps),
                    PauliHamiltonian(sc.qubits, dt, steps), 0.0};
  out.hamiltonian = build(sc.truth, &out.eps_max);
  if (sc.control.has_value()) {
    out.control = build(*sc.control, nullptr);
  } else if (sc.truth.type == "coupler_pulse") {
    // Default reference: the ideal coupler emission without the detuning
    // residuals or injected disturbances.
    TruthSpec ideal = sc.truth;
    ideal.detuning_error = 0.0;
    ideal.inject.clear();
    if (out.eps_max > 0.0) {
      ideal.pulse_area = 0.0;
      ideal.pulse_eps_max = out.eps_max;
    }
    out.control = build(ideal, nullptr);
  } else {
    out.control = out.hamiltonian;
  }
  return out;
}

std::vector<DissipationRates> resolved_rates(const Scenario& sc) {
  std::vector<DissipationRates> rates;
  for (const auto& ch : sc.channels) {
    DissipationRates r = ch.rates;
    r.gamma_d = measurement_dephasing(ch.readout);  // single source of truth
    rates.push_back(r);
  }
  return rates;
}

struct SynthesizedData {
  ReconstructionInput input;
  std::vector<Mat> tomography;             // independent rho(t_p) per state
  std::vector<Eigen::MatrixXd> true_z;     // per state: qubits x (steps+1)
};

/// Simulates the experiment: Lindblad truth at the raw sample rate, the
/// resonator response, shot-averaged records, calibration and conditioning.
SynthesizedData synthesize(const Scenario& sc, const PauliHamiltonian& truth) {
  const double dt = sc.pipeline.target_dt;
  const int steps = truth.steps();
  const double fs = sc.channels.front().readout.sample_rate;
  const int factor = static_cast<int>(std::llround(fs * dt));
  const double raw_dt = 1.0 / fs;
  const int buffer_steps = static_cast<int>(std::llround(sc.buffer * fs));

  const std::vector<DissipationRates> rates = resolved_rates(sc);
  PauliHamiltonian truth_raw = truth.upsampled(factor);
  PauliHamiltonian buffer_raw(sc.qubits, raw_dt, buffer_steps);

  // Per-channel calibration through the same response model as the data.
  std::vector<Calibration> cal(sc.qubits);
  std::vector<ReadoutParams> readout(sc.qubits);
  for (int q = 0; q < sc.qubits; ++q) {
    readout[q] = sc.channels[q].readout;
    if (sc.noiseless) readout[q].noise_sigma = 0.0;
    auto [plus, minus] =
        calibration_traces(readout[q], 1e-6, sc.shots,
                           derive_stream_seed(sc.seed, "cal/q" + std::to_string(q)));
    cal[q] = Calibration{record_mean(plus), record_mean(minus)};
  }

  SynthesizedData out;
  out.input.qubits = sc.qubits;
  out.input.dt = dt;
  out.input.rates = rates;

  for (size_t si = 0; si < sc.initial_states.size(); ++si) {
    StateRecord rec;
    rec.rho0 = density_from_state_label(sc.initial_states[si]);

    auto [traj_pulse, rho_end] = lindblad_evolve(rec.rho0, truth_raw, rates);
    out.tomography.push_back(rho_end);
    auto [traj_buffer, rho_final] =
        buffer_steps > 0 ? lindblad_evolve(rho_end, buffer_raw, rates)
                         : std::make_pair(BlochTrajectory{}, rho_end);

    Eigen::MatrixXd z_true(sc.qubits, steps + 1);
    rec.z.resize(sc.qubits, steps + 1);
    for (int q = 0; q < sc.qubits; ++q) {
      // Raw z over pulse + buffer.
      const int pulse_pts = truth_raw.steps() + 1;
      Eigen::VectorXd z_raw(pulse_pts + buffer_steps);
      for (int k = 0; k < pulse_pts; ++k) z_raw[k] = traj_pulse.z(q, k);
      for (int k = 0; k < buffer_steps; ++k)
        z_raw[pulse_pts + k] = traj_buffer.z(q, k + 1);
      for (int n = 0; n <= steps; ++n) z_true(q, n) = traj_pulse.z(q, n * factor);

      Eigen::VectorXcd a = (sc.readout_model == "ode")
                               ? resonator_response_ode(z_raw, readout[q])
                               : resonator_response_adiabatic(z_raw, readout[q]);
      MeasurementRecord record = synthesize_shots(
          a, readout[q], sc.shots,
          derive_stream_seed(sc.seed, "state" + std::to_string(si) + "/q" +
                                          std::to_string(q)));
      record.calibration = cal[q];
      const double tau =
          sc.pipeline.tau.empty() ? readout[q].tau() : sc.pipeline.tau[q];
      Eigen::VectorXd z_cond =
          condition_record(record, sc.pipeline.filter, dt, tau, cal[q]);
      if (z_cond.size() < steps + 1)
        throw ConfigError("scenario.buffer too short for the delay correction");
      rec.z.row(q) = z_cond.head(steps + 1).transpose();
    }
    out.true_z.push_back(std::move(z_true));
    out.input.states.push_back(std::move(rec));
  }
  return out;
}

ReconstructionOptions recon_options(const Scenario& sc) {
  ReconstructionOptions opts;
  if (sc.reconstruction.output_filter_enabled)
    opts.output_filter = sc.reconstruction.output_filter;
  return opts;
}

ReconstructionResult run_reconstruction(const Scenario& sc,
                                        SynthesizedData& data,
                                        const PauliHamiltonian& guess,
                                        json* fidelity_extra) {
  ReconstructionInput& input = data.input;
  for (const auto& l : sc.reconstruction.recover_labels)
    input.recover_labels.emplace_back(l);

  std::map<std::string, double> preconditioned = sc.reconstruction.preconditioned;

  if (sc.reconstruction.optimize_preconditioning) {
    std::vector<PauliLabel> labels;
    for (const auto& l : sc.reconstruction.optimize_labels) labels.emplace_back(l);
    auto search = optimize_preconditioning(input, labels, data.tomography,
                                           sc.reconstruction.optimize_search_scale,
                                           recon_options(sc));
    for (size_t i = 0; i < labels.size(); ++i)
      preconditioned[labels[i].str()] =
          search.optimal[static_cast<Eigen::Index>(i)];
    if (fidelity_extra != nullptr) {
      json jopt;
      jopt["labels"] = sc.reconstruction.optimize_labels;
      std::vector<double> vals(search.optimal.data(),
                               search.optimal.data() + search.optimal.size());
      jopt["optimal"] = vals;
      jopt["fidelity_at_zero"] = search.fidelity_at_zero;
      jopt["fidelity_at_optimum"] = search.fidelity_at_optimum;
      jopt["gain"] = search.gain();
      (*fidelity_extra)["preconditioning"] = jopt;
    }
  }

  if (!preconditioned.empty()) {
    std::vector<PauliLabel> labels;
    Eigen::VectorXd values(static_cast<Eigen::Index>(preconditioned.size()));
    Eigen::Index i = 0;
    for (const auto& [l, v] : preconditioned) {
      labels.emplace_back(l);
      values[i++] = v;
    }
    input.preconditioned =
        Preconditioning::constants(labels, values, input.steps());
  }

  ReconstructionMode mode = ReconstructionMode::first_order;
  if (sc.reconstruction.mode == "second_order")
    mode = ReconstructionMode::second_order;
  else if (sc.reconstruction.mode == "fast_slow")
    mode = ReconstructionMode::fast_slow;

  const PauliHamiltonian* guess_ptr =
      (mode == ReconstructionMode::fast_slow) ? &guess : nullptr;
  return reconstruct(input, mode, guess_ptr, recon_options(sc));
}

// ---------------------------------------------------------------------------
// Artifact writers
// ---------------------------------------------------------------------------

void write_amplitude_csv(const PauliHamiltonian& h, const std::string& path) {
  CsvWriter csv;
  csv.add_column("time_s", time_axis(h.dt(), h.steps()));
  for (const auto& label : PauliLabel::all_nontrivial(h.qubits()))
    csv.add_column("omega_" + label.str() + "_rad_s",
                   Eigen::VectorXd(h.amplitudes().row(label.index())));
  csv.write(path);
}

void write_z_traces_csv(const Scenario& sc, const SynthesizedData& data,
                        const std::string& path) {
  const int steps = data.input.steps();
  CsvWriter csv;
  csv.add_column("time_s", time_axis(data.input.dt, steps + 1));
  for (size_t si = 0; si < data.input.states.size(); ++si) {
    for (int q = 0; q < sc.qubits; ++q) {
      const std::string base =
          "s" + std::to_string(si) + "_q" + std::to_string(q);
      csv.add_column(base + "_true",
                     Eigen::VectorXd(data.true_z[si].row(q).transpose()));
      csv.add_column(base + "_cond",
                     Eigen::VectorXd(data.input.states[si].z.row(q).transpose()));
    }
  }
  csv.write(path);
}

void write_diagnostics_csv(const ReconstructionResult& result, double dt,
                           const std::string& path) {
  CsvWriter csv;
  const int steps = result.amplitudes.steps();
  csv.add_column("time_s", time_axis(dt, steps));
  Eigen::VectorXd rank(steps);
  for (int n = 0; n < steps; ++n) rank[n] = result.rank[n];
  csv.add_column("rank", rank);
  csv.add_column("min_singular_value", result.min_singular);
  csv.add_column("residual", result.residual);
  csv.write(path);
}

json manifest_json(const Scenario& sc) {
  json m;
  m["format"] = "hamrec-manifest/1";
  m["version"] = kVersion;
  m["scenario"] = json::parse(sc.to_json_text());
  json derived;
  derived["steps"] = static_cast<int>(std::llround(sc.t_p / sc.pipeline.target_dt));
  json taus = json::array(), shifts = json::array(), gammas = json::array();
  for (int q = 0; q < sc.qubits; ++q) {
    const double tau =
        sc.pipeline.tau.empty() ? sc.channels[q].readout.tau() : sc.pipeline.tau[q];
    taus.push_back(tau);
    shifts.push_back(std::llround(tau / sc.pipeline.target_dt));
    gammas.push_back(measurement_dephasing(sc.channels[q].readout));
  }
  derived["tau_s"] = taus;
  derived["delay_shift_bins"] = shifts;
  derived["gamma_d_used"] = gammas;
  derived["decimation_factor"] = static_cast<int>(
      std::llround(sc.channels.front().readout.sample_rate * sc.pipeline.target_dt));
  m["derived"] = derived;
  return m;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path);
  out << text;
}

RunSummary run_standard(const Scenario& sc, const std::string& dir) {
  auto truth = resolve_truth(sc);
  auto data = synthesize(sc, truth.hamiltonian);

  json fidelity;
  auto result = run_reconstruction(sc, data, truth.control, &fidelity);

  auto mf = mean_state_fidelity(result.final_states, data.tomography);
  auto dyn = dynamical_coherent_fidelity(result.amplitudes, truth.control);

  write_amplitude_csv(truth.hamiltonian, dir + "/truth_amplitudes.csv");
  write_amplitude_csv(result.amplitudes, dir + "/reconstructed_amplitudes.csv");
  write_z_traces_csv(sc, data, dir + "/z_traces.csv");
  write_diagnostics_csv(result, sc.pipeline.target_dt, dir + "/diagnostics.csv");

  CsvWriter dyn_csv;
  dyn_csv.add_column("time_s", time_axis(sc.pipeline.target_dt,
                                         static_cast<int>(dyn.values.size())));
  dyn_csv.add_column("fidelity", dyn.values);
  dyn_csv.write(dir + "/dynamical_fidelity.csv");

  RunSummary summary;
  summary.output_dir = dir;
  summary.mean_fidelity = mf.mean;
  summary.per_state_fidelity = mf.per_state;
  summary.dynamical_final = dyn.values[dyn.values.size() - 1];
  summary.dynamical_min = dyn.values.minCoeff();

  std::vector<double> per_state(mf.per_state.data(),
                                mf.per_state.data() + mf.per_state.size());
  fidelity["per_state"] = per_state;
  fidelity["mean"] = mf.mean;
  Eigen::Index argmin = 0;
  dyn.values.minCoeff(&argmin);
  std::vector<double> trace(dyn.values.data(), dyn.values.data() + dyn.values.size());
  fidelity["dynamical"] = json{{"final", summary.dynamical_final},
                               {"min", summary.dynamical_min},
                               {"t_min_s", argmin * sc.pipeline.target_dt},
                               {"trace", trace}};
  if (truth.eps_max > 0.0) fidelity["resolved_eps_max"] = truth.eps_max;
  write_text(dir + "/fidelity.json", fidelity.dump(2) + "\n");
  return summary;
}

RunSummary run_duration_sweep(const Scenario& sc, const std::string& dir) {
  std::vector<double> durations = sc.sweep_durations;
  std::vector<double> mean_fid;
  json per_run = json::array();
  for (double d : durations) {
    Scenario one = sc;
    one.kind = "standard";
    one.t_p = d;
    // Keep the programmed area; scale the ramp with the duration.
    for (auto& w : one.truth.waveforms)
      if (w.shape == "flat_top") w.ramp = 0.2 * d;
    auto truth = resolve_truth(one);
    auto data = synthesize(one, truth.hamiltonian);
    auto result = run_reconstruction(one, data, truth.control, nullptr);
    auto mf = mean_state_fidelity(result.final_states, data.tomography);
    mean_fid.push_back(mf.mean);
    per_run.push_back(json{{"duration_s", d}, {"mean_fidelity", mf.mean}});
  }

  CsvWriter csv;
  csv.add_column("duration_s", durations);
  csv.add_column("mean_fidelity", mean_fid);
  std::vector<double> infid;
  for (double f : mean_fid) infid.push_back(1.0 - f);
  csv.add_column("mean_infidelity", infid);
  csv.write(dir + "/summary.csv");

  json fidelity;
  fidelity["sweep"] = per_run;
  write_text(dir + "/fidelity.json", fidelity.dump(2) + "\n");

  RunSummary summary;
  summary.output_dir = dir;
  summary.mean_fidelity =
      mean_fid.empty() ? 0.0 : mean_fid[mean_fid.size() - 1];
  return summary;
}

RunSummary run_chevron(const Scenario& sc, const std::string& dir) {
  const double dt = sc.pipeline.target_dt;
  const int steps = static_cast<int>(std::llround(sc.chevron_max_duration / dt));
  const auto rates = resolved_rates(sc);

  std::vector<double> col_det, col_t, col_p01, col_p10;
  for (double det : sc.chevron_detunings) {
    ModulationPulse pulse;
    pulse.eps_max = sc.truth.pulse_eps_max;
    pulse.ramp_time = 0.0;
    pulse.duration = sc.chevron_max_duration;
    pulse.phi = sc.truth.pulse_phi;
    PauliHamiltonian h =
        modulated_two_qubit_hamiltonian(pulse, *sc.coupler, dt, det);
    auto [traj, rho] = lindblad_evolve(density_from_state_label("-Z+Z"), h, rates);
    for (int n = 0; n <= steps; ++n) {
      const double z1 = traj.z(0, n);
      const double z2 = traj.z(1, n);
      const double zz = traj.value(PauliLabel("ZZ"), n);
      col_det.push_back(det);
      col_t.push_back(n * dt);
      col_p01.push_back((1.0 + z1 - z2 - zz) / 4.0);
      col_p10.push_back((1.0 - z1 + z2 - zz) / 4.0);
    }
  }
  CsvWriter csv;
  csv.add_column("detuning_rad_s", col_det);
  csv.add_column("time_s", col_t);
  csv.add_column("p01", col_p01);
  csv.add_column("p10", col_p10);
  csv.write(dir + "/chevron.csv");

  RunSummary summary;
  summary.output_dir = dir;
  return summary;
}

}  // namespace

RunSummary run_scenario(const Scenario& scenario, const std::string& out_root) {
  scenario.validate();
  const std::string dir =
      out_root + "/" + scenario.name + "_seed" + std::to_string(scenario.seed);
  std::filesystem::create_directories(dir);

  Scenario sc = scenario;
  if (sc.noiseless) {
    sc.shots = 1;
    for (auto& ch : sc.channels) ch.readout.noise_sigma = 0.0;
  }

  write_text(dir + "/manifest.json", manifest_json(sc).dump(2) + "\n");

  if (sc.kind == "duration_sweep") return run_duration_sweep(sc, dir);
  if (sc.kind == "chevron") return run_chevron(sc, dir);
  return run_standard(sc, dir);
}

// ---------------------------------------------------------------------------
// Bundled scenarios
// ---------------------------------------------------------------------------

namespace {

QubitChannelSpec channel_q1() {
  QubitChannelSpec ch;
  ch.readout.kappa = 2.0 * M_PI * 11.78e6;
  ch.readout.chi = 2.0 * M_PI * 0.64e6;
  ch.readout.nbar = 0.94;
  ch.readout.omega_wm = 0.5 * ch.readout.kappa * std::sqrt(ch.readout.nbar);
  ch.readout.eta = 0.41;
  ch.readout.sample_rate = 1e9;
  ch.readout.noise_sigma = 0.3;
  ch.readout.gamma_d = 4.0e5;
  ch.rates.gamma_down = 1.0 / 61e-6;
  ch.rates.gamma_up = 0.0;
  ch.rates.gamma_phi = 8.47e3;
  return ch;
}

QubitChannelSpec channel_q2() {
  QubitChannelSpec ch;
  ch.readout.kappa = 2.0 * M_PI * 14.47e6;
  ch.readout.chi = 2.0 * M_PI * 0.75e6;
  ch.readout.nbar = 0.82;
  ch.readout.omega_wm = 0.5 * ch.readout.kappa * std::sqrt(ch.readout.nbar);
  ch.readout.eta = 0.39;
  ch.readout.sample_rate = 1e9;
  ch.readout.noise_sigma = 0.3;
  ch.readout.gamma_d = 4.0e5;
  ch.rates.gamma_down = 1.0 / 41e-6;
  ch.rates.gamma_up = 0.0;
  ch.rates.gamma_phi = 7.81e3;
  return ch;
}

CouplerParams default_coupler() {
  CouplerParams c;
  c.omega_q1 = 2.0 * M_PI * 5.319e9;
  c.omega_q2 = 2.0 * M_PI * 5.271e9;
  c.omega_c0 = 2.0 * M_PI * 6.5e9;  // calibrated-to-figure, not reported
  c.asymmetry = 0.3;
  c.g1c = 2.0 * M_PI * 165e6;
  c.g2c = 2.0 * M_PI * 165e6;
  c.g12 = 2.0 * M_PI * 2e6;
  c.zeta_measured = 2.0 * M_PI * 28.1e3;
  return c;
}

std::vector<std::string> six_states() {
  return {"+Z", "-Z", "+X", "-X", "+Y", "-Y"};
}

std::vector<std::string> sixteen_states() {
  std::vector<std::string> out;
  for (const char* a : {"+X", "+Y", "+Z", "-Z"})
    for (const char* b : {"+X", "+Y", "+Z", "-Z"})
      out.push_back(std::string(a) + b);
  return out;
}

Scenario base_single_qubit(const std::string& name) {
  Scenario s;
  s.name = name;
  s.qubits = 1;
  s.seed = 20260811;
  s.initial_states = six_states();
  s.channels = {channel_q1()};
  s.reconstruction.output_filter_enabled = true;
  return s;
}

Scenario base_two_qubit(const std::string& name) {
  Scenario s;
  s.name = name;
  s.qubits = 2;
  s.seed = 20260811;
  s.initial_states = sixteen_states();
  s.channels = {channel_q1(), channel_q2()};
  s.coupler = default_coupler();
  s.reconstruction.output_filter_enabled = true;
  return s;
}

WaveformSpec flat_top_x(const std::string& label, double area) {
  WaveformSpec w;
  w.label = label;
  w.shape = "flat_top";
  w.area = area;
  w.ramp = 50e-9;
  return w;
}

std::map<std::string, Scenario> build_registry() {
  std::map<std::string, Scenario> reg;

  {
    Scenario s = base_single_qubit("sq_pi_flat_top");
    s.description =
        "Calibrated pi pulse around x with flat top and cosine ramps; the "
        "baseline single-qubit reconstruction.";
    s.truth.type = "pauli_waveforms";
    s.truth.waveforms = {flat_top_x("X", M_PI)};
    reg[s.name] = s;
  }
  {
    Scenario s = base_single_qubit("sq_two_axis");
    s.description =
        "Simultaneous out-of-phase flat-top pulses on both axes; exercises "
        "all six initial states nontrivially.";
    s.truth.type = "pauli_waveforms";
    s.truth.waveforms = {flat_top_x("X", M_PI), flat_top_x("Y", -M_PI)};
    reg[s.name] = s;
  }
  {
    Scenario s = base_single_qubit("sq_pi_sine_error");
    s.description =
        "Flat-top pi pulse with a superimposed one-period sinusoidal error "
        "whose effect integrates to zero; the reference Hamiltonian is the "
        "clean flat top, so the dynamical fidelity dips mid-pulse.";
    s.truth.type = "pauli_waveforms";
    WaveformSpec err;
    err.label = "X";
    err.shape = "sine";
    err.amplitude = 2.0 * M_PI * 1.128e6;  // calibrated to a ~94.8% dip
    err.period = 250e-9;
    s.truth.waveforms = {flat_top_x("X", M_PI), err};
    TruthSpec control;
    control.type = "pauli_waveforms";
    control.waveforms = {flat_top_x("X", M_PI)};
    s.control = control;
    reg[s.name] = s;
  }
  {
    Scenario s = base_single_qubit("fig2e_sweep");
    s.description =
        "Fixed-area pi pulses swept from 50 to 500 ns against the full "
        "resonator ODE; reconstruction degrades once the adiabatic "
        "condition 2 Omega < kappa breaks.";
    s.kind = "duration_sweep";
    s.readout_model = "ode";
    s.truth.type = "pauli_waveforms";
    s.truth.waveforms = {flat_top_x("X", M_PI)};
    s.sweep_durations = {50e-9, 100e-9, 150e-9, 250e-9, 400e-9, 500e-9};
    reg[s.name] = s;
  }
  {
    Scenario s = base_two_qubit("tq_no_pulse");
    s.description =
        "No drive at all; the RMS of each reconstructed series calibrates "
        "the uncertainty band quoted for nontrivial pulses.";
    s.truth.type = "pauli_waveforms";
    reg[s.name] = s;
  }
  {
    Scenario s = base_two_qubit("tq_crosstalk_pi");
    s.description =
        "Single-qubit pi pulse on Q1 reconstructed in the full two-qubit "
        "basis; any crosstalk would show up in the other eleven terms.";
    s.truth.type = "pauli_waveforms";
    s.truth.waveforms = {flat_top_x("XI", M_PI)};
    reg[s.name] = s;
  }
  {
    Scenario s = base_two_qubit("tq_xy_0_minus_half_pi");
    s.description =
        "Coupler-generated XY(0,-pi/2): quarter swap in the single-"
        "excitation subspace, Omega_XX = Omega_YY.";
    s.truth.type = "coupler_pulse";
    s.truth.pulse_phi = M_PI / 2.0;
    s.truth.pulse_area = M_PI / 2.0;
    reg[s.name] = s;
  }
  {
    Scenario s = base_two_qubit("tq_xy_halfpi_halfpi");
    s.description =
        "Coupler-generated XY(pi/2,pi/2): the interaction axis moves to "
        "XY-YX, Omega_XY = -Omega_YX.";
    s.truth.type = "coupler_pulse";
    s.truth.pulse_phi = -M_PI / 4.0;
    s.truth.pulse_area = M_PI / 2.0;
    reg[s.name] = s;
  }
  {
    Scenario s = base_two_qubit("tq_xy_0_pi_detuned");
    s.description =
        "Full-swap XY(0,pi) pulse with injected residual Omega_IZ/Omega_ZI "
        "(off-resonant modulation); optimizing the preconditioning of "
        "Omega_IZ and Omega_ZI against final-state tomography recovers the "
        "injected constants and the implied detuning.";
    s.truth.type = "coupler_pulse";
    s.truth.pulse_phi = 0.0;
    s.truth.pulse_area = M_PI;
    s.truth.inject = {{"IZ", 2.0 * M_PI * 763e3}, {"ZI", 2.0 * M_PI * 392e3}};
    s.reconstruction.optimize_preconditioning = true;
    s.reconstruction.optimize_labels = {"IZ", "ZI"};
    s.reconstruction.optimize_search_scale = 2.0 * M_PI * 1.0e6;
    reg[s.name] = s;
  }
  {
    Scenario s = base_two_qubit("chevron");
    s.description =
        "Population of |01>/|10> under constant parametric modulation vs "
        "modulation detuning and duration; the resonant linecut swaps fully "
        "at t = pi/Omega_ex.";
    s.kind = "chevron";
    s.truth.type = "coupler_pulse";
    s.truth.pulse_eps_max = 0.15;
    s.truth.pulse_ramp = 0.0;
    s.chevron_max_duration = 400e-9;
    s.chevron_detunings.clear();
    for (int k = -6; k <= 6; ++k)
      s.chevron_detunings.push_back(2.0 * M_PI * 2e6 * k / 6.0);
    reg[s.name] = s;
  }
  return reg;
}

const std::map<std::string, Scenario>& registry() {
  static const std::map<std::string, Scenario> reg = build_registry();
  return reg;
}

}  // namespace

std::vector<std::string> list_scenarios() {
  std::vector<std::string> names;
  for (const auto& [name, sc] : registry()) names.push_back(name);
  return names;
}

Scenario bundled_scenario(const std::string& name) {
  auto it = registry().find(name);
  if (it == registry().end())
    throw UnknownScenarioError("unknown scenario '" + name +
                               "'; see `hamrec list`");
  return it->second;
}

std::string describe_scenario(const std::string& name) {
  const Scenario sc = bundled_scenario(name);
  std::string out = sc.name + "\n  " + sc.description + "\n";
  out += "  kind: " + sc.kind + ", qubits: " + std::to_string(sc.qubits) +
         ", states: " + std::to_string(sc.initial_states.size()) +
         ", t_p: " + format_number(sc.t_p) + " s, dt: " +
         format_number(sc.pipeline.target_dt) + " s\n";
  out += "  reconstruction: " + sc.reconstruction.mode;
  if (sc.reconstruction.optimize_preconditioning) {
    out += ", optimizes preconditioning of";
    for (const auto& l : sc.reconstruction.optimize_labels)
      out += " Omega_" + l;
  }
  out += "\n";
  return out;
}

}  // namespace hamrec
