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

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hamrec/errors.hpp"

namespace hamrec {

/// Resonator and measurement-chain constants for one readout channel.
struct ReadoutParams {
  double kappa = 0.0;       // resonator linewidth, rad/s
  double chi = 0.0;         // full dispersive shift, rad/s
  double omega_wm = 0.0;    // measurement drive amplitude, rad/s
  double nbar = 0.0;        // mean photon number
  double eta = 1.0;         // measurement efficiency, (0, 1]
  double sample_rate = 1e9; // samples/s
  double noise_sigma = 0.0; // per-shot, per-sample voltage noise std (arb.)
  double gamma_d = 0.0;     // calibrated measurement-induced dephasing, 1/s
  double dephasing_per_photon = 0.0;  // optional: Gamma_d = c * nbar when gamma_d == 0

  double tau() const { return 2.0 / kappa; }

  /// |Re a| at z = +/-1, first order in chi/kappa.
  double halfspan() const { return (2.0 * omega_wm / kappa) * (chi / kappa); }

  void validate() const;
};

/// Measurement-induced dephasing rate fed to both the synthesizer and the
/// reconstructor (single source of truth). Returns the calibrated gamma_d
/// when set, else dephasing_per_photon * nbar.
double measurement_dephasing(const ReadoutParams& p);

/// Calibration voltages bracketing the z axis.
struct Calibration {
  double v_plus = std::numeric_limits<double>::quiet_NaN();   // voltage at z = +1
  double v_minus = std::numeric_limits<double>::quiet_NaN();  // voltage at z = -1
  bool valid() const { return std::isfinite(v_plus) && std::isfinite(v_minus); }
};

/// Ensemble-averaged voltage trace plus acquisition metadata. Per-shot
/// records are not retained by default to keep memory flat; a debug flag on
/// synthesize_shots keeps up to 1000 illustrative single shots.
struct MeasurementRecord {
  double sample_rate = 0.0;
  Eigen::VectorXd samples;
  long n_shots_averaged = 0;
  double delay_applied = 0.0;  // resonator delay baked into the samples, s
  Calibration calibration;
  std::vector<Eigen::VectorXd> retained_shots;
};

/// Steady resonator field for a constant qubit z (the fixed point of the
/// field equation of motion).
inline std::complex<double> steady_field(double z, const ReadoutParams& p) {
  const std::complex<double> i(0.0, 1.0);
  return -i * p.omega_wm / ((p.kappa / 2.0) * (1.0 + i * (p.chi / p.kappa) * z));
}

/// Adiabatic model: Re[a(t)] = -(2 Omega_wm/kappa)(chi/kappa) z(t - tau),
/// tau = 2/kappa applied as an exact fractional-sample delay; the imaginary
/// quadrature is the constant -2 Omega_wm/kappa. z before t=0 is held at
/// z(0) (resonator pre-settled on the initial state).
Eigen::VectorXcd resonator_response_adiabatic(const Eigen::VectorXd& z,
                                              const ReadoutParams& p);

/// Full field ODE, RK4 at the sample rate from the steady state of z(0):
/// da/dt = -(kappa/2)(i (chi/kappa) z(t) + 1) a - i Omega_wm.
Eigen::VectorXcd resonator_response_ode(const Eigen::VectorXd& z,
                                        const ReadoutParams& p);

/// Two readout channels are simulated independently (separate parameter
/// sets and noise streams, no RF crosstalk); the noise of distinct
/// channels is uncorrelated by construction.
///
/// Ensemble-averaged record: Re[a(t)] plus white Gaussian noise of std
/// noise_sigma / sqrt(n_shots) per sample (the exact distribution of a mean
/// over n independent shots). Deterministic under a fixed seed. With
/// retain_shots, up to 1000 single-shot draws from independent substreams
/// are kept for inspection; the average itself stays on the reduced path.
MeasurementRecord synthesize_shots(const Eigen::VectorXcd& a, const ReadoutParams& p,
                                   long n_shots, uint64_t seed,
                                   bool retain_shots = false);

/// Steady-state reference records at z = +1 and z = -1, used by the signal
/// pipeline's rescaler.
std::pair<MeasurementRecord, MeasurementRecord> calibration_traces(
    const ReadoutParams& p, double duration, long n_shots, uint64_t seed);

/// Mean of a record's samples (compensated summation).
double record_mean(const MeasurementRecord& r);

/// CSV export (columns time_s, voltage) plus a JSON metadata sidecar at
/// path + ".json" carrying the channel parameters and seed.
void write_record_csv(const MeasurementRecord& r, const ReadoutParams& p,
                      uint64_t seed, const std::string& path);

}  // namespace hamrec
