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

#include <utility>

#include "hamrec/hamiltonian.hpp"

namespace hamrec {

/// Flux-tunable coupler constants. The static ZZ rate zeta is a measured
/// input (deriving it needs transmon levels beyond the two-level model); it
/// can be injected into scenarios as a constant ZZ disturbance.
struct CouplerParams {
  double omega_c0 = 0.0;    // coupler frequency at zero flux, rad/s
  double asymmetry = 0.0;   // SQUID asymmetry d, dimensionless
  double g1c = 0.0;         // qubit-1 to coupler coupling, rad/s
  double g2c = 0.0;         // qubit-2 to coupler coupling, rad/s
  double g12 = 0.0;         // direct qubit-qubit coupling, rad/s
  double omega_q1 = 0.0;    // bare qubit frequencies, rad/s
  double omega_q2 = 0.0;
  double zeta_measured = 0.0;  // static ZZ rate, rad/s

  void validate() const;  // coupler above qubits, 0 <= d < 1
};

/// Coupler tuning curve omega_c0 * (cos^2(pi phi) + d^2 sin^2(pi phi))^(1/4);
/// phi_ext in units of Phi_0.
double coupler_frequency(double phi_ext, const CouplerParams& p);

/// Coupler-mediated exchange J(phi) = (g1c g2c / 2)(1/Delta - 1/Sigma) with
/// the counter-rotating correction, plus the direct coupling g12. Throws
/// OutOfRegimeError outside the dispersive domain |g_ic/Delta_i| < 0.2.
double exchange_coupling(double phi_ext, const CouplerParams& p);

/// J alone (without g12), same validity checks.
double indirect_coupling(double phi_ext, const CouplerParams& p);

/// Lamb-shifted qubit frequencies omega_q + g^2 (1/Delta - 1/Sigma).
std::pair<double, double> lamb_shifted_freqs(double phi_ext, const CouplerParams& p);

/// d^2 J / d phi^2 at phi = 0 by Richardson-extrapolated central differences
/// (step 1e-4 Phi_0).
double d2j_dphi2(const CouplerParams& p);

/// d^2 omega_q_tilde / d phi^2 at phi = 0 for qubit 1 or 2 (the AC-shift
/// curvature).
double d2omega_dphi2(int qubit, const CouplerParams& p);

/// Sinusoidal flux modulation with a flat-top cosine-ramp envelope.
/// beta = 2 * phi (the drive phase sets the XY interaction axis).
struct ModulationPulse {
  double eps_max = 0.0;    // peak modulation amplitude, units of Phi_0
  double ramp_time = 50e-9;
  double duration = 250e-9;
  double omega_phi = 0.0;  // modulation frequency, rad/s (half the detuning)
  double phi = 0.0;        // modulation phase

  /// Envelope in [0, 1] at time t.
  double envelope(double t) const;

  void validate() const;  // perturbative bound |eps| <= 0.2 Phi_0
};

/// Peak exchange amplitude Omega_ex = (eps^2/4) d2J/dphi2 (the 1/4-normalized
/// Pauli amplitude Omega_XX at beta = 0); population of |10> under the
/// emitted Hamiltonian transfers as sin^2(Omega_ex t / 2).
double exchange_rate(const ModulationPulse& pulse, const CouplerParams& p);

/// Rotating-frame two-qubit amplitude series on a dt grid:
///   Omega_XX = Omega_YY = (eps(t)^2/4) d2J cos(2 phi)
///   Omega_XY = -Omega_YX = (eps(t)^2/4) d2J sin(2 phi)
/// A nonzero detuning_error (rad/s) adds constant residual IZ/ZI amplitudes
/// with Omega_IZ - Omega_ZI = 4 * detuning_error, split between the qubits
/// by the ratio of their AC-shift curvatures.
PauliHamiltonian modulated_two_qubit_hamiltonian(const ModulationPulse& pulse,
                                                 const CouplerParams& p, double dt,
                                                 double detuning_error = 0.0);

/// XY(beta, theta): excitation-conserving entangling gate, identity on
/// |00> and |11>, cos(theta/2) / i e^{-+i beta} sin(theta/2) in the
/// single-excitation block. Basis order |00>, |01>, |10>, |11>.
Mat xy_gate(double beta, double theta);

}  // namespace hamrec
