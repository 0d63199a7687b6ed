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

#include "hamrec/coupler.hpp"

#include <cmath>
#include <functional>

namespace hamrec {

namespace {

constexpr double kDiffStep = 1e-4;  // flux step for curvature estimates, Phi_0

void check_dispersive(double phi_ext, const CouplerParams& p) {
  const double wc = coupler_frequency(phi_ext, p);
  const double couplings[2] = {p.g1c, p.g2c};
  const double freqs[2] = {p.omega_q1, p.omega_q2};
  for (int i = 0; i < 2; ++i) {
    const double delta = freqs[i] - wc;
    if (delta == 0.0 || std::abs(couplings[i] / delta) >= 0.2)
      throw OutOfRegimeError(
          "coupler leaves the dispersive domain |g/Delta| < 0.2 at phi_ext = " +
          std::to_string(phi_ext));
  }
}

// Richardson-extrapolated second central difference at phi = 0.
double second_derivative_at_zero(const std::function<double(double)>& f) {
  auto d2 = [&](double h) { return (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h); };
  const double coarse = d2(kDiffStep);
  const double fine = d2(kDiffStep / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

void CouplerParams::validate() const {
  if (!(omega_c0 > std::max(omega_q1, omega_q2)))
    throw ContractViolationError(
        "CouplerParams: coupler frequency must lie above both qubits");
  if (!(asymmetry >= 0.0 && asymmetry < 1.0))
    throw ContractViolationError("CouplerParams: asymmetry must lie in [0, 1)");
  if (!(omega_q1 > 0.0 && omega_q2 > 0.0))
    throw ContractViolationError("CouplerParams: qubit frequencies must be positive");
}

double coupler_frequency(double phi_ext, const CouplerParams& p) {
  const double c = std::cos(M_PI * phi_ext);
  const double s = std::sin(M_PI * phi_ext);
  return p.omega_c0 *
         std::pow(c * c + p.asymmetry * p.asymmetry * s * s, 0.25);
}

double indirect_coupling(double phi_ext, const CouplerParams& p) {
  check_dispersive(phi_ext, p);
  const double wc = coupler_frequency(phi_ext, p);
  const double inv_delta = 1.0 / (p.omega_q1 - wc) + 1.0 / (p.omega_q2 - wc);
  const double inv_sigma = 1.0 / (p.omega_q1 + wc) + 1.0 / (p.omega_q2 + wc);
  return 0.5 * p.g1c * p.g2c * (inv_delta - inv_sigma);
}

double exchange_coupling(double phi_ext, const CouplerParams& p) {
  return indirect_coupling(phi_ext, p) + p.g12;
}

std::pair<double, double> lamb_shifted_freqs(double phi_ext, const CouplerParams& p) {
  check_dispersive(phi_ext, p);
  const double wc = coupler_frequency(phi_ext, p);
  auto shifted = [&](double wq, double g) {
    return wq + g * g * (1.0 / (wq - wc) - 1.0 / (wq + wc));
  };
  return {shifted(p.omega_q1, p.g1c), shifted(p.omega_q2, p.g2c)};
}

double d2j_dphi2(const CouplerParams& p) {
  return second_derivative_at_zero(
      [&](double phi) { return indirect_coupling(phi, p); });
}

double d2omega_dphi2(int qubit, const CouplerParams& p) {
  if (qubit != 0 && qubit != 1)
    throw ContractViolationError("d2omega_dphi2: qubit index must be 0 or 1");
  return second_derivative_at_zero([&](double phi) {
    auto [w1, w2] = lamb_shifted_freqs(phi, p);
    return qubit == 0 ? w1 : w2;
  });
}

double ModulationPulse::envelope(double t) const {
  if (t < 0.0 || t > duration) return 0.0;
  if (ramp_time <= 0.0) return 1.0;
  if (t < ramp_time) return 0.5 * (1.0 - std::cos(M_PI * t / ramp_time));
  if (t > duration - ramp_time)
    return 0.5 * (1.0 - std::cos(M_PI * (duration - t) / ramp_time));
  return 1.0;
}

void ModulationPulse::validate() const {
  if (!(eps_max >= 0.0 && eps_max <= 0.2))
    throw ContractViolationError(
        "ModulationPulse: |eps| must stay within 0.2 Phi_0 (perturbative bound)");
  if (!(duration > 0.0) || ramp_time < 0.0 || 2.0 * ramp_time > duration)
    throw ContractViolationError("ModulationPulse: inconsistent envelope times");
}

double exchange_rate(const ModulationPulse& pulse, const CouplerParams& p) {
  pulse.validate();
  return (pulse.eps_max * pulse.eps_max / 4.0) * d2j_dphi2(p);
}

PauliHamiltonian modulated_two_qubit_hamiltonian(const ModulationPulse& pulse,
                                                 const CouplerParams& p, double dt,
                                                 double detuning_error) {
  pulse.validate();
  p.validate();
  const int steps = static_cast<int>(std::llround(pulse.duration / dt));
  PauliHamiltonian h(2, dt, steps);

  const double d2j = d2j_dphi2(p);
  const double beta = 2.0 * pulse.phi;
  const int xx = PauliLabel("XX").index();
  const int yy = PauliLabel("YY").index();
  const int xy = PauliLabel("XY").index();
  const int yx = PauliLabel("YX").index();
  for (int n = 0; n < steps; ++n) {
    const double eps = pulse.eps_max * pulse.envelope(n * dt);
    const double amp = (eps * eps / 4.0) * d2j;
    h.amplitudes()(xx, n) = amp * std::cos(beta);
    h.amplitudes()(yy, n) = amp * std::cos(beta);
    h.amplitudes()(xy, n) = amp * std::sin(beta);
    h.amplitudes()(yx, n) = -amp * std::sin(beta);
  }

  if (detuning_error != 0.0) {
    // Uncancelled AC-shift difference, split by the curvature ratio.
    const double c1 = std::abs(d2omega_dphi2(0, p));
    const double c2 = std::abs(d2omega_dphi2(1, p));
    const double omega_iz = 4.0 * detuning_error * c2 / (c1 + c2);
    const double omega_zi = -4.0 * detuning_error * c1 / (c1 + c2);
    h.amplitudes().row(PauliLabel("IZ").index()).setConstant(omega_iz);
    h.amplitudes().row(PauliLabel("ZI").index()).setConstant(omega_zi);
  }
  return h;
}

Mat xy_gate(double beta, double theta) {
  const std::complex<double> i(0.0, 1.0);
  Mat u = Mat::Identity(4, 4);
  const double c = std::cos(theta / 2.0);
  const std::complex<double> s = std::sin(theta / 2.0);
  u(1, 1) = c;
  u(2, 2) = c;
  u(1, 2) = i * std::exp(-i * beta) * s;
  u(2, 1) = i * std::exp(i * beta) * s;
  return u;
}

}  // namespace hamrec
