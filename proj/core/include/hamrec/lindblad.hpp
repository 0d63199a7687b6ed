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
#include <vector>

#include "hamrec/hamiltonian.hpp"

namespace hamrec {

/// Dissipation channels for a register: per qubit q, amplitude damping via
/// sigma_- at gamma_down and sigma_+ at gamma_up, and sigma_z dephasing at
/// rate (gamma_d + gamma_phi)/2. With those rates the coherences decay at
/// Gamma_2 = Gamma_d + Gamma_phi + Gamma_1/2 and z relaxes as
/// dz/dt = -Gamma_1 z + Gamma_Delta.
class LindbladChannels {
 public:
  LindbladChannels(int qubits, const std::vector<DissipationRates>& rates);

  /// -i[H, rho] + sum_k rate_k D[L_k] rho.
  Mat rhs(const Mat& h, const Mat& rho) const;

  /// Heisenberg drift of an observable: sum_k rate_k D^dag[L_k] A.
  Mat adjoint_rhs(const Mat& a) const;

  int qubits() const { return qubits_; }
  const std::vector<DissipationRates>& rates() const { return rates_; }

 private:
  struct Channel {
    double rate;
    Mat L;
    Mat Ldag;
    Mat LdL;
  };
  int qubits_;
  std::vector<DissipationRates> rates_;
  std::vector<Channel> channels_;
};

/// One RK4 step of the master equation with H held constant, split into
/// `substeps` substeps. Checks trace preservation (throws
/// IntegrationFailureError beyond 1e-6).
Mat lindblad_step(const Mat& rho, const Mat& h, const LindbladChannels& channels,
                  double dt, int substeps = 4);

/// Integrates rho0 through the full amplitude series and records the Pauli
/// expectations at every grid point (steps + 1 of them). Trace is preserved
/// to 1e-9 and the minimum eigenvalue stays above -1e-7; violations throw.
std::pair<BlochTrajectory, Mat> lindblad_evolve(
    const Mat& rho0, const PauliHamiltonian& h,
    const std::vector<DissipationRates>& rates, int substeps = 4);

/// Time-ordered product prod_n exp(-i H(t_n) dt) up to (excluding) step
/// up_to_step. Unitary to 1e-9.
Mat propagate_unitary(const PauliHamiltonian& h, int up_to_step);

/// All partial products U(t_n) for n = 0..steps (steps + 1 entries).
std::vector<Mat> propagate_unitary_series(const PauliHamiltonian& h);

/// First-order (Euler) prediction of all Pauli expectations one step ahead,
/// the discrete forward model that the first-order reconstruction inverts.
Eigen::VectorXd heisenberg_step_predict(const Eigen::VectorXd& expectations,
                                        const Eigen::VectorXd& amplitudes,
                                        const std::vector<DissipationRates>& rates,
                                        double dt, int qubits);

}  // namespace hamrec
