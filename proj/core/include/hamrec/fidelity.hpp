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

#include <vector>

#include "hamrec/hamiltonian.hpp"

namespace hamrec {

enum class FidelityKind { state, dynamical_coherent };

struct FidelityTrace {
  double dt = 0.0;
  Eigen::VectorXd values;  // in [0, 1]
  FidelityKind kind = FidelityKind::dynamical_coherent;
};

/// Uhlmann fidelity F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. Symmetric,
/// equals |<psi|phi>|^2 on pure states. Eigenvalues slightly negative from
/// tomography noise are clamped at 0; below -1e-7 the input is rejected.
double state_fidelity(const Mat& rho, const Mat& sigma);

/// Haar-averaged |<psi|V|psi>|^2 in closed form: (d + |Tr V|^2) / (d (d+1)).
double haar_average_overlap(const Mat& v);

/// Dynamical coherent fidelity between the unitaries generated by two
/// amplitude series, evaluated at every grid point via the closed-form Haar
/// average of |<psi|U_c^dag(t) U_r(t)|psi>|^2.
FidelityTrace dynamical_coherent_fidelity(const PauliHamiltonian& h_r,
                                          const PauliHamiltonian& h_c);

struct MeanFidelity {
  Eigen::VectorXd per_state;
  double mean = 0.0;
};

/// state_fidelity between each engine-integrated final state and its
/// tomography, plus the arithmetic mean.
MeanFidelity mean_state_fidelity(const std::vector<Mat>& final_states,
                                 const std::vector<Mat>& tomography);

}  // namespace hamrec
