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

#include "hamrec/hamiltonian.hpp"

namespace hamrec {

PauliHamiltonian::PauliHamiltonian(int qubits, double dt, int steps)
    : qubits_(qubits),
      dt_(dt),
      normalization_(1.0 / static_cast<double>(1 << qubits)) {
  if (qubits < 1)
    throw ContractViolationError("PauliHamiltonian: qubit count must be >= 1");
  if (dt <= 0.0)
    throw ContractViolationError("PauliHamiltonian: dt must be positive");
  if (steps < 0)
    throw ContractViolationError("PauliHamiltonian: negative step count");
  const int n_labels = (1 << (2 * qubits)) - 1;
  amplitudes_ = Eigen::MatrixXd::Zero(n_labels, steps);
  basis_.reserve(n_labels);
  for (const auto& label : PauliLabel::all_nontrivial(qubits))
    basis_.push_back(pauli_operator(label));
}

Mat PauliHamiltonian::matrix_at(int n) const {
  if (n < 0 || n >= steps())
    throw ContractViolationError("PauliHamiltonian::matrix_at: step out of range");
  return matrix_from_amplitudes(amplitudes_.col(n));
}

Mat PauliHamiltonian::matrix_from_amplitudes(const Eigen::VectorXd& amps) const {
  if (amps.size() != amplitudes_.rows())
    throw ContractViolationError("matrix_from_amplitudes: wrong component count");
  const int dim = 1 << qubits_;
  Mat h = Mat::Zero(dim, dim);
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    if (amps[i] != 0.0) h += amps[i] * basis_[static_cast<size_t>(i)];
  }
  return normalization_ * h;
}

PauliHamiltonian PauliHamiltonian::upsampled(int factor) const {
  if (factor < 1)
    throw ContractViolationError("upsampled: factor must be >= 1");
  PauliHamiltonian fine(qubits_, dt_ / factor, steps() * factor);
  for (int n = 0; n < steps(); ++n)
    for (int k = 0; k < factor; ++k)
      fine.amplitudes_.col(n * factor + k) = amplitudes_.col(n);
  return fine;
}

}  // namespace hamrec
