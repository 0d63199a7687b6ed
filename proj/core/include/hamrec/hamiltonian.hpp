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

#include <Eigen/Dense>

#include "hamrec/pauli.hpp"

namespace hamrec {

/// Per-qubit dissipation rates, all in 1/s.
struct DissipationRates {
  double gamma_down = 0.0;  // spontaneous relaxation
  double gamma_up = 0.0;    // absorption
  double gamma_phi = 0.0;   // intrinsic dephasing
  double gamma_d = 0.0;     // measurement-induced dephasing

  double gamma1() const { return gamma_down + gamma_up; }
  double gamma_delta() const { return gamma_down - gamma_up; }
  double gamma2() const { return gamma_d + gamma_phi + gamma1() / 2.0; }

  void validate() const {
    if (gamma_down < 0 || gamma_up < 0 || gamma_phi < 0 || gamma_d < 0)
      throw ContractViolationError("dissipation rates must be non-negative");
  }
};

/// Drive amplitudes over the non-identity Pauli basis, piecewise constant
/// within each dt bin (zero-order hold). Amplitudes are in rad/s; the
/// matrix form is normalization * sum_P amplitude_P(n) * P with
/// normalization = 1/2^Q, so the single-qubit (1/2) and two-qubit (1/4)
/// conventions coexist.
class PauliHamiltonian {
 public:
  PauliHamiltonian(int qubits, double dt, int steps);

  static PauliHamiltonian zero(int qubits, double dt, int steps) {
    return PauliHamiltonian(qubits, dt, steps);
  }

  int qubits() const { return qubits_; }
  double dt() const { return dt_; }
  int steps() const { return static_cast<int>(amplitudes_.cols()); }
  double normalization() const { return normalization_; }

  /// Amplitude series for one label (row view, length steps()).
  Eigen::MatrixXd::RowXpr amplitude(const PauliLabel& label) {
    return amplitudes_.row(label.index());
  }
  Eigen::MatrixXd::ConstRowXpr amplitude(const PauliLabel& label) const {
    return amplitudes_.row(label.index());
  }

  /// All series, rows in PauliLabel::index() order.
  const Eigen::MatrixXd& amplitudes() const { return amplitudes_; }
  Eigen::MatrixXd& amplitudes() { return amplitudes_; }

  /// Hamiltonian matrix (rad/s) at step n.
  Mat matrix_at(int n) const;

  /// Column of all amplitudes at step n.
  Eigen::VectorXd row_at(int n) const { return amplitudes_.col(n); }

  /// Matrix built from an arbitrary amplitude column (same label order).
  Mat matrix_from_amplitudes(const Eigen::VectorXd& amps) const;

  /// Sum of a label's series times dt (the pulse area, rad).
  double area(const PauliLabel& label) const {
    return amplitude(label).sum() * dt_;
  }

  /// Same amplitudes re-held on a finer grid; factor must divide dt evenly.
  PauliHamiltonian upsampled(int factor) const;

 private:
  int qubits_;
  double dt_;
  double normalization_;
  Eigen::MatrixXd amplitudes_;  // (4^Q - 1) x steps
  std::vector<Mat> basis_;      // cached Pauli matrices, index order
};

/// Time-indexed Pauli expectation values for one evolving state.
/// values has 4^Q - 1 rows (label index order) and steps + 1 columns.
struct BlochTrajectory {
  int qubits = 0;
  double dt = 0.0;
  Eigen::MatrixXd values;

  int points() const { return static_cast<int>(values.cols()); }
  double value(const PauliLabel& label, int n) const {
    return values(label.index(), n);
  }
  /// z coordinate of qubit q at point n.
  double z(int q, int n) const {
    return values(PauliLabel::z_of_qubit(q, qubits).index(), n);
  }
  /// Euclidean norm of the single-qubit Bloch vector at point n (Q=1 only).
  double bloch_norm(int n) const { return values.col(n).norm(); }
};

}  // namespace hamrec
