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

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hamrec/errors.hpp"

namespace hamrec {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// Basis convention: |0> = (1,0)^T is the ground state with sigma_z|0> = +|0>,
// so z = +1 corresponds to the ground state. sigma_minus() lowers energy
// (|1> -> |0>, raises z); sigma_plus() does the opposite.

Mat sigma_x();
Mat sigma_y();
Mat sigma_z();
Mat sigma_plus();
Mat sigma_minus();

/// Kronecker product; the first factor is the most significant qubit.
Mat kron(const Mat& a, const Mat& b);

bool is_hermitian(const Mat& a, double tol = 1e-12);
bool is_unitary(const Mat& u, double tol = 1e-10);

/// A word over {I, X, Y, Z}, one letter per qubit. The all-I word indexes
/// the identity and is excluded from Hamiltonian amplitude vectors.
class PauliLabel {
 public:
  explicit PauliLabel(std::string letters);

  int qubits() const { return static_cast<int>(letters_.size()); }
  char letter(int q) const { return letters_[q]; }
  bool is_identity() const;
  const std::string& str() const { return letters_; }

  /// Copy with the letter at qubit q replaced.
  PauliLabel with_letter(int q, char c) const;

  /// Position in the fixed enumeration of non-identity labels for this
  /// qubit count (base-4 code with I=0, X=1, Y=2, Z=3, minus one).
  int index() const;

  /// All 4^Q - 1 non-identity labels, in index() order.
  static std::vector<PauliLabel> all_nontrivial(int qubits);

  /// Labels recoverable by the first-order update: at least one letter in
  /// {X, Y}. Count is 4^Q - 1 - (2^Q - 1).
  static std::vector<PauliLabel> recoverable(int qubits);

  /// Single-qubit sigma_z embedded at qubit q ("Z" at q, "I" elsewhere).
  static PauliLabel z_of_qubit(int q, int qubits);

  bool operator==(const PauliLabel& o) const { return letters_ == o.letters_; }
  bool operator!=(const PauliLabel& o) const { return !(*this == o); }
  bool operator<(const PauliLabel& o) const { return letters_ < o.letters_; }

 private:
  std::string letters_;
};

/// Tensor product of single-qubit Paulis for the given word. Hermitian,
/// traceless unless all-I.
Mat pauli_operator(const PauliLabel& label);

/// D[L]rho = L rho L^dag - (1/2){L^dag L, rho}. Traceless for any rho.
Mat dissipator(const Mat& L, const Mat& rho);

/// Heisenberg-picture adjoint: D^dag[L]A = L^dag A L - (1/2){L^dag L, A}.
Mat adjoint_dissipator(const Mat& L, const Mat& a);

/// exp(A). Skew-Hermitian inputs (within 1e-12) go through a Hermitian
/// eigendecomposition, which keeps propagators unitary; everything else
/// uses scaling-and-squaring Pade.
Mat matrix_exp(const Mat& a);

/// Pauli expectation values Tr(rho P) for all non-identity labels, in
/// index() order. rho must be Hermitian with unit trace.
Eigen::VectorXd bloch_vector(const Mat& rho, int qubits);

/// Inverse of bloch_vector: rho = (I + sum_P b_P P) / 2^Q.
Mat density_from_bloch(const Eigen::VectorXd& b, int qubits);

/// Density matrix of a cardinal product state from a label such as "+Z",
/// "-Y" or "+X-Z" (one sign+axis token per qubit).
Mat density_from_state_label(const std::string& label);

}  // namespace hamrec
