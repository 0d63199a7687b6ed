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

#include "hamrec/pauli.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace hamrec {

namespace {

const Complex kI(0.0, 1.0);

int letter_code(char c) {
  switch (c) {
    case 'I': return 0;
    case 'X': return 1;
    case 'Y': return 2;
    case 'Z': return 3;
    default:
      throw ContractViolationError(std::string("invalid Pauli letter '") + c + "'");
  }
}

Mat single_pauli(char c) {
  switch (c) {
    case 'I': return Mat::Identity(2, 2);
    case 'X': return sigma_x();
    case 'Y': return sigma_y();
    default: return sigma_z();
  }
}

}  // namespace

Mat sigma_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat sigma_y() {
  Mat m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Mat sigma_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat sigma_plus() {
  // |1><0|: absorption, z: +1 -> -1.
  Mat m = Mat::Zero(2, 2);
  m(1, 0) = 1;
  return m;
}

Mat sigma_minus() {
  // |0><1|: decay, z: -1 -> +1.
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat c(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      c.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return c;
}

bool is_hermitian(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Mat& u, double tol) {
  if (u.rows() != u.cols()) return false;
  Mat d = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

PauliLabel::PauliLabel(std::string letters) : letters_(std::move(letters)) {
  if (letters_.empty())
    throw ContractViolationError("empty Pauli label");
  for (char c : letters_) letter_code(c);
}

bool PauliLabel::is_identity() const {
  return letters_.find_first_not_of('I') == std::string::npos;
}

PauliLabel PauliLabel::with_letter(int q, char c) const {
  std::string s = letters_;
  s[q] = c;
  return PauliLabel(s);
}

int PauliLabel::index() const {
  int code = 0;
  for (char c : letters_) code = code * 4 + letter_code(c);
  if (code == 0)
    throw ContractViolationError("identity label has no amplitude index");
  return code - 1;
}

std::vector<PauliLabel> PauliLabel::all_nontrivial(int qubits) {
  const int total = 1 << (2 * qubits);  // 4^Q
  std::vector<PauliLabel> out;
  out.reserve(total - 1);
  for (int code = 1; code < total; ++code) {
    std::string s(qubits, 'I');
    int c = code;
    for (int q = qubits - 1; q >= 0; --q) {
      s[q] = "IXYZ"[c % 4];
      c /= 4;
    }
    out.emplace_back(s);
  }
  return out;
}

std::vector<PauliLabel> PauliLabel::recoverable(int qubits) {
  std::vector<PauliLabel> out;
  for (const auto& p : all_nontrivial(qubits)) {
    const auto& s = p.str();
    if (s.find('X') != std::string::npos || s.find('Y') != std::string::npos)
      out.push_back(p);
  }
  return out;
}

PauliLabel PauliLabel::z_of_qubit(int q, int qubits) {
  std::string s(qubits, 'I');
  s[q] = 'Z';
  return PauliLabel(s);
}

Mat pauli_operator(const PauliLabel& label) {
  Mat m = single_pauli(label.letter(0));
  for (int q = 1; q < label.qubits(); ++q) m = kron(m, single_pauli(label.letter(q)));
  return m;
}

Mat dissipator(const Mat& L, const Mat& rho) {
  if (L.rows() != rho.rows() || L.cols() != rho.cols() || rho.rows() != rho.cols())
    throw ContractViolationError("dissipator: dimension mismatch");
  Mat LdL = L.adjoint() * L;
  return L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL);
}

Mat adjoint_dissipator(const Mat& L, const Mat& a) {
  if (L.rows() != a.rows() || L.cols() != a.cols() || a.rows() != a.cols())
    throw ContractViolationError("adjoint_dissipator: dimension mismatch");
  Mat LdL = L.adjoint() * L;
  return L.adjoint() * a * L - 0.5 * (LdL * a + a * LdL);
}

Mat matrix_exp(const Mat& a) {
  if (a.rows() != a.cols())
    throw ContractViolationError("matrix_exp: matrix must be square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a + a.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    // a = -iH with H Hermitian; exp(a) = V diag(exp(-i lambda)) V^dag.
    Mat h = kI * a;
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Eigen::VectorXcd phases =
        (-kI * es.eigenvalues().cast<Complex>().array()).exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  }
  return a.exp();
}

Eigen::VectorXd bloch_vector(const Mat& rho, int qubits) {
  const int dim = 1 << qubits;
  if (rho.rows() != dim || rho.cols() != dim)
    throw ContractViolationError("bloch_vector: dimension mismatch");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-9)
    throw ContractViolationError("bloch_vector: trace differs from 1 beyond 1e-9");
  auto labels = PauliLabel::all_nontrivial(qubits);
  Eigen::VectorXd b(static_cast<Eigen::Index>(labels.size()));
  for (size_t i = 0; i < labels.size(); ++i)
    b[static_cast<Eigen::Index>(i)] = (rho * pauli_operator(labels[i])).trace().real();
  return b;
}

Mat density_from_bloch(const Eigen::VectorXd& b, int qubits) {
  const int dim = 1 << qubits;
  auto labels = PauliLabel::all_nontrivial(qubits);
  if (b.size() != static_cast<Eigen::Index>(labels.size()))
    throw ContractViolationError("density_from_bloch: wrong component count");
  Mat rho = Mat::Identity(dim, dim);
  for (size_t i = 0; i < labels.size(); ++i)
    rho += b[static_cast<Eigen::Index>(i)] * pauli_operator(labels[i]);
  return rho / static_cast<double>(dim);
}

Mat density_from_state_label(const std::string& label) {
  if (label.size() < 2 || label.size() % 2 != 0)
    throw ContractViolationError("state label must be sign+axis tokens: " + label);
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd psi;
  for (size_t i = 0; i < label.size(); i += 2) {
    const char sign = label[i];
    const char axis = label[i + 1];
    if (sign != '+' && sign != '-')
      throw ContractViolationError("state label token must start with +/-: " + label);
    Eigen::VectorXcd ket(2);
    switch (axis) {
      case 'X': ket << s, (sign == '+' ? s : -s); break;
      case 'Y': ket << s, (sign == '+' ? kI * s : -kI * s); break;
      case 'Z':
        if (sign == '+') ket << 1, 0;
        else ket << 0, 1;
        break;
      default:
        throw ContractViolationError("state label axis must be X/Y/Z: " + label);
    }
    if (psi.size() == 0) {
      psi = ket;
    } else {
      Eigen::VectorXcd out(psi.size() * 2);
      for (Eigen::Index k = 0; k < psi.size(); ++k) {
        out[2 * k] = psi[k] * ket[0];
        out[2 * k + 1] = psi[k] * ket[1];
      }
      psi = out;
    }
  }
  return psi * psi.adjoint();
}

}  // namespace hamrec
