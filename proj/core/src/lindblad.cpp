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

#include "hamrec/lindblad.hpp"

#include <cmath>

namespace hamrec {

namespace {

const Complex kI(0.0, 1.0);

Mat embed_at(const Mat& op, int q, int qubits) {
  Mat m = (q == 0) ? op : Mat::Identity(2, 2);
  for (int k = 1; k < qubits; ++k)
    m = kron(m, (k == q) ? op : Mat::Identity(2, 2));
  return m;
}

}  // namespace

LindbladChannels::LindbladChannels(int qubits,
                                   const std::vector<DissipationRates>& rates)
    : qubits_(qubits), rates_(rates) {
  if (static_cast<int>(rates.size()) != qubits)
    throw ContractViolationError("LindbladChannels: one rate set per qubit required");
  for (int q = 0; q < qubits; ++q) {
    rates[q].validate();
    const double dephasing = (rates[q].gamma_d + rates[q].gamma_phi) / 2.0;
    const struct {
      double rate;
      Mat op;
    } defs[] = {
        {rates[q].gamma_down, sigma_minus()},
        {rates[q].gamma_up, sigma_plus()},
        {dephasing, sigma_z()},
    };
    for (const auto& d : defs) {
      if (d.rate == 0.0) continue;
      Channel ch;
      ch.rate = d.rate;
      ch.L = embed_at(d.op, q, qubits);
      ch.Ldag = ch.L.adjoint();
      ch.LdL = ch.Ldag * ch.L;
      channels_.push_back(std::move(ch));
    }
  }
}

Mat LindbladChannels::rhs(const Mat& h, const Mat& rho) const {
  Mat out = -kI * (h * rho - rho * h);
  for (const auto& ch : channels_) {
    out += ch.rate * (ch.L * rho * ch.Ldag - 0.5 * (ch.LdL * rho + rho * ch.LdL));
  }
  return out;
}

Mat LindbladChannels::adjoint_rhs(const Mat& a) const {
  Mat out = Mat::Zero(a.rows(), a.cols());
  for (const auto& ch : channels_) {
    out += ch.rate * (ch.Ldag * a * ch.L - 0.5 * (ch.LdL * a + a * ch.LdL));
  }
  return out;
}

Mat lindblad_step(const Mat& rho, const Mat& h, const LindbladChannels& channels,
                  double dt, int substeps) {
  Mat r = rho;
  const double hstep = dt / substeps;
  for (int s = 0; s < substeps; ++s) {
    Mat k1 = channels.rhs(h, r);
    Mat k2 = channels.rhs(h, r + 0.5 * hstep * k1);
    Mat k3 = channels.rhs(h, r + 0.5 * hstep * k2);
    Mat k4 = channels.rhs(h, r + hstep * k3);
    r += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  const double trace_err = std::abs(r.trace().real() - 1.0) + std::abs(r.trace().imag());
  if (!(trace_err < 1e-6))
    throw IntegrationFailureError(
        "lindblad_step: trace drift " + std::to_string(trace_err) +
        " exceeds 1e-6; dt too coarse for the given amplitudes");
  return r;
}

std::pair<BlochTrajectory, Mat> lindblad_evolve(
    const Mat& rho0, const PauliHamiltonian& h,
    const std::vector<DissipationRates>& rates, int substeps) {
  const int qubits = h.qubits();
  const int dim = 1 << qubits;
  if (rho0.rows() != dim || rho0.cols() != dim)
    throw ContractViolationError("lindblad_evolve: state dimension mismatch");
  if (!is_hermitian(rho0, 1e-9) || std::abs(rho0.trace().real() - 1.0) > 1e-9)
    throw ContractViolationError("lindblad_evolve: rho0 is not a density matrix");

  LindbladChannels channels(qubits, rates);
  const auto labels = PauliLabel::all_nontrivial(qubits);
  std::vector<Mat> basis;
  basis.reserve(labels.size());
  for (const auto& l : labels) basis.push_back(pauli_operator(l));

  BlochTrajectory traj;
  traj.qubits = qubits;
  traj.dt = h.dt();
  traj.values.resize(static_cast<Eigen::Index>(labels.size()), h.steps() + 1);

  Mat rho = rho0;
  auto record = [&](int n) {
    for (size_t i = 0; i < basis.size(); ++i)
      traj.values(static_cast<Eigen::Index>(i), n) = (rho * basis[i]).trace().real();
  };
  auto check_state = [&](int n) {
    const double tr_err = std::abs(rho.trace().real() - 1.0);
    if (!(tr_err < 1e-9))
      throw IntegrationFailureError("lindblad_evolve: trace drift at step " +
                                    std::to_string(n));
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + Mat(rho.adjoint())));
    if (es.eigenvalues().minCoeff() < -1e-7)
      throw IntegrationFailureError("lindblad_evolve: negative eigenvalue at step " +
                                    std::to_string(n));
  };

  record(0);
  for (int n = 0; n < h.steps(); ++n) {
    rho = lindblad_step(rho, h.matrix_at(n), channels, h.dt(), substeps);
    check_state(n + 1);
    record(n + 1);
  }
  return {std::move(traj), std::move(rho)};
}

Mat propagate_unitary(const PauliHamiltonian& h, int up_to_step) {
  if (up_to_step < 0 || up_to_step > h.steps())
    throw ContractViolationError("propagate_unitary: step out of range");
  const int dim = 1 << h.qubits();
  Mat u = Mat::Identity(dim, dim);
  for (int n = 0; n < up_to_step; ++n)
    u = matrix_exp(-kI * h.dt() * h.matrix_at(n)) * u;
  return u;
}

std::vector<Mat> propagate_unitary_series(const PauliHamiltonian& h) {
  const int dim = 1 << h.qubits();
  std::vector<Mat> out;
  out.reserve(h.steps() + 1);
  Mat u = Mat::Identity(dim, dim);
  out.push_back(u);
  for (int n = 0; n < h.steps(); ++n) {
    u = matrix_exp(-kI * h.dt() * h.matrix_at(n)) * u;
    out.push_back(u);
  }
  return out;
}

Eigen::VectorXd heisenberg_step_predict(const Eigen::VectorXd& expectations,
                                        const Eigen::VectorXd& amplitudes,
                                        const std::vector<DissipationRates>& rates,
                                        double dt, int qubits) {
  // Euler step of the master equation expressed on Pauli expectations;
  // identical to the first-order Heisenberg update by duality.
  PauliHamiltonian h(qubits, dt, 1);
  h.amplitudes().col(0) = amplitudes;
  LindbladChannels channels(qubits, rates);
  Mat rho = density_from_bloch(expectations, qubits);
  Mat next = rho + dt * channels.rhs(h.matrix_at(0), rho);
  const auto labels = PauliLabel::all_nontrivial(qubits);
  Eigen::VectorXd out(expectations.size());
  for (size_t i = 0; i < labels.size(); ++i)
    out[static_cast<Eigen::Index>(i)] =
        (next * pauli_operator(labels[i])).trace().real();
  return out;
}

}  // namespace hamrec
