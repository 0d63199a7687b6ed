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

#include "hamrec/fidelity.hpp"

#include <cmath>

#include "hamrec/lindblad.hpp"

namespace hamrec {

namespace {

Mat psd_sqrt(const Mat& rho, const char* who) {
  if (!is_hermitian(rho, 1e-8))
    throw ContractViolationError(std::string(who) + ": state is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-7)
    throw ContractViolationError(std::string(who) +
                                 ": state has eigenvalue below -1e-7");
  Eigen::VectorXd root(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    root[i] = std::sqrt(std::max(ev[i], 0.0));
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double state_fidelity(const Mat& rho, const Mat& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw ContractViolationError("state_fidelity: dimension mismatch");
  Mat root = psd_sqrt(rho, "state_fidelity");
  Mat inner = root * sigma * root;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (inner + Mat(inner.adjoint())));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    sum += std::sqrt(std::max(es.eigenvalues()[i], 0.0));
  return sum * sum;
}

double haar_average_overlap(const Mat& v) {
  const double d = static_cast<double>(v.rows());
  const double tr2 = std::norm(v.trace());
  return (d + tr2) / (d * (d + 1.0));
}

FidelityTrace dynamical_coherent_fidelity(const PauliHamiltonian& h_r,
                                          const PauliHamiltonian& h_c) {
  if (h_r.qubits() != h_c.qubits() || h_r.steps() != h_c.steps() ||
      std::abs(h_r.dt() - h_c.dt()) > 1e-15)
    throw ContractViolationError("dynamical_coherent_fidelity: grid mismatch");
  auto u_r = propagate_unitary_series(h_r);
  auto u_c = propagate_unitary_series(h_c);
  FidelityTrace trace;
  trace.dt = h_r.dt();
  trace.kind = FidelityKind::dynamical_coherent;
  trace.values.resize(static_cast<Eigen::Index>(u_r.size()));
  for (size_t n = 0; n < u_r.size(); ++n)
    trace.values[static_cast<Eigen::Index>(n)] =
        haar_average_overlap(u_c[n].adjoint() * u_r[n]);
  return trace;
}

MeanFidelity mean_state_fidelity(const std::vector<Mat>& final_states,
                                 const std::vector<Mat>& tomography) {
  if (final_states.size() != tomography.size())
    throw ContractViolationError("mean_state_fidelity: state count mismatch");
  MeanFidelity out;
  out.per_state.resize(static_cast<Eigen::Index>(final_states.size()));
  for (size_t s = 0; s < final_states.size(); ++s)
    out.per_state[static_cast<Eigen::Index>(s)] =
        state_fidelity(final_states[s], tomography[s]);
  out.mean = out.per_state.mean();
  return out;
}

}  // namespace hamrec
