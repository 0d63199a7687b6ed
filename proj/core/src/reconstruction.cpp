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

#include "hamrec/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hamrec/fidelity.hpp"

namespace hamrec {

namespace {

constexpr double kRankTol = 1e-6;  // relative singular-value cutoff

const std::complex<double> kI(0.0, 1.0);

struct SvdSolve {
  Eigen::VectorXd solution;
  int rank;
  double min_singular;
};

SvdSolve solve_least_squares(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs,
                             int step) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = kRankTol * (sv.size() > 0 ? sv[0] : 0.0);
  const int want = static_cast<int>(m.cols());
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff && sv[i] > 0.0) ++rank;
  if (rank < want) {
    std::vector<double> spectrum(sv.data(), sv.data() + sv.size());
    throw SingularSystemError(
        "design matrix rank " + std::to_string(rank) + " < " + std::to_string(want) +
            " at step " + std::to_string(step) +
            " (insufficient initial-state diversity or Bloch-vector collapse)",
        step, std::move(spectrum));
  }
  SvdSolve out;
  out.solution = svd.solve(rhs);
  out.rank = rank;
  out.min_singular = sv[want - 1];
  return out;
}

// Measured-coordinate labels: z of every qubit, in qubit order.
std::vector<PauliLabel> z_labels(int qubits) {
  std::vector<PauliLabel> out;
  out.reserve(qubits);
  for (int q = 0; q < qubits; ++q) out.push_back(PauliLabel::z_of_qubit(q, qubits));
  return out;
}

// Dissipative drift of <Z_q>: Gamma_Delta - Gamma_1 * z.
double z_drift(const DissipationRates& r, double z) {
  return r.gamma_delta() - r.gamma1() * z;
}

}  // namespace

Preconditioning Preconditioning::constants(const std::vector<PauliLabel>& labels,
                                           const Eigen::VectorXd& values, int steps) {
  if (values.size() != static_cast<Eigen::Index>(labels.size()))
    throw ContractViolationError("Preconditioning::constants: size mismatch");
  Preconditioning p;
  p.labels = labels;
  p.series.resize(labels.size(), steps);
  for (Eigen::Index i = 0; i < values.size(); ++i)
    p.series.row(i).setConstant(values[i]);
  return p;
}

int ReconstructionInput::steps() const {
  if (states.empty()) return 0;
  return static_cast<int>(states.front().z.cols()) - 1;
}

void ReconstructionInput::validate(ReconstructionMode mode) const {
  const int d = 1 << qubits;
  const int s_min = (mode == ReconstructionMode::second_order)
                        ? 3
                        : d * (d - 1) / qubits;
  if (static_cast<int>(states.size()) < s_min)
    throw ConfigError("reconstruction requires S >= " + std::to_string(s_min) +
                      " initial states for " + std::to_string(qubits) +
                      " qubit(s) in this mode; got " + std::to_string(states.size()));
  if (static_cast<int>(rates.size()) != qubits)
    throw ConfigError("reconstruction: one DissipationRates per qubit required");
  if (!(dt > 0.0)) throw ConfigError("reconstruction: dt must be positive");
  const int dim = 1 << qubits;
  const Eigen::Index cols = states.front().z.cols();
  if (cols < 2) throw ConfigError("reconstruction: need at least two z samples");
  for (const auto& s : states) {
    if (s.z.rows() != qubits || s.z.cols() != cols)
      throw ConfigError("reconstruction: inconsistent z series shapes");
    if (s.rho0.rows() != dim || s.rho0.cols() != dim)
      throw ConfigError("reconstruction: rho0 dimension mismatch");
  }
  if (mode == ReconstructionMode::second_order && qubits != 1)
    throw ConfigError("second-order update is defined for a single qubit");
  if (mode != ReconstructionMode::second_order) {
    for (const auto& l : recover_labels) {
      const auto& s = l.str();
      if (s.find('X') == std::string::npos && s.find('Y') == std::string::npos)
        throw ConfigError("label " + s + " is not observable by the first-order update");
    }
  }
  if (!preconditioned.empty() &&
      preconditioned.series.cols() != cols - 1)
    throw ConfigError("preconditioned series length must equal the step count");
}

DesignMatrixBuilder::DesignMatrixBuilder(int qubits,
                                         std::vector<PauliLabel> recover_labels,
                                         std::vector<PauliLabel> measured_labels)
    : qubits_(qubits),
      recover_labels_(std::move(recover_labels)),
      measured_labels_(std::move(measured_labels)) {
  // Structure constants of normalization * i[P, M], expanded over the Pauli
  // basis once; they do not depend on the state.
  const int dim = 1 << qubits;
  const double norm = 1.0 / static_cast<double>(dim);
  const auto all = PauliLabel::all_nontrivial(qubits);
  std::vector<Mat> basis;
  basis.reserve(all.size());
  for (const auto& l : all) basis.push_back(pauli_operator(l));

  terms_.resize(measured_labels_.size());
  for (size_t m = 0; m < measured_labels_.size(); ++m) {
    Mat mm = pauli_operator(measured_labels_[m]);
    terms_[m].resize(recover_labels_.size());
    for (size_t j = 0; j < recover_labels_.size(); ++j) {
      Mat comm = kI * (pauli_operator(recover_labels_[j]) * mm -
                       mm * pauli_operator(recover_labels_[j]));
      for (size_t l = 0; l < basis.size(); ++l) {
        const double coeff =
            norm * (comm * basis[l]).trace().real() / static_cast<double>(dim);
        if (std::abs(coeff) > 1e-14)
          terms_[m][j].push_back({static_cast<int>(l), coeff});
      }
      const double id_coeff = norm * comm.trace().real() / static_cast<double>(dim);
      if (std::abs(id_coeff) > 1e-14) terms_[m][j].push_back({-1, id_coeff});
    }
  }
}

Eigen::MatrixXd DesignMatrixBuilder::build(
    const std::vector<Eigen::VectorXd>& expectations) const {
  const Eigen::Index s_count = static_cast<Eigen::Index>(expectations.size());
  const Eigen::Index m_count = static_cast<Eigen::Index>(measured_labels_.size());
  Eigen::MatrixXd out(s_count * m_count, static_cast<Eigen::Index>(recover_labels_.size()));
  for (Eigen::Index s = 0; s < s_count; ++s) {
    for (Eigen::Index m = 0; m < m_count; ++m) {
      for (size_t j = 0; j < recover_labels_.size(); ++j) {
        double v = 0.0;
        for (const auto& t : terms_[m][j])
          v += t.coeff * (t.label_index < 0 ? 1.0 : expectations[s][t.label_index]);
        out(s * m_count + m, static_cast<Eigen::Index>(j)) = v;
      }
    }
  }
  return out;
}

Eigen::MatrixXd build_design_matrix(const std::vector<Eigen::VectorXd>& expectations,
                                    const std::vector<PauliLabel>& recover_labels,
                                    int qubits) {
  DesignMatrixBuilder b(qubits, recover_labels, z_labels(qubits));
  return b.build(expectations);
}

FirstOrderSolution solve_amplitudes_first_order(
    const Eigen::MatrixXd& z_next, const Eigen::MatrixXd& z_now,
    const std::vector<Eigen::VectorXd>& expectations,
    const std::vector<DissipationRates>& rates, double dt,
    const DesignMatrixBuilder& builder,
    const Eigen::VectorXd& preconditioned_amplitudes, int qubits, int step) {
  const Eigen::Index s_count = static_cast<Eigen::Index>(expectations.size());
  Eigen::MatrixXd m = builder.build(expectations);

  // Known contribution of the preconditioned labels to the increments.
  Eigen::VectorXd pre_rates = Eigen::VectorXd::Zero(s_count * qubits);
  if (preconditioned_amplitudes.size() > 0) {
    DesignMatrixBuilder pre_builder(
        qubits, PauliLabel::all_nontrivial(qubits), z_labels(qubits));
    pre_rates = pre_builder.build(expectations) * preconditioned_amplitudes;
  }

  Eigen::VectorXd rhs(s_count * qubits);
  for (Eigen::Index s = 0; s < s_count; ++s)
    for (int q = 0; q < qubits; ++q)
      rhs[s * qubits + q] =
          (z_next(s, q) - z_now(s, q)) / dt - z_drift(rates[q], z_now(s, q)) -
          pre_rates[s * qubits + q];

  auto svd = solve_least_squares(m, rhs, step);
  FirstOrderSolution out;
  out.amplitudes = svd.solution;
  out.rank = svd.rank;
  out.min_singular = svd.min_singular;
  out.residual = (m * svd.solution - rhs).norm() * dt;
  return out;
}

SecondOrderSolution solve_amplitudes_second_order(
    const Eigen::MatrixXd& z_n1_n2, const std::vector<Eigen::VectorXd>& expectations,
    double omega_x_now, double omega_y_now, double omega_z_prev,
    const DissipationRates& rates, double dt, int step,
    const SecondOrderOptions& opts) {
  const Eigen::Index s_count = static_cast<Eigen::Index>(expectations.size());
  if (s_count < 3)
    throw ConfigError("second-order update requires S >= 3 states");
  const double g2 = rates.gamma2();

  // x, y, z components at t_n per state (single qubit: indices 0, 1, 2).
  Eigen::VectorXd xs(s_count), ys(s_count), zs(s_count);
  for (Eigen::Index s = 0; s < s_count; ++s) {
    xs[s] = expectations[s][0];
    ys[s] = expectations[s][1];
    zs[s] = expectations[s][2];
  }

  // First-order iterate for (Omega_X, Omega_Y) at t_{n+1}: propagate the
  // states one Euler step with the known amplitudes, then invert the linear
  // update over the t_{n+1} -> t_{n+2} increment.
  Eigen::VectorXd xs1 = xs + dt * (omega_y_now * zs - omega_z_prev * ys - g2 * xs);
  Eigen::VectorXd ys1 = ys + dt * (omega_z_prev * xs - omega_x_now * zs - g2 * ys);
  std::vector<Eigen::VectorXd> exp1(s_count);
  for (Eigen::Index s = 0; s < s_count; ++s) {
    Eigen::VectorXd e(3);
    e << xs1[s], ys1[s], z_n1_n2(s, 0);
    exp1[static_cast<size_t>(s)] = e;
  }
  DesignMatrixBuilder builder(1, PauliLabel::recoverable(1), z_labels(1));
  Eigen::MatrixXd z_a(s_count, 1), z_b(s_count, 1);
  z_a.col(0) = z_n1_n2.col(0);
  z_b.col(0) = z_n1_n2.col(1);
  auto fo = solve_amplitudes_first_order(z_b, z_a, exp1, {rates}, dt, builder,
                                         Eigen::VectorXd(), 1, step);

  const double coupling =
      std::abs(omega_x_now) + std::abs(omega_y_now) +
      std::abs(fo.amplitudes[0]) + std::abs(fo.amplitudes[1]);
  if (coupling < opts.coupling_tol)
    throw UnobservableZError(
        "Omega_X and Omega_Y vanish at step " + std::to_string(step) +
        "; z(t) is unaffected by Omega_Z (apply a spectroscopy drive)");

  Eigen::Vector3d u(fo.amplitudes[0], fo.amplitudes[1], omega_z_prev);

  // Residual through the exact one-step propagation (the Euler-composed
  // window equation misattributes half of Omega_Z; see the reconstruction
  // header). Omega_Z is held across the window, matching its ZOH reporting.
  LindbladChannels channels(1, {rates});
  PauliHamiltonian h_template(1, dt, 1);
  std::vector<Mat> rho_n(static_cast<size_t>(s_count));
  for (Eigen::Index s = 0; s < s_count; ++s)
    rho_n[static_cast<size_t>(s)] = density_from_bloch(expectations[s], 1);
  const Mat z_op = pauli_operator(PauliLabel("Z"));

  auto residuals = [&](const Eigen::Vector3d& v) -> Eigen::VectorXd {
    Eigen::VectorXd amps_a(3), amps_b(3);
    amps_a << omega_x_now, omega_y_now, v[2];
    amps_b << v[0], v[1], v[2];
    Eigen::VectorXd r(s_count);
    try {
      Mat ha = h_template.matrix_from_amplitudes(amps_a);
      Mat hb = h_template.matrix_from_amplitudes(amps_b);
      for (Eigen::Index s = 0; s < s_count; ++s) {
        Mat mid = lindblad_step(rho_n[static_cast<size_t>(s)], ha, channels, dt);
        Mat end = lindblad_step(mid, hb, channels, dt);
        r[s] = (end * z_op).trace().real() - z_n1_n2(s, 1);
      }
    } catch (const IntegrationFailureError&) {
      // Step wandered out of the integrable region; report it as a huge
      // residual so the damping rejects it.
      r.setConstant(1e6);
    }
    return r;
  };

  Eigen::VectorXd r = residuals(u);
  const double initial_residual = r.norm();
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (r.norm() < opts.residual_tol) break;
    // Finite-difference Jacobian; parameters are rad/s scale.
    Eigen::MatrixXd jac(s_count, 3);
    const double fd = std::max(50.0, 1e-6 * u.norm());
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d up = u, dn = u;
      up[j] += fd;
      dn[j] -= fd;
      jac.col(j) = (residuals(up) - residuals(dn)) / (2.0 * fd);
    }
    Eigen::Vector3d delta =
        jac.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-r);
    // Damping: halve on residual increase; a step that cannot improve the
    // residual at all means we sit at the least-squares minimum.
    double scale = 1.0;
    Eigen::Vector3d next = u + delta;
    Eigen::VectorXd rn = residuals(next);
    int halvings = 0;
    while (rn.norm() > r.norm() && halvings < 25) {
      scale *= 0.5;
      next = u + scale * delta;
      rn = residuals(next);
      ++halvings;
    }
    if (rn.norm() > r.norm()) break;
    const double step_size = (next - u).norm();
    u = next;
    r = rn;
    if (step_size <= 1e-10 * (1.0 + u.norm())) {
      ++it;
      break;
    }
  }
  // Iteration count is an accepted stop; genuine failure is a residual that
  // blew up or turned non-finite.
  if (!std::isfinite(r.norm()) || r.norm() > initial_residual + opts.residual_tol)
    throw NoConvergenceError("second-order solve did not converge at step " +
                                 std::to_string(step) + "; residual " +
                                 std::to_string(r.norm()),
                             r.norm());

  SecondOrderSolution out;
  out.omega_x_next = u[0];
  out.omega_y_next = u[1];
  out.omega_z_now = u[2];
  out.iterations = it;
  out.residual = r.norm();
  return out;
}

namespace {

// Shared loop state for the alternation.
struct EngineState {
  std::vector<Mat> rho;
  std::vector<Eigen::VectorXd> expectations;
  std::vector<Mat> basis;

  void refresh(int qubits) {
    for (size_t s = 0; s < rho.size(); ++s) {
      Eigen::VectorXd e(static_cast<Eigen::Index>(basis.size()));
      for (size_t i = 0; i < basis.size(); ++i)
        e[static_cast<Eigen::Index>(i)] = (rho[s] * basis[i]).trace().real();
      expectations[s] = e;
    }
    (void)qubits;
  }
};

}  // namespace

ReconstructionResult reconstruct(const ReconstructionInput& input,
                                 ReconstructionMode mode,
                                 const PauliHamiltonian* guess,
                                 const ReconstructionOptions& opts) {
  input.validate(mode);
  const int qubits = input.qubits;
  const int steps = input.steps();
  const int s_count = static_cast<int>(input.states.size());
  const auto all_labels = PauliLabel::all_nontrivial(qubits);

  // Tie-break: a label both recovered and preconditioned is preconditioned.
  std::vector<PauliLabel> recover =
      input.recover_labels.empty() ? PauliLabel::recoverable(qubits)
                                   : input.recover_labels;
  for (const auto& p : input.preconditioned.labels)
    recover.erase(std::remove(recover.begin(), recover.end(), p), recover.end());
  if (recover.empty() && mode != ReconstructionMode::second_order)
    throw ConfigError("no labels left to recover");

  if (mode == ReconstructionMode::fast_slow) {
    if (guess == nullptr)
      throw ConfigError("fast_slow mode requires a guess Hamiltonian");
    if (guess->qubits() != qubits || guess->steps() != steps ||
        std::abs(guess->dt() - input.dt) > 1e-15)
      throw ConfigError("fast_slow guess must live on the input grid");
  }

  // Preconditioned amplitudes as full label-indexed columns.
  Eigen::MatrixXd pre_full =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(all_labels.size()), steps);
  for (size_t i = 0; i < input.preconditioned.labels.size(); ++i)
    pre_full.row(input.preconditioned.labels[i].index()) =
        input.preconditioned.series.row(static_cast<Eigen::Index>(i));
  const bool has_pre = !input.preconditioned.empty();

  ReconstructionResult result{
      PauliHamiltonian(qubits, input.dt, steps), recover, {}, {},
      Eigen::VectorXi::Zero(steps), Eigen::VectorXd::Zero(steps),
      Eigen::VectorXd::Zero(steps)};

  EngineState eng;
  eng.basis.reserve(all_labels.size());
  for (const auto& l : all_labels) eng.basis.push_back(pauli_operator(l));
  for (const auto& st : input.states) eng.rho.push_back(st.rho0);
  eng.expectations.resize(s_count);
  eng.refresh(qubits);

  LindbladChannels channels(qubits, input.rates);
  DesignMatrixBuilder builder(qubits, recover, z_labels(qubits));
  const PauliHamiltonian h_template(qubits, input.dt, 1);

  result.trajectories.assign(
      s_count, BlochTrajectory{qubits, input.dt,
                               Eigen::MatrixXd::Zero(
                                   static_cast<Eigen::Index>(all_labels.size()),
                                   steps + 1)});
  for (int s = 0; s < s_count; ++s)
    result.trajectories[s].values.col(0) = eng.expectations[s];

  auto z_matrix_at = [&](int n) {
    Eigen::MatrixXd z(s_count, qubits);
    for (int s = 0; s < s_count; ++s)
      for (int q = 0; q < qubits; ++q) z(s, q) = input.states[s].z(q, n);
    return z;
  };

  auto integrate_step = [&](int n, const Eigen::VectorXd& amps) {
    Mat h = h_template.matrix_from_amplitudes(amps);
    for (int s = 0; s < s_count; ++s) {
      eng.rho[s] = lindblad_step(eng.rho[s], h, channels, input.dt, opts.substeps);
    }
    eng.refresh(qubits);
    for (int s = 0; s < s_count; ++s)
      result.trajectories[s].values.col(n + 1) = eng.expectations[s];
  };

  if (mode == ReconstructionMode::first_order ||
      mode == ReconstructionMode::fast_slow) {
    // One code path: first_order is the fast/slow update with a zero guess
    // (U_g = I reduces the conjugated baseline to the measured z).
    const auto measured = z_labels(qubits);
    const bool has_guess = (mode == ReconstructionMode::fast_slow);
    const int dim = 1 << qubits;
    DesignMatrixBuilder pre_builder(qubits, all_labels, measured);

    for (int n = 0; n < steps; ++n) {
      const Eigen::MatrixXd z_now = z_matrix_at(n);
      const Eigen::MatrixXd z_next = z_matrix_at(n + 1);
      const Eigen::VectorXd pre_col =
          has_pre ? Eigen::VectorXd(pre_full.col(n)) : Eigen::VectorXd();

      // Baseline: the z component one dt ahead under the guess alone, with
      // exact one-step conjugation. The measured single-Z components enter
      // through their own expansion coefficients; partners come from the
      // integrated state.
      Eigen::MatrixXd base(s_count, qubits);
      if (has_guess) {
        Mat ug = matrix_exp(-kI * input.dt * guess->matrix_at(n));
        for (int q = 0; q < qubits; ++q) {
          Mat conj = ug.adjoint() * eng.basis[measured[q].index()] * ug;
          Eigen::VectorXd coeff(static_cast<Eigen::Index>(all_labels.size()));
          for (size_t l = 0; l < all_labels.size(); ++l)
            coeff[static_cast<Eigen::Index>(l)] =
                (conj * eng.basis[l]).trace().real() / dim;
          for (int s = 0; s < s_count; ++s) {
            double acc = 0.0;
            for (size_t l = 0; l < all_labels.size(); ++l) {
              double component = eng.expectations[s][static_cast<Eigen::Index>(l)];
              for (int qq = 0; qq < qubits; ++qq)
                if (static_cast<int>(l) == measured[qq].index())
                  component = z_now(s, qq);
              acc += coeff[static_cast<Eigen::Index>(l)] * component;
            }
            base(s, q) = acc;
          }
        }
      } else {
        base = z_now;
      }

      // The perturbation solve, optionally refined once at the midpoint
      // state: evaluating the linear response half a step in kills the
      // O(dt^2) cross-term alias that otherwise accumulates into the
      // unmeasured coordinates.
      auto solve_at = [&](const std::vector<Eigen::VectorXd>& exps,
                          const Eigen::MatrixXd& z_drift_point) {
        Eigen::MatrixXd m = builder.build(exps);
        Eigen::VectorXd pre_rates =
            Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s_count) * qubits);
        if (has_pre) pre_rates = pre_builder.build(exps) * pre_col;
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(s_count) * qubits);
        for (int s = 0; s < s_count; ++s)
          for (int q = 0; q < qubits; ++q)
            rhs[s * qubits + q] = (z_next(s, q) - base(s, q)) / input.dt -
                                  z_drift(input.rates[q], z_drift_point(s, q)) -
                                  pre_rates[s * qubits + q];
        auto svd = solve_least_squares(m, rhs, n);
        result.rank[n] = svd.rank;
        result.min_singular[n] = svd.min_singular;
        result.residual[n] = (m * svd.solution - rhs).norm() * input.dt;
        return svd.solution;
      };

      auto compose_column = [&](const Eigen::VectorXd& solved) {
        Eigen::VectorXd column = pre_full.col(n);
        if (has_guess)
          for (Eigen::Index l = 0; l < column.size(); ++l)
            column[l] += guess->amplitudes()(l, n);
        for (size_t j = 0; j < recover.size(); ++j)
          column[recover[j].index()] += solved[static_cast<Eigen::Index>(j)];
        return column;
      };

      Eigen::VectorXd solved = solve_at(eng.expectations, z_now);
      if (opts.midpoint_correction) {
        // Predictor-corrector: advance half a step with the predicted
        // amplitudes, rebuild the design matrix there, re-solve.
        Mat h_half = h_template.matrix_from_amplitudes(compose_column(solved));
        std::vector<Eigen::VectorXd> mid(static_cast<size_t>(s_count));
        for (int s = 0; s < s_count; ++s) {
          Mat rho_mid = lindblad_step(eng.rho[s], h_half, channels,
                                      0.5 * input.dt, 2);
          Eigen::VectorXd e(static_cast<Eigen::Index>(eng.basis.size()));
          for (size_t i = 0; i < eng.basis.size(); ++i)
            e[static_cast<Eigen::Index>(i)] =
                (rho_mid * eng.basis[i]).trace().real();
          mid[static_cast<size_t>(s)] = e;
        }
        solved = solve_at(mid, 0.5 * (z_now + z_next));
      }

      Eigen::VectorXd column = compose_column(solved);
      result.amplitudes.amplitudes().col(n) = column;
      integrate_step(n, column);
    }
  } else {
    // Second order, single qubit. One window of z data cannot separate
    // Omega_Z from a compensating rotation of the transverse amplitudes
    // (the bilinear system is gauge-degenerate to the integrator floor),
    // but the rotation itself is the signal: reconstructing with an assumed
    // Omega_Z leaves the recovered (Omega_X + i Omega_Y)(t) precessing at
    // -(Omega_Z_true - Omega_Z_assumed). Iterate first-order passes and
    // absorb the measured phase drift into the Omega_Z series.
    const int x_idx = PauliLabel("X").index();
    const int y_idx = PauliLabel("Y").index();
    const int z_idx = PauliLabel("Z").index();
    const double tol = opts.second_order.coupling_tol;

    Eigen::VectorXd omega_z_series = Eigen::VectorXd::Zero(steps);
    if (has_pre) omega_z_series += pre_full.row(z_idx).transpose();

    ReconstructionResult pass_result = result;
    const int max_passes = 6;
    for (int pass = 0; pass < max_passes; ++pass) {
      ReconstructionInput trial = input;
      trial.recover_labels = PauliLabel::recoverable(1);
      Eigen::MatrixXd pre_series(1, steps);
      pre_series.row(0) = omega_z_series.transpose();
      trial.preconditioned.labels = {PauliLabel("Z")};
      trial.preconditioned.series = pre_series;
      pass_result = reconstruct(trial, ReconstructionMode::first_order, nullptr,
                                ReconstructionOptions{
                                    std::nullopt, opts.second_order,
                                    opts.substeps, opts.midpoint_correction});

      // Unwrapped phase of the transverse estimate.
      Eigen::VectorXd ox = pass_result.amplitudes.amplitudes().row(x_idx);
      Eigen::VectorXd oy = pass_result.amplitudes.amplitudes().row(y_idx);
      double mag_max = 0.0;
      for (int n = 0; n < steps; ++n)
        mag_max = std::max(mag_max, std::hypot(ox[n], oy[n]));
      if (mag_max < tol)
        throw UnobservableZError(
            "transverse drive vanishes; z(t) is unaffected by Omega_Z "
            "(apply a spectroscopy drive)");

      Eigen::VectorXd theta(steps);
      theta[0] = std::atan2(oy[0], ox[0]);
      for (int n = 1; n < steps; ++n) {
        double d = std::atan2(oy[n], ox[n]) - theta[n - 1];
        while (d > M_PI) d -= 2.0 * M_PI;
        while (d < -M_PI) d += 2.0 * M_PI;
        theta[n] = theta[n - 1] + d;
      }
      // The phase is meaningful only where the transverse estimate has
      // appreciable magnitude; estimate its slope by a local least-squares
      // fit there and hold the nearest valid value across the gaps.
      std::vector<bool> valid(steps);
      for (int n = 0; n < steps; ++n)
        valid[n] = std::hypot(ox[n], oy[n]) > std::max(tol, 0.25 * mag_max);
      const int half = 4;
      Eigen::VectorXd drift = Eigen::VectorXd::Constant(steps, NAN);
      for (int n = 0; n < steps; ++n) {
        if (!valid[n]) continue;
        const int lo = std::max(0, n - half);
        const int hi = std::min(steps - 1, n + half);
        double sw = 0, st = 0, sth = 0, stt = 0, stth = 0;
        for (int k = lo; k <= hi; ++k) {
          if (!valid[k]) continue;
          const double t = (k - n) * input.dt;
          sw += 1.0;
          st += t;
          sth += theta[k];
          stt += t * t;
          stth += t * theta[k];
        }
        const double det = sw * stt - st * st;
        if (sw >= 3.0 && det > 0.0) drift[n] = -(sw * stth - st * sth) / det;
      }
      int first_valid = -1, last_valid = -1;
      for (int n = 0; n < steps; ++n)
        if (std::isfinite(drift[n])) {
          if (first_valid < 0) first_valid = n;
          last_valid = n;
        }
      if (first_valid < 0)
        throw UnobservableZError(
            "transverse drive vanishes; z(t) is unaffected by Omega_Z "
            "(apply a spectroscopy drive)");
      for (int n = 0; n < first_valid; ++n) drift[n] = drift[first_valid];
      for (int n = last_valid + 1; n < steps; ++n) drift[n] = drift[last_valid];
      for (int n = first_valid; n <= last_valid; ++n) {
        if (!std::isfinite(drift[n])) {
          int back = n - 1;
          while (!std::isfinite(drift[back])) --back;
          drift[n] = drift[back];
        }
      }

      omega_z_series += drift;
      const double max_update = drift.cwiseAbs().maxCoeff();
      if (max_update < std::max(tol, 1e-3 * omega_z_series.cwiseAbs().maxCoeff()))
        break;
    }

    result = std::move(pass_result);
    result.amplitudes.amplitudes().row(z_idx) = omega_z_series.transpose();
    result.solved_labels = PauliLabel::all_nontrivial(1);
  }

  if (mode != ReconstructionMode::second_order) {
    result.solved_labels = recover;
    // Merge the preconditioned series into the reported amplitudes.
    for (size_t i = 0; i < input.preconditioned.labels.size(); ++i)
      result.amplitudes.amplitudes().row(input.preconditioned.labels[i].index()) =
          input.preconditioned.series.row(static_cast<Eigen::Index>(i));
  }

  if (opts.output_filter.has_value()) {
    const FilterCoefficients c =
        butterworth_coefficients(*opts.output_filter, 1.0 / input.dt);
    for (const auto& lab : result.solved_labels) {
      Eigen::VectorXd row = result.amplitudes.amplitudes().row(lab.index());
      result.amplitudes.amplitudes().row(lab.index()) =
          filter_apply(row, c, opts.output_filter->phase_mode);
    }
  }

  result.final_states = eng.rho;
  return result;
}

PreconditioningSearchResult optimize_preconditioning(
    const ReconstructionInput& input, const std::vector<PauliLabel>& candidate_labels,
    const std::vector<Mat>& tomography_final, double search_scale,
    const ReconstructionOptions& opts) {
  if (tomography_final.size() != input.states.size())
    throw ContractViolationError(
        "optimize_preconditioning: tomography count must match state count");
  for (const auto& l : candidate_labels) {
    const auto& s = l.str();
    if (s.find('X') != std::string::npos || s.find('Y') != std::string::npos)
      throw ContractViolationError(
          "optimize_preconditioning: candidate " + s + " is first-order observable");
  }
  const int k = static_cast<int>(candidate_labels.size());
  const int steps = input.steps();

  auto objective = [&](const Eigen::VectorXd& c) {
    ReconstructionInput trial = input;
    trial.preconditioned =
        Preconditioning::constants(candidate_labels, c, steps);
    auto result = reconstruct(trial, ReconstructionMode::first_order, nullptr, opts);
    double mean = 0.0;
    for (size_t s = 0; s < tomography_final.size(); ++s)
      mean += state_fidelity(result.final_states[s], tomography_final[s]);
    return mean / static_cast<double>(tomography_final.size());
  };

  const double f_zero = objective(Eigen::VectorXd::Zero(k));

  // Coarse grid seed, then Nelder-Mead refinement.
  Eigen::VectorXd best = Eigen::VectorXd::Zero(k);
  double f_best = f_zero;
  const int grid_n = 5;
  std::vector<Eigen::VectorXd> grid_points;
  std::function<void(Eigen::VectorXd&, int)> enumerate = [&](Eigen::VectorXd& point,
                                                             int dim) {
    if (dim == k) {
      grid_points.push_back(point);
      return;
    }
    for (int g = 0; g < grid_n; ++g) {
      point[dim] = search_scale * (-1.0 + 2.0 * g / (grid_n - 1.0));
      enumerate(point, dim + 1);
    }
  };
  Eigen::VectorXd tmp(k);
  enumerate(tmp, 0);
  for (const auto& p : grid_points) {
    const double f = objective(p);
    if (f > f_best) {
      f_best = f;
      best = p;
    }
  }

  // Nelder-Mead (maximization via negated objective).
  std::vector<Eigen::VectorXd> simplex;
  std::vector<double> value;
  simplex.push_back(best);
  value.push_back(-f_best);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd v = best;
    v[i] += 0.25 * search_scale;
    simplex.push_back(v);
    value.push_back(-objective(v));
  }
  const int max_iter = 120;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<size_t> order(simplex.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return value[a] < value[b]; });
    std::vector<Eigen::VectorXd> sx;
    std::vector<double> sv;
    for (size_t i : order) {
      sx.push_back(simplex[i]);
      sv.push_back(value[i]);
    }
    simplex = sx;
    value = sv;

    double size = 0.0;
    for (size_t i = 1; i < simplex.size(); ++i)
      size = std::max(size, (simplex[i] - simplex[0]).norm());
    if (size < 2.0 * M_PI * 1e3) break;  // 1 kHz resolution

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(k);
    for (size_t i = 0; i + 1 < simplex.size(); ++i) centroid += simplex[i];
    centroid /= static_cast<double>(k);

    const Eigen::VectorXd& worst = simplex.back();
    Eigen::VectorXd refl = centroid + (centroid - worst);
    double f_refl = -objective(refl);
    if (f_refl < value[0]) {
      Eigen::VectorXd expan = centroid + 2.0 * (centroid - worst);
      double f_expan = -objective(expan);
      if (f_expan < f_refl) {
        simplex.back() = expan;
        value.back() = f_expan;
      } else {
        simplex.back() = refl;
        value.back() = f_refl;
      }
    } else if (f_refl < value[value.size() - 2]) {
      simplex.back() = refl;
      value.back() = f_refl;
    } else {
      Eigen::VectorXd contr = centroid + 0.5 * (worst - centroid);
      double f_contr = -objective(contr);
      if (f_contr < value.back()) {
        simplex.back() = contr;
        value.back() = f_contr;
      } else {
        for (size_t i = 1; i < simplex.size(); ++i) {
          simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
          value[i] = -objective(simplex[i]);
        }
      }
    }
  }
  for (size_t i = 0; i < simplex.size(); ++i) {
    if (-value[i] > f_best) {
      f_best = -value[i];
      best = simplex[i];
    }
  }

  PreconditioningSearchResult out;
  out.labels = candidate_labels;
  out.optimal = best;
  out.fidelity_at_optimum = f_best;
  out.fidelity_at_zero = f_zero;
  return out;
}

MeanFidelity mean_reconstruction_fidelity(const ReconstructionResult& result,
                                          const std::vector<Mat>& tomography) {
  return mean_state_fidelity(result.final_states, tomography);
}

Eigen::VectorXd noise_band(const ReconstructionResult& result) {
  Eigen::VectorXd band =
      Eigen::VectorXd::Zero(result.amplitudes.amplitudes().rows());
  const double n = static_cast<double>(result.amplitudes.steps());
  for (const auto& lab : result.solved_labels)
    band[lab.index()] = result.amplitudes.amplitudes().row(lab.index()).norm() /
                        std::sqrt(n);
  return band;
}

}  // namespace hamrec
