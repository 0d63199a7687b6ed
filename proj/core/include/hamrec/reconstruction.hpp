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

#include <optional>
#include <vector>

#include "hamrec/fidelity.hpp"
#include "hamrec/lindblad.hpp"
#include "hamrec/signal.hpp"

namespace hamrec {

enum class ReconstructionMode {
  first_order,   // pseudoinverse update, X/Y-type labels only
  second_order,  // nonlinear update, adds Z (single qubit)
  fast_slow,     // exact propagator for a guess + linear perturbation
};

/// Measured data for one initial state: full tomography at t=0 and the
/// conditioned z series per qubit (steps + 1 points each).
struct StateRecord {
  Mat rho0;
  Eigen::MatrixXd z;  // qubits rows x (steps + 1) columns
};

/// Amplitudes supplied as known rather than solved for (Z-type labels the
/// first-order update cannot observe). They are subtracted from the measured
/// increments during the solve and added to H during the integrate step.
struct Preconditioning {
  std::vector<PauliLabel> labels;
  Eigen::MatrixXd series;  // labels.size() rows x steps columns

  static Preconditioning constants(const std::vector<PauliLabel>& labels,
                                   const Eigen::VectorXd& values, int steps);
  bool empty() const { return labels.empty(); }
};

struct ReconstructionInput {
  int qubits = 1;
  double dt = 2e-9;
  std::vector<StateRecord> states;
  std::vector<DissipationRates> rates;  // per qubit
  std::vector<PauliLabel> recover_labels;  // default: PauliLabel::recoverable(Q)
  Preconditioning preconditioned;

  int steps() const;
  /// Checks the state-count requirement S >= d(d-1)/Q, series lengths and
  /// dimensions, and that recover_labels are first-order observable.
  void validate(ReconstructionMode mode) const;
};

/// Solver output: the recovered amplitude series (solved labels filled,
/// preconditioned labels copied through, the rest zero), the trajectories
/// the engine integrated for every initial state, and per-step diagnostics
/// of the stacked design matrix.
struct ReconstructionResult {
  PauliHamiltonian amplitudes;
  std::vector<PauliLabel> solved_labels;
  std::vector<BlochTrajectory> trajectories;
  std::vector<Mat> final_states;
  Eigen::VectorXi rank;           // per step
  Eigen::VectorXd min_singular;   // smallest retained singular value
  Eigen::VectorXd residual;       // least-squares residual, z-increment units
};

/// Builds the stacked coefficient matrix relating drive amplitudes to the
/// first-order increments of the measured coordinates. Rows are
/// (state-major, measured-coordinate-minor); the entry for label P is
/// normalization * <i[P, M]> evaluated on the state's current expectations.
class DesignMatrixBuilder {
 public:
  DesignMatrixBuilder(int qubits, std::vector<PauliLabel> recover_labels,
                      std::vector<PauliLabel> measured_labels);

  Eigen::MatrixXd build(const std::vector<Eigen::VectorXd>& expectations) const;

  const std::vector<PauliLabel>& recover_labels() const { return recover_labels_; }
  const std::vector<PauliLabel>& measured_labels() const { return measured_labels_; }

 private:
  struct Term {
    int label_index;  // -1 for the identity component
    double coeff;
  };
  int qubits_;
  std::vector<PauliLabel> recover_labels_;
  std::vector<PauliLabel> measured_labels_;
  std::vector<std::vector<std::vector<Term>>> terms_;  // [measured][column]
};

/// Convenience wrapper: measured coordinates are z of every qubit.
Eigen::MatrixXd build_design_matrix(const std::vector<Eigen::VectorXd>& expectations,
                                    const std::vector<PauliLabel>& recover_labels,
                                    int qubits);

struct FirstOrderSolution {
  Eigen::VectorXd amplitudes;  // recover_labels order
  int rank = 0;
  double min_singular = 0.0;
  double residual = 0.0;
};

/// One step of the pseudoinverse update. The dissipative drift
/// dt*(Gamma_Delta - Gamma_1 z) and the preconditioned contribution are
/// subtracted from the measured increment before the SVD solve. Throws
/// SingularSystemError when the design matrix drops rank (relative cutoff
/// 1e-6 of the largest singular value).
FirstOrderSolution solve_amplitudes_first_order(
    const Eigen::MatrixXd& z_next, const Eigen::MatrixXd& z_now,
    const std::vector<Eigen::VectorXd>& expectations,
    const std::vector<DissipationRates>& rates, double dt,
    const DesignMatrixBuilder& builder,
    const Eigen::VectorXd& preconditioned_amplitudes, int qubits, int step);

struct SecondOrderOptions {
  double residual_tol = 1e-10;
  int max_iterations = 50;
  /// |Omega_X| + |Omega_Y| below this (rad/s) means z carries no
  /// information about Omega_Z.
  double coupling_tol = 1e3;
};

struct SecondOrderSolution {
  double omega_x_next = 0.0;
  double omega_y_next = 0.0;
  double omega_z_now = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

/// Damped Gauss-Newton solve of the second-order update (single qubit):
/// given z at t_n..t_{n+2}, the integrated Bloch vectors at t_n and the
/// amplitudes already solved at t_n, returns Omega_X/Y at t_{n+1} and
/// Omega_Z at t_n. Throws UnobservableZError when the transverse couplings
/// vanish and NoConvergenceError when the iteration stalls.
SecondOrderSolution solve_amplitudes_second_order(
    const Eigen::MatrixXd& z_n1_n2,  // S x 2: measured z at t_{n+1}, t_{n+2}
    const std::vector<Eigen::VectorXd>& expectations,  // at t_n, per state
    double omega_x_now, double omega_y_now, double omega_z_prev,
    const DissipationRates& rates, double dt, int step,
    const SecondOrderOptions& opts = {});

struct ReconstructionOptions {
  /// Applied to the solved amplitude series after the loop (the update
  /// equations amplify high-frequency noise). Disabled when unset.
  std::optional<FilterSpec> output_filter;
  SecondOrderOptions second_order;
  int substeps = 4;  // RK4 substeps per dt in the integrate stage
  /// Re-solve each step once with the design matrix evaluated on the
  /// half-step-advanced states (predictor-corrector). Removes the O(dt^2)
  /// expansion-point bias of the bare update without touching the solver
  /// itself; disable to run the literal textbook alternation.
  bool midpoint_correction = true;
};

/// The solve -> integrate alternation. At each step the amplitudes are
/// solved from the measured increments, then every state is advanced one dt
/// through the master equation with the recovered (plus preconditioned)
/// amplitudes. In fast_slow mode `guess` supplies H_g of the split update;
/// its one-step propagator is exact and only the perturbation is solved
/// linearly. Second-order mode reports Omega_X/Y at their solved timestamps
/// t_{n+1} and Omega_Z at t_n (one-step lag; the final Omega_Z is held).
ReconstructionResult reconstruct(const ReconstructionInput& input,
                                 ReconstructionMode mode,
                                 const PauliHamiltonian* guess = nullptr,
                                 const ReconstructionOptions& opts = {});

struct PreconditioningSearchResult {
  std::vector<PauliLabel> labels;
  Eigen::VectorXd optimal;  // constant amplitude per label, rad/s
  double fidelity_at_optimum = 0.0;
  double fidelity_at_zero = 0.0;
  double gain() const { return fidelity_at_optimum - fidelity_at_zero; }
};

/// Grid-seeded Nelder-Mead search over constant preconditioned amplitudes
/// maximizing the mean reconstruction fidelity against supplied final-state
/// tomography. Returns a zero-gain result when the optimum is at zero.
PreconditioningSearchResult optimize_preconditioning(
    const ReconstructionInput& input, const std::vector<PauliLabel>& candidate_labels,
    const std::vector<Mat>& tomography_final,
    double search_scale = 2.0 * M_PI * 1.0e6,
    const ReconstructionOptions& opts = {});

/// state_fidelity between each engine-integrated final state and its
/// independent tomography, plus the arithmetic mean.
MeanFidelity mean_reconstruction_fidelity(const ReconstructionResult& result,
                                          const std::vector<Mat>& tomography);

/// Per-label RMS of the solved amplitude series; on a no-pulse dataset this
/// is the uncertainty band quoted for nontrivial reconstructions. Entries
/// for unsolved labels are zero.
Eigen::VectorXd noise_band(const ReconstructionResult& result);

}  // namespace hamrec
