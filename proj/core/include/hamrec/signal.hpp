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

#include <Eigen/Dense>

#include "hamrec/readout.hpp"

namespace hamrec {

enum class PhaseMode {
  zero_phase,  // forward-backward, squared magnitude, zero group delay
  causal,      // single forward pass, zero initial state
};

/// Low-pass Butterworth filter specification.
struct FilterSpec {
  int order = 3;
  double critical_freq = 50e6;  // Hz
  PhaseMode phase_mode = PhaseMode::zero_phase;
};

/// Digital transfer function coefficients, a[0] normalized to 1.
struct FilterCoefficients {
  Eigen::VectorXd b;  // numerator, length order + 1
  Eigen::VectorXd a;  // denominator, length order + 1
};

/// Bilinear-transform Butterworth design with frequency prewarping at the
/// critical frequency; DC gain exactly 1, |H| = 1/sqrt(2) at critical_freq.
/// Throws InvalidSpecError when critical_freq >= Nyquist.
FilterCoefficients butterworth_coefficients(const FilterSpec& spec,
                                            double sample_rate);

/// |H(f)| of a digital filter at frequency f (Hz) for the given sample rate.
double magnitude_response(const FilterCoefficients& c, double f, double sample_rate);

/// Direct-form IIR application. Zero-phase mode odd-reflect pads 3 x order
/// samples on each side and runs forward then backward with steady-state
/// initial conditions; causal mode runs forward once from rest.
Eigen::VectorXd filter_apply(const Eigen::VectorXd& x, const FilterCoefficients& c,
                             PhaseMode mode);

/// Block mean over consecutive windows of `factor` samples; length must be
/// divisible. Preserves the overall mean exactly.
Eigen::VectorXd decimate_mean(const Eigen::VectorXd& x, int factor);

/// Full conditioning chain, in order: (1) low-pass filter, (2) decimation by
/// averaging within target_dt bins centered on the output grid points,
/// (3) advance by round(tau/target_dt) bins undoing the resonator delay,
/// (4) affine rescale mapping the calibration voltages to +/-1, (5) clip to
/// [-1, 1]. Throws UnscaledOutputError without a valid calibration.
Eigen::VectorXd condition_record(const MeasurementRecord& record,
                                 const FilterSpec& spec, double target_dt,
                                 double tau, const Calibration& calibration);

}  // namespace hamrec
