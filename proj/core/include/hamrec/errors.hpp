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

#include <stdexcept>
#include <string>
#include <vector>

namespace hamrec {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller violated a documented precondition (dimension mismatch,
/// non-density input, non-unit trace, ...).
class ContractViolationError : public Error {
 public:
  using Error::Error;
};

/// Master-equation integration lost the trace beyond tolerance; the
/// timestep is too coarse for the given amplitudes.
class IntegrationFailureError : public Error {
 public:
  using Error::Error;
};

/// Filter specification is unrealizable (e.g. critical frequency at or
/// above Nyquist).
class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

/// A record was conditioned without calibration voltages.
class UnscaledOutputError : public Error {
 public:
  using Error::Error;
};

/// The stacked design matrix is rank deficient at some step. Carries the
/// step index and the singular spectrum so callers can diagnose
/// insufficient initial-state diversity or Bloch-vector collapse.
class SingularSystemError : public Error {
 public:
  SingularSystemError(const std::string& what, int step,
                      std::vector<double> singular_values)
      : Error(what), step_(step), singular_values_(std::move(singular_values)) {}
  int step() const { return step_; }
  const std::vector<double>& singular_values() const { return singular_values_; }

 private:
  int step_;
  std::vector<double> singular_values_;
};

/// The z coordinate carries no information about a Z-axis drive because
/// the transverse couplings vanish.
class UnobservableZError : public Error {
 public:
  using Error::Error;
};

/// The nonlinear solver did not converge; carries the final residual norm.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Coupler parameters left the dispersive validity domain.
class OutOfRegimeError : public Error {
 public:
  using Error::Error;
};

/// Scenario configuration failed validation; the message names the field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Requested scenario name is not in the bundled registry.
class UnknownScenarioError : public Error {
 public:
  using Error::Error;
};

}  // namespace hamrec
