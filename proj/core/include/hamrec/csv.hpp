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

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hamrec {

/// Formats a double with 15 significant digits, '.' separator, no locale.
/// Output is byte-deterministic for a given value.
std::string format_number(double v);

/// Column-oriented CSV writer. All columns must have equal length.
class CsvWriter {
 public:
  void add_column(const std::string& name, const Eigen::VectorXd& values);
  void add_column(const std::string& name, const std::vector<double>& values);

  /// Writes header + rows to `path`. Throws hamrec::Error on IO failure.
  void write(const std::string& path) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

/// Evenly spaced time column t_n = n * dt, n = 0..points-1.
Eigen::VectorXd time_axis(double dt, int points);

}  // namespace hamrec
