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

#include "hamrec/csv.hpp"

#include <cstdio>
#include <fstream>

#include "hamrec/errors.hpp"

namespace hamrec {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

void CsvWriter::add_column(const std::string& name, const Eigen::VectorXd& values) {
  names_.push_back(name);
  columns_.emplace_back(values.data(), values.data() + values.size());
}

void CsvWriter::add_column(const std::string& name, const std::vector<double>& values) {
  names_.push_back(name);
  columns_.push_back(values);
}

void CsvWriter::write(const std::string& path) const {
  if (columns_.empty()) throw Error("CsvWriter: no columns");
  const size_t rows = columns_.front().size();
  for (const auto& c : columns_)
    if (c.size() != rows) throw Error("CsvWriter: column length mismatch");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("CsvWriter: cannot open " + path);
  for (size_t j = 0; j < names_.size(); ++j) {
    if (j) out << ',';
    out << names_[j];
  }
  out << '\n';
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < columns_.size(); ++j) {
      if (j) out << ',';
      out << format_number(columns_[j][i]);
    }
    out << '\n';
  }
  if (!out) throw Error("CsvWriter: write failed for " + path);
}

Eigen::VectorXd time_axis(double dt, int points) {
  Eigen::VectorXd t(points);
  for (int n = 0; n < points; ++n) t[n] = n * dt;
  return t;
}

}  // namespace hamrec
