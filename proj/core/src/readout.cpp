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

#include "hamrec/readout.hpp"

#include <fstream>

#include "hamrec/csv.hpp"
#include "hamrec/rng.hpp"

namespace hamrec {

namespace {
const std::complex<double> kI(0.0, 1.0);
}

void ReadoutParams::validate() const {
  if (!(kappa > 0.0))
    throw ContractViolationError("ReadoutParams: kappa must be positive");
  if (!(std::abs(chi / kappa) < 0.2))
    throw ContractViolationError(
        "ReadoutParams: |chi/kappa| must stay below 0.2 (dispersive domain)");
  if (!(eta > 0.0 && eta <= 1.0))
    throw ContractViolationError("ReadoutParams: eta must lie in (0, 1]");
  if (!(sample_rate > 0.0))
    throw ContractViolationError("ReadoutParams: sample_rate must be positive");
  if (noise_sigma < 0.0 || nbar < 0.0 || gamma_d < 0.0 || dephasing_per_photon < 0.0)
    throw ContractViolationError("ReadoutParams: negative rate or noise");
}

double measurement_dephasing(const ReadoutParams& p) {
  if (p.gamma_d > 0.0) return p.gamma_d;
  return p.dephasing_per_photon * p.nbar;
}

Eigen::VectorXcd resonator_response_adiabatic(const Eigen::VectorXd& z,
                                              const ReadoutParams& p) {
  p.validate();
  const double scale = -(2.0 * p.omega_wm / p.kappa) * (p.chi / p.kappa);
  const double im = -2.0 * p.omega_wm / p.kappa;
  const double delay = p.tau() * p.sample_rate;  // in samples, fractional
  const int d0 = static_cast<int>(std::floor(delay));
  const double frac = delay - d0;

  Eigen::VectorXcd a(z.size());
  auto z_at = [&](Eigen::Index k) { return z[std::max<Eigen::Index>(k, 0)]; };
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    const double zd = (1.0 - frac) * z_at(k - d0) + frac * z_at(k - d0 - 1);
    a[k] = std::complex<double>(scale * zd, im);
  }
  return a;
}

Eigen::VectorXcd resonator_response_ode(const Eigen::VectorXd& z,
                                        const ReadoutParams& p) {
  p.validate();
  if (p.sample_rate < 10.0 * p.kappa / (2.0 * M_PI))
    throw ContractViolationError(
        "resonator_response_ode: sample rate must exceed 10x kappa/2pi");
  const double h = 1.0 / p.sample_rate;
  auto deriv = [&](std::complex<double> a, double zt) {
    return -(p.kappa / 2.0) * (kI * (p.chi / p.kappa) * zt + 1.0) * a -
           kI * p.omega_wm;
  };
  Eigen::VectorXcd out(z.size());
  std::complex<double> a = steady_field(z[0], p);
  out[0] = a;
  for (Eigen::Index k = 0; k + 1 < z.size(); ++k) {
    const double z0 = z[k];
    const double z1 = z[k + 1];
    const double zm = 0.5 * (z0 + z1);
    auto k1 = deriv(a, z0);
    auto k2 = deriv(a + 0.5 * h * k1, zm);
    auto k3 = deriv(a + 0.5 * h * k2, zm);
    auto k4 = deriv(a + h * k3, z1);
    a += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out[k + 1] = a;
  }
  return out;
}

MeasurementRecord synthesize_shots(const Eigen::VectorXcd& a, const ReadoutParams& p,
                                   long n_shots, uint64_t seed,
                                   bool retain_shots) {
  if (n_shots < 1)
    throw ContractViolationError("synthesize_shots: n_shots must be >= 1");
  MeasurementRecord rec;
  rec.sample_rate = p.sample_rate;
  rec.n_shots_averaged = n_shots;
  rec.delay_applied = p.tau();
  rec.samples = a.real();
  if (p.noise_sigma > 0.0) {
    // The average of n independent Gaussian shots is itself Gaussian with
    // std sigma/sqrt(n); sample the reduction directly.
    const double sigma = p.noise_sigma / std::sqrt(static_cast<double>(n_shots));
    GaussianStream g(seed);
    for (Eigen::Index k = 0; k < rec.samples.size(); ++k)
      rec.samples[k] += sigma * g.next();
  }
  if (retain_shots) {
    const long keep = std::min<long>(n_shots, 1000);
    rec.retained_shots.reserve(static_cast<size_t>(keep));
    for (long shot = 0; shot < keep; ++shot) {
      GaussianStream gs(derive_stream_seed(seed, "shot/" + std::to_string(shot)));
      Eigen::VectorXd one = a.real();
      for (Eigen::Index k = 0; k < one.size(); ++k)
        one[k] += p.noise_sigma * gs.next();
      rec.retained_shots.push_back(std::move(one));
    }
  }
  return rec;
}

std::pair<MeasurementRecord, MeasurementRecord> calibration_traces(
    const ReadoutParams& p, double duration, long n_shots, uint64_t seed) {
  const int n = std::max(1, static_cast<int>(std::llround(duration * p.sample_rate)));
  Eigen::VectorXd z_plus = Eigen::VectorXd::Constant(n, 1.0);
  Eigen::VectorXd z_minus = Eigen::VectorXd::Constant(n, -1.0);
  auto rec_plus = synthesize_shots(resonator_response_adiabatic(z_plus, p), p, n_shots,
                                   derive_stream_seed(seed, "calibration/z+1"));
  auto rec_minus = synthesize_shots(resonator_response_adiabatic(z_minus, p), p, n_shots,
                                    derive_stream_seed(seed, "calibration/z-1"));
  return {std::move(rec_plus), std::move(rec_minus)};
}

double record_mean(const MeasurementRecord& r) {
  // Kahan summation so the reduction is order-independent to 1e-12.
  double sum = 0.0, c = 0.0;
  for (Eigen::Index k = 0; k < r.samples.size(); ++k) {
    const double y = r.samples[k] - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(r.samples.size());
}

void write_record_csv(const MeasurementRecord& r, const ReadoutParams& p,
                      uint64_t seed, const std::string& path) {
  CsvWriter csv;
  csv.add_column("time_s", time_axis(1.0 / r.sample_rate, static_cast<int>(r.samples.size())));
  csv.add_column("voltage", r.samples);
  csv.write(path);

  std::ofstream meta(path + ".json", std::ios::binary);
  if (!meta) throw Error("write_record_csv: cannot open sidecar for " + path);
  meta << "{\n"
       << "  \"sample_rate\": " << format_number(r.sample_rate) << ",\n"
       << "  \"n_shots_averaged\": " << r.n_shots_averaged << ",\n"
       << "  \"delay_applied_s\": " << format_number(r.delay_applied) << ",\n"
       << "  \"seed\": " << seed << ",\n"
       << "  \"params\": {\n"
       << "    \"kappa\": " << format_number(p.kappa) << ",\n"
       << "    \"chi\": " << format_number(p.chi) << ",\n"
       << "    \"omega_wm\": " << format_number(p.omega_wm) << ",\n"
       << "    \"nbar\": " << format_number(p.nbar) << ",\n"
       << "    \"eta\": " << format_number(p.eta) << ",\n"
       << "    \"sample_rate\": " << format_number(p.sample_rate) << ",\n"
       << "    \"noise_sigma\": " << format_number(p.noise_sigma) << ",\n"
       << "    \"gamma_d\": " << format_number(p.gamma_d) << "\n"
       << "  }\n"
       << "}\n";
}

}  // namespace hamrec
