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

#include "hamrec/signal.hpp"

#include <cmath>
#include <vector>

namespace hamrec {

namespace {

using Cplx = std::complex<double>;

// Expands prod_k (x - r_k) into monomial coefficients, highest power first.
Eigen::VectorXcd poly_from_roots(const std::vector<Cplx>& roots) {
  Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(roots.size() + 1);
  coeffs[0] = 1.0;
  for (size_t k = 0; k < roots.size(); ++k) {
    for (size_t j = k + 1; j >= 1; --j) coeffs[j] -= roots[k] * coeffs[j - 1];
  }
  return coeffs;
}

// Direct-form II transposed pass with explicit initial state.
Eigen::VectorXd lfilter(const Eigen::VectorXd& x, const FilterCoefficients& c,
                        const Eigen::VectorXd& zi) {
  const int n = static_cast<int>(c.a.size()) - 1;
  Eigen::VectorXd w = zi;
  Eigen::VectorXd y(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double xk = x[k];
    const double yk = c.b[0] * xk + (n > 0 ? w[0] : 0.0);
    for (int i = 0; i < n - 1; ++i)
      w[i] = c.b[i + 1] * xk + w[i + 1] - c.a[i + 1] * yk;
    if (n > 0) w[n - 1] = c.b[n] * xk - c.a[n] * yk;
    y[k] = yk;
  }
  return y;
}

// Steady state of the DF2T registers for a unit-step input (lfilter_zi).
Eigen::VectorXd step_steady_state(const FilterCoefficients& c) {
  const int n = static_cast<int>(c.a.size()) - 1;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(std::max(n, 1));
  double asum = c.a.sum();
  double bsum = c.b.sum();
  const double y = bsum / asum;  // steady output for unit input
  for (int i = n - 1; i >= 0; --i) {
    const double next = (i + 1 < n) ? w[i + 1] : 0.0;
    w[i] = c.b[i + 1] - c.a[i + 1] * y + next;
  }
  return w;
}

Eigen::VectorXd reversed(const Eigen::VectorXd& x) { return x.reverse(); }

}  // namespace

FilterCoefficients butterworth_coefficients(const FilterSpec& spec,
                                            double sample_rate) {
  if (spec.order < 1)
    throw InvalidSpecError("butterworth: order must be >= 1");
  if (!(spec.critical_freq > 0.0) || spec.critical_freq >= sample_rate / 2.0)
    throw InvalidSpecError("butterworth: critical frequency must lie below Nyquist");

  const int n = spec.order;
  const double fs2 = 2.0 * sample_rate;
  // Prewarped analog cutoff so the digital filter hits -3 dB exactly at fc.
  const double wc = fs2 * std::tan(M_PI * spec.critical_freq / sample_rate);

  std::vector<Cplx> zpoles, zzeros(n, Cplx(-1.0, 0.0));
  zpoles.reserve(n);
  for (int k = 1; k <= n; ++k) {
    const double theta = M_PI * (2.0 * k - 1.0) / (2.0 * n) + M_PI / 2.0;
    const Cplx s = wc * Cplx(std::cos(theta), std::sin(theta));
    zpoles.push_back((fs2 + s) / (fs2 - s));
  }

  Eigen::VectorXcd az = poly_from_roots(zpoles);
  Eigen::VectorXcd bz = poly_from_roots(zzeros);

  FilterCoefficients c;
  c.a = az.real();
  c.b = bz.real();
  // Normalize to unit DC gain: H(z=1) = 1.
  const double gain = c.a.sum() / c.b.sum();
  c.b *= gain;
  return c;
}

double magnitude_response(const FilterCoefficients& c, double f, double sample_rate) {
  const Cplx z = std::polar(1.0, -2.0 * M_PI * f / sample_rate);
  Cplx num(0.0, 0.0), den(0.0, 0.0), zk(1.0, 0.0);
  for (Eigen::Index k = 0; k < c.b.size(); ++k) {
    num += c.b[k] * zk;
    den += c.a[k] * zk;
    zk *= z;
  }
  return std::abs(num / den);
}

Eigen::VectorXd filter_apply(const Eigen::VectorXd& x, const FilterCoefficients& c,
                             PhaseMode mode) {
  const int order = static_cast<int>(c.a.size()) - 1;
  if (x.size() <= 3 * order)
    throw ContractViolationError("filter_apply: input shorter than 3x filter order");

  if (mode == PhaseMode::causal) {
    return lfilter(x, c, Eigen::VectorXd::Zero(std::max(order, 1)));
  }

  // Odd reflection padding suppresses startup transients at both ends.
  const Eigen::Index pad = 3 * order;
  const Eigen::Index n = x.size();
  Eigen::VectorXd ext(n + 2 * pad);
  for (Eigen::Index i = 0; i < pad; ++i) ext[i] = 2.0 * x[0] - x[pad - i];
  ext.segment(pad, n) = x;
  for (Eigen::Index i = 0; i < pad; ++i)
    ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];

  const Eigen::VectorXd zi = step_steady_state(c);
  Eigen::VectorXd y = lfilter(ext, c, zi * ext[0]);
  y = reversed(y);
  y = lfilter(y, c, zi * y[0]);
  y = reversed(y);
  return y.segment(pad, n);
}

Eigen::VectorXd decimate_mean(const Eigen::VectorXd& x, int factor) {
  if (factor < 1)
    throw ContractViolationError("decimate_mean: factor must be >= 1");
  if (x.size() % factor != 0)
    throw ContractViolationError("decimate_mean: length not divisible by factor");
  const Eigen::Index bins = x.size() / factor;
  Eigen::VectorXd out(bins);
  for (Eigen::Index j = 0; j < bins; ++j)
    out[j] = x.segment(j * factor, factor).mean();
  return out;
}

Eigen::VectorXd condition_record(const MeasurementRecord& record,
                                 const FilterSpec& spec, double target_dt,
                                 double tau, const Calibration& calibration) {
  if (!calibration.valid())
    throw UnscaledOutputError("condition_record: calibration voltages missing");
  const double factor_f = record.sample_rate * target_dt;
  const int factor = static_cast<int>(std::llround(factor_f));
  if (std::abs(factor_f - factor) > 1e-9 || factor < 1)
    throw ContractViolationError(
        "condition_record: sample_rate * target_dt must be an integer factor");

  // (1) anti-alias before decimating.
  Eigen::VectorXd y = filter_apply(record.samples,
                                   butterworth_coefficients(spec, record.sample_rate),
                                   spec.phase_mode);

  // (2) bin-average; bins are centered on the output grid points, so the
  // stream is edge-held half a bin at the front.
  const Eigen::Index lead = factor / 2;
  Eigen::VectorXd padded(y.size() + lead);
  padded.head(lead).setConstant(y[0]);
  padded.tail(y.size()) = y;
  const Eigen::Index usable = (padded.size() / factor) * factor;
  Eigen::VectorXd dec = decimate_mean(padded.head(usable), factor);

  // (3) undo the resonator delay: advance by whole bins.
  const Eigen::Index shift = static_cast<Eigen::Index>(std::llround(tau / target_dt));
  if (shift < 0 || shift >= dec.size())
    throw ContractViolationError("condition_record: delay shift exceeds record");
  Eigen::VectorXd shifted = dec.segment(shift, dec.size() - shift);

  // (4) affine rescale from the calibration pair, (5) clip.
  const double mid = 0.5 * (calibration.v_plus + calibration.v_minus);
  const double half = 0.5 * (calibration.v_plus - calibration.v_minus);
  if (half == 0.0)
    throw UnscaledOutputError("condition_record: degenerate calibration voltages");
  Eigen::VectorXd z = (shifted.array() - mid) / half;
  return z.array().min(1.0).max(-1.0);
}

}  // namespace hamrec
