#include <doctest.h>

#include <cmath>

#include "hamrec/lindblad.hpp"
#include "hamrec/signal.hpp"

using namespace hamrec;

TEST_CASE("butterworth magnitude checkpoints") {
  // Order 1 at fs/4.
  auto c1 = butterworth_coefficients({1, 0.25e9, PhaseMode::zero_phase}, 1e9);
  CHECK(magnitude_response(c1, 0.25e9, 1e9) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.01));

  // Order 3, fc = 50 MHz, fs = 1 GHz.
  auto c3 = butterworth_coefficients({3, 50e6, PhaseMode::zero_phase}, 1e9);
  CHECK(magnitude_response(c3, 0.0, 1e9) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(magnitude_response(c3, 50e6, 1e9) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.01));
  CHECK(magnitude_response(c3, 200e6, 1e9) < 0.02);

  // Order 5 rolls off faster.
  auto c5 = butterworth_coefficients({5, 50e6, PhaseMode::zero_phase}, 1e9);
  CHECK(magnitude_response(c5, 100e6, 1e9) < magnitude_response(c3, 100e6, 1e9));

  CHECK_THROWS_AS(butterworth_coefficients({3, 0.5e9, PhaseMode::zero_phase}, 1e9),
                  InvalidSpecError);
  CHECK_THROWS_AS(butterworth_coefficients({3, 0.6e9, PhaseMode::zero_phase}, 1e9),
                  InvalidSpecError);
}

TEST_CASE("filter_apply: DC passthrough, sinusoid scaling, impulse response") {
  auto c = butterworth_coefficients({3, 50e6, PhaseMode::zero_phase}, 1e9);

  Eigen::VectorXd constant = Eigen::VectorXd::Constant(500, 0.7);
  Eigen::VectorXd y = filter_apply(constant, c, PhaseMode::zero_phase);
  CHECK((y.array() - 0.7).abs().maxCoeff() < 1e-9);

  // Sinusoid at fc through forward-backward: amplitude scaled by |H|^2 = 1/2.
  const double fc = 50e6;
  Eigen::VectorXd sine(4000);
  for (int k = 0; k < 4000; ++k) sine[k] = std::sin(2.0 * M_PI * fc * k / 1e9);
  Eigen::VectorXd fy = filter_apply(sine, c, PhaseMode::zero_phase);
  // Fit the amplitude over the interior (avoid edges).
  double num = 0.0, den = 0.0;
  for (int k = 500; k < 3500; ++k) {
    num += fy[k] * sine[k];
    den += sine[k] * sine[k];
  }
  CHECK(num / den == doctest::Approx(0.5).epsilon(0.02));

  // Impulse through the causal path reproduces the recurrence directly.
  Eigen::VectorXd impulse = Eigen::VectorXd::Zero(64);
  impulse[0] = 1.0;
  Eigen::VectorXd h = filter_apply(impulse, c, PhaseMode::causal);
  Eigen::VectorXd expect = Eigen::VectorXd::Zero(64);
  for (int k = 0; k < 64; ++k) {
    double acc = 0.0;
    for (int j = 0; j < c.b.size(); ++j)
      if (k - j == 0) acc += c.b[j];
    for (int j = 1; j < c.a.size(); ++j)
      if (k - j >= 0) acc -= c.a[j] * expect[k - j];
    expect[k] = acc;
  }
  CHECK((h - expect).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(filter_apply(Eigen::VectorXd::Zero(9), c, PhaseMode::zero_phase),
                  ContractViolationError);
}

TEST_CASE("decimate_mean preserves the record mean") {
  Eigen::VectorXd x(1000);
  for (int k = 0; k < 1000; ++k) x[k] = std::sin(0.01 * k) + 0.2 * k;
  Eigen::VectorXd d = decimate_mean(x, 4);
  CHECK(d.size() == 250);
  CHECK(d.mean() == doctest::Approx(x.mean()).epsilon(1e-12));
  CHECK_THROWS_AS(decimate_mean(x, 3), ContractViolationError);
}

namespace {

ReadoutParams q1_params() {
  ReadoutParams p;
  p.kappa = 2.0 * M_PI * 11.78e6;
  p.chi = 2.0 * M_PI * 0.64e6;
  p.nbar = 0.94;
  p.omega_wm = 0.5 * p.kappa * std::sqrt(p.nbar);
  p.eta = 0.41;
  p.sample_rate = 1e9;
  p.gamma_d = 0.0;
  return p;
}

Calibration make_calibration(const ReadoutParams& p) {
  auto [plus, minus] = calibration_traces(p, 1e-6, 1, 0);
  return Calibration{record_mean(plus), record_mean(minus)};
}

}  // namespace

TEST_CASE("condition_record: calibration round trip at z = +1") {
  auto p = q1_params();
  auto cal = make_calibration(p);
  Eigen::VectorXd z = Eigen::VectorXd::Constant(600, 1.0);
  auto rec = synthesize_shots(resonator_response_adiabatic(z, p), p, 1, 0);
  FilterSpec spec{3, 50e6, PhaseMode::zero_phase};
  Eigen::VectorXd out = condition_record(rec, spec, 2e-9, p.tau(), cal);
  for (int n = 0; n < out.size(); ++n)
    CHECK(out[n] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("condition_record: recovers a 2 MHz Rabi z(t) with RMS error < 0.02") {
  auto p = q1_params();
  auto cal = make_calibration(p);

  // Truth from the Lindblad engine at the raw rate, pulse plus 40 ns buffer.
  const double t_p = 250e-9;
  const int raw_steps = static_cast<int>((t_p + 40e-9) * p.sample_rate);
  PauliHamiltonian h(1, 1e-9, raw_steps);
  for (int n = 0; n < raw_steps; ++n)
    h.amplitudes()(PauliLabel("X").index(), n) =
        (n * 1e-9 < t_p) ? 2.0 * M_PI * 2e6 : 0.0;
  auto [traj, rho] = lindblad_evolve(density_from_state_label("+Z"), h,
                                     {DissipationRates{}});
  Eigen::VectorXd z_raw = traj.values.row(PauliLabel("Z").index()).head(raw_steps);

  auto rec = synthesize_shots(resonator_response_adiabatic(z_raw, p), p, 1, 0);
  FilterSpec spec{3, 50e6, PhaseMode::zero_phase};
  Eigen::VectorXd z_cond = condition_record(rec, spec, 2e-9, p.tau(), cal);

  const int n_check = static_cast<int>(t_p / 2e-9);
  REQUIRE(z_cond.size() >= n_check);
  double rms = 0.0;
  for (int n = 0; n < n_check; ++n) {
    const double z_true = traj.z(0, 2 * n);
    rms += (z_cond[n] - z_true) * (z_cond[n] - z_true);
  }
  rms = std::sqrt(rms / n_check);
  CHECK(rms < 0.02);
}

TEST_CASE("condition_record: clip and missing calibration") {
  auto p = q1_params();
  auto cal = make_calibration(p);
  Eigen::VectorXd z = Eigen::VectorXd::Constant(600, 1.0);
  auto rec = synthesize_shots(resonator_response_adiabatic(z, p), p, 1, 0);
  rec.samples *= 1.3;  // overdrive: rescales past +1
  FilterSpec spec{3, 50e6, PhaseMode::zero_phase};
  Eigen::VectorXd out = condition_record(rec, spec, 2e-9, p.tau(), cal);
  CHECK(out.maxCoeff() == doctest::Approx(1.0));

  CHECK_THROWS_AS(condition_record(rec, spec, 2e-9, p.tau(), Calibration{}),
                  UnscaledOutputError);
}

TEST_CASE("pipeline linearity up to the clip") {
  auto p = q1_params();
  auto cal = make_calibration(p);
  Eigen::VectorXd z(2000);
  for (int k = 0; k < 2000; ++k) z[k] = 0.5 * std::sin(2.0 * M_PI * 2e6 * k / 1e9);
  auto rec = synthesize_shots(resonator_response_adiabatic(z, p), p, 1, 0);
  FilterSpec spec{3, 50e6, PhaseMode::zero_phase};
  Eigen::VectorXd base = condition_record(rec, spec, 2e-9, p.tau(), cal);

  MeasurementRecord scaled = rec;
  const double alpha = 0.8, beta = 0.001;
  scaled.samples = alpha * rec.samples.array() + beta;
  Eigen::VectorXd out = condition_record(scaled, spec, 2e-9, p.tau(), cal);

  // Affine image: out = alpha * base + const.
  const double offset = out[10] - alpha * base[10];
  for (int n = 0; n < out.size(); ++n)
    CHECK(out[n] - alpha * base[n] == doctest::Approx(offset).epsilon(1e-9));
}

TEST_CASE("over-filtering degrades the round trip monotonically") {
  auto p = q1_params();
  auto cal = make_calibration(p);
  const double t_p = 250e-9;
  const int raw_steps = static_cast<int>((t_p + 40e-9) * p.sample_rate);
  PauliHamiltonian h(1, 1e-9, raw_steps);
  const double peak = M_PI / 200e-9;
  for (int n = 0; n < raw_steps; ++n) {
    const double t = n * 1e-9;
    double env = 0.0;
    if (t < t_p) {
      if (t < 50e-9) env = 0.5 * (1 - std::cos(M_PI * t / 50e-9));
      else if (t > t_p - 50e-9) env = 0.5 * (1 - std::cos(M_PI * (t_p - t) / 50e-9));
      else env = 1.0;
    }
    h.amplitudes()(PauliLabel("X").index(), n) = peak * env;
  }
  auto [traj, rho] = lindblad_evolve(density_from_state_label("+Y"), h,
                                     {DissipationRates{}});
  Eigen::VectorXd z_raw = traj.values.row(PauliLabel("Z").index()).head(raw_steps);
  auto rec = synthesize_shots(resonator_response_adiabatic(z_raw, p), p, 1, 0);

  auto rms_error = [&](double fc) {
    FilterSpec spec{3, fc, PhaseMode::zero_phase};
    Eigen::VectorXd z_cond = condition_record(rec, spec, 2e-9, p.tau(), cal);
    const int n_check = static_cast<int>(t_p / 2e-9);
    double rms = 0.0;
    for (int n = 0; n < n_check; ++n) {
      const double err = z_cond[n] - traj.z(0, 2 * n);
      rms += err * err;
    }
    return std::sqrt(rms / n_check);
  };

  const double e50 = rms_error(50e6);
  const double e12 = rms_error(12e6);
  const double e6 = rms_error(6e6);
  const double e3 = rms_error(3e6);
  CHECK(e50 < e12);
  CHECK(e12 < e6);
  CHECK(e6 < e3);
}
