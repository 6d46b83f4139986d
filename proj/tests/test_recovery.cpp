#include "doctest.h"

#include "astft/bounds.hpp"
#include "astft/pipeline.hpp"
#include "astft/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace astft;
using doctest::Approx;
using std::numbers::pi;

namespace {

constexpr double kSigma = 1.0 / 16.0;

template <typename Scalar>
TFMatrix analyse(const SampledSignal<Scalar>& s, double sigma = kSigma) {
  return stft_all(s, SigmaSeries::constant(s.size(), sigma),
                  FreqGrid::oversampled(s.sample_rate, s.size(), 4));
}

double interior_median(const Eigen::VectorXcd& truth, const Eigen::VectorXcd& est) {
  const Index n = truth.size();
  std::vector<double> err;
  for (Index m = n / 8; m < n - n / 8; ++m) err.push_back(std::abs(truth(m) - est(m)));
  std::nth_element(err.begin(), err.begin() + err.size() / 2, err.end());
  return err[err.size() / 2];
}

double interior_max(const Eigen::VectorXcd& truth, const Eigen::VectorXcd& est) {
  const Index n = truth.size();
  return (truth - est).segment(n / 8, n - 2 * (n / 8)).cwiseAbs().maxCoeff();
}

Eigen::VectorXcd real_part(const Eigen::VectorXcd& v) { return v.real().cast<Complex>(); }

}  // namespace

TEST_CASE("sinusoidal recovery of pure tones") {
  ComplexSignal c;
  c.sample_rate = 128.0;
  c.samples.resize(256);
  for (Index m = 0; m < 256; ++m) c.samples(m) = std::polar(1.7, 2.0 * pi * 20.0 * m / 128.0);
  const auto tf = analyse(c);
  const auto ridges = track_ridges(tf, RidgeOptions{});
  const auto si = recover_sinusoidal(tf, ridges);
  CHECK(si.model == RecoveryModel::sinusoidal);
  CHECK(interior_max(c.samples, si.x_hat.col(1)) < 1e-2 * 1.7);
  const auto amp = estimate_amplitude(tf, ridges);
  for (Index m = 32; m < 224; ++m) CHECK(amp(m, 1) == Approx(1.7).epsilon(1e-2));

  RealSignal r{c.samples.real(), 128.0, 0.0};
  const auto rtf = analyse(r);
  const auto rr = track_ridges(rtf, RidgeOptions{});
  const auto rsi = recover_sinusoidal(rtf, rr);
  CHECK(rsi.x_hat.col(1).imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK(interior_max(r.samples.cast<Complex>(), rsi.x_hat.col(1)) < 1e-2 * 1.7);
  const auto ramp = estimate_amplitude(rtf, rr);
  for (Index m = 32; m < 224; ++m) CHECK(ramp(m, 1) == Approx(1.7).epsilon(1e-2));
}

TEST_CASE("zero chirp rate reproduces sinusoidal recovery") {
  const auto gen = gen_two_lfm();
  const auto tf = analyse(gen.signal);
  const auto ridges = track_ridges(tf, RidgeOptions{});
  const auto si = recover_sinusoidal(tf, ridges);
  const auto lc = recover_linear_chirp(tf, ridges, Eigen::MatrixXd::Zero(128, 3),
                                       ChirpRateSource::ground_truth);
  CHECK(lc.model == RecoveryModel::linear_chirp);
  CHECK(lc.source == ChirpRateSource::ground_truth);
  CHECK((lc.x_hat.array() == si.x_hat.array()).all());
  CHECK_THROWS_AS(recover_linear_chirp(tf, ridges, Eigen::MatrixXd::Zero(128, 2),
                                       ChirpRateSource::estimated),
                  std::invalid_argument);
}

TEST_CASE("amplitude of a zero signal") {
  const auto tf = analyse(gen_two_lfm().signal);
  const auto ridges = track_ridges(tf, RidgeOptions{});
  TFMatrix zero = tf;
  zero.values.setZero();
  CHECK(estimate_amplitude(zero, ridges).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("linear chirp recovery of the one_chirp signal") {
  const auto gen = gen_linear_chirp();
  const auto run = separate(gen.signal, SigmaSeries::constant(512, kSigma),
                            SeparationConfig{}, &gen.truth);
  const Eigen::VectorXcd truth = real_part(gen.truth.components.col(1));
  const double si = interior_median(truth, run.si.x_hat.col(1));
  const double lc = interior_median(truth, run.lc.x_hat.col(1));
  const double lct = interior_median(truth, run.lc_true->x_hat.col(1));
  CHECK(interior_max(truth, run.si.x_hat.col(1)) > 0.05);
  CHECK(lct < 0.2 * si);
  CHECK(lct < lc);
  CHECK(lc < si);
}

TEST_CASE("exact linear chirp: ground-truth correction is within quadrature error") {
  const auto gen = synth_ahm<Complex>(linear_chirp_model());
  const auto run = separate(gen.signal, SigmaSeries::constant(512, kSigma), SeparationConfig{},
                            &gen.truth);
  CHECK(interior_max(gen.truth.components.col(1), run.lc_true->x_hat.col(1)) < 1e-2);
}

TEST_CASE("dominance on two_lfm") {
  const auto gen = gen_two_lfm();
  const auto run =
      separate(gen.signal, SigmaSeries::constant(128, kSigma), SeparationConfig{}, &gen.truth);
  for (Index l = 1; l <= 2; ++l) {
    const Eigen::VectorXcd truth = real_part(gen.truth.components.col(l));
    const double si = interior_median(truth, run.si.x_hat.col(l));
    const double lc = interior_median(truth, run.lc.x_hat.col(l));
    const double lct = interior_median(truth, run.lc_true->x_hat.col(l));
    CHECK(lct < lc);
    CHECK(lc < si);
  }
}

TEST_CASE("one_cosine amplitude within the sinusoidal error bound") {
  const auto gen = synth_ahm<Complex>(cosine_if_model());
  const auto sigma = SigmaSeries::constant(1024, kSigma);
  const auto tf = stft_all(gen.signal, sigma, FreqGrid::oversampled(128.0, 1024, 4));
  const auto ridges = track_ridges(tf, RidgeOptions{});
  const auto amp = estimate_amplitude(tf, ridges);
  const auto report =
      compute_bounds(gen.truth, sigma, estimate_assumptions(cosine_if_model(), 0.0, 8.0));
  for (Index m = 128; m < 896; ++m) {
    CHECK(std::abs(amp(m, 1) - gen.truth.amplitude(m, 1)) <= report.err(m, 1) + 1e-2);
  }
}

TEST_CASE("flagged frames repeat the previous sample") {
  const auto gen = gen_two_lfm();
  const auto tf = analyse(gen.signal);
  auto ridges = track_ridges(tf, RidgeOptions{});
  ridges.cluster_lo(60, 2) = -1;
  ridges.flagged(60) = true;
  const auto si = recover_sinusoidal(tf, ridges);
  CHECK(si.flagged(60));
  CHECK(si.x_hat(60, 2) == si.x_hat(59, 2));
  CHECK(si.x_hat(60, 1).real() == 2.0 * tf.values(60, ridges.bins(60, 1)).real());
}
