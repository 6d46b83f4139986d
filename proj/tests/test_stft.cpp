#include "doctest.h"

#include "astft/signal.hpp"
#include "astft/stft.hpp"

#include <cmath>
#include <numbers>

using namespace astft;
using doctest::Approx;
using std::numbers::pi;

namespace {

ComplexSignal complex_tone(double freq, Index n, double rate, double delay = 0.0) {
  ComplexSignal s;
  s.sample_rate = rate;
  s.samples.resize(n);
  for (Index m = 0; m < n; ++m) {
    const double t = m / rate - delay;
    s.samples(m) = std::polar(1.0, 2.0 * pi * freq * t);
  }
  return s;
}

// e^{i 2 pi (9 t + 5 t^2)}: IF 9 + 10 t, chirp rate 10.
ComplexSignal complex_chirp(Index n, double rate) {
  ComplexSignal s;
  s.sample_rate = rate;
  s.samples.resize(n);
  for (Index m = 0; m < n; ++m) {
    const double t = m / rate;
    s.samples(m) = std::polar(1.0, 2.0 * pi * (9.0 * t + 5.0 * t * t));
  }
  return s;
}

// Frames far enough from both ends that the truncated window fits.
bool interior(Index m, Index n) { return m >= n / 8 && m < n - n / 8; }

}  // namespace

TEST_CASE("frequency grid") {
  const FreqGrid g = FreqGrid::oversampled(128.0, 128, 4);
  CHECK(g.delta_eta == 0.25);
  CHECK(g.eta_min == 0.25);
  CHECK(g.n_bins == 256);
  CHECK(g.eta(g.n_bins - 1) == 64.0);
  CHECK(g.nearest_bin(15.0) == 59);
  CHECK(g.nearest_bin(-3.0) == 0);
  CHECK(g.nearest_bin(1e6) == 255);

  const FreqGrid z = FreqGrid::oversampled(128.0, 128, 4, true);
  CHECK(z.eta(0) == 0.0);
  CHECK(z.eta(z.n_bins - 1) == 64.0);

  CHECK_THROWS_AS(validate(FreqGrid{0.0, 0.0, 16}), std::invalid_argument);
  CHECK_THROWS_AS(validate(FreqGrid{0.0, 1.0, 4}), std::invalid_argument);
  CHECK_THROWS_AS(FreqGrid::oversampled(0.0, 128), std::invalid_argument);
}

TEST_CASE("constant signal at zero frequency") {
  RealSignal s{Eigen::VectorXd::Constant(256, 3.0), 128.0, 0.0};
  const FreqGrid grid{0.0, 0.5, 64};
  for (Index m = 64; m < 192; m += 7) {
    const auto row = stft_frame(s, m, 1.0 / 16.0, grid);
    CHECK(std::abs(row(0) - 3.0) <= 1e-3 * 3.0);
  }
}

TEST_CASE("pure tone magnitude follows the window transform") {
  const auto s = complex_tone(20.0, 256, 128.0);
  const FreqGrid grid{0.0, 1.0, 64};
  const auto tf = stft_all(s, SigmaSeries::constant(256, 1.0 / 16.0), grid);
  for (Index m = 0; m < 256; ++m) {
    if (!interior(m, 256)) continue;
    CHECK(std::abs(tf.values(m, 20)) == Approx(1.0).epsilon(1e-2));
    CHECK(std::abs(std::abs(tf.values(m, 24)) - 0.29127) < 1e-2);
  }
}

TEST_CASE("linear chirp matches the closed-form kernel") {
  const Index n = 512;
  const double rate = 128.0;
  const double sigma = 1.0 / 16.0;
  const auto s = complex_chirp(n, rate);
  const FreqGrid grid = FreqGrid::oversampled(rate, n, 4);
  const auto tf = stft_all(s, SigmaSeries::constant(n, sigma), grid);
  double worst = 0.0;
  for (Index m = 0; m < n; ++m) {
    if (!interior(m, n)) continue;
    const double t = m / rate;
    const double inst = 9.0 + 10.0 * t;
    const Index centre = grid.nearest_bin(inst);
    for (Index b = centre - 20; b <= centre + 20; ++b) {
      const Complex expected =
          s.samples(m) * chirp_kernel(sigma * (grid.eta(b) - inst), {sigma, 10.0});
      worst = std::max(worst, std::abs(tf.values(m, b) - expected));
    }
  }
  CHECK(worst < 1e-2);
}

TEST_CASE("constant sigma equals the conventional STFT definition") {
  const auto s = gen_two_lfm().signal;
  const FreqGrid grid = FreqGrid::oversampled(128.0, 128, 2);
  const double sigma = 1.0 / 16.0;
  const auto tf = stft_all(s, SigmaSeries::constant(128, sigma), grid);
  for (Index m : {10, 64, 100}) {
    for (Index b : {0, 19, 60, 127}) {
      Complex direct = 0.0;
      for (Index j = 0; j < 128; ++j) {
        const double tau = (j - m) / 128.0;
        if (std::abs(tau) > 5.0 * sigma) continue;
        direct += s.samples(j) * gaussian_window(tau / sigma) / sigma *
                  std::polar(1.0, -2.0 * pi * grid.eta(b) * tau) / 128.0;
      }
      CHECK(std::abs(tf.values(m, b) - direct) < 1e-12);
    }
  }
}

TEST_CASE("linearity") {
  const auto x = gen_two_lfm().signal;
  const auto y = add_noise(x, 0.0, 9);
  RealSignal sum{x.samples + y.samples, x.sample_rate, 0.0};
  const FreqGrid grid = FreqGrid::oversampled(128.0, 128, 4);
  Eigen::VectorXd sig(128);
  for (Index m = 0; m < 128; ++m) sig(m) = 0.05 + 0.0002 * m;
  const SigmaSeries sigma{sig, SigmaSource::user_file};
  const auto a = stft_all(x, sigma, grid);
  const auto b = stft_all(y, sigma, grid);
  const auto c = stft_all(sum, sigma, grid);
  CHECK((c.values - a.values - b.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("time shift of a tone is a phase factor") {
  const double c = 17.0;
  const double delay = 0.013;
  const auto a = complex_tone(c, 256, 128.0);
  const auto b = complex_tone(c, 256, 128.0, delay);
  const FreqGrid grid = FreqGrid::oversampled(128.0, 256, 4);
  const auto sigma = SigmaSeries::constant(256, 1.0 / 16.0);
  const auto ta = stft_all(a, sigma, grid);
  const auto tb = stft_all(b, sigma, grid);
  const Complex factor = std::polar(1.0, -2.0 * pi * c * delay);
  for (Index m = 0; m < 256; ++m) {
    if (!interior(m, 256)) continue;
    for (Index bin = 0; bin < grid.n_bins; bin += 13) {
      CHECK(std::abs(std::abs(tb.values(m, bin)) - std::abs(ta.values(m, bin))) < 1e-3);
      CHECK(std::abs(tb.values(m, bin) - factor * ta.values(m, bin)) < 1e-3);
    }
  }
}

TEST_CASE("quadrature converges when the sampling rate doubles") {
  const auto coarse = complex_chirp(512, 128.0);
  const auto fine = complex_chirp(1024, 256.0);
  const FreqGrid grid{1.0, 0.25, 200};
  const double sigma = 1.0 / 16.0;
  const auto tc = stft_all(coarse, SigmaSeries::constant(512, sigma), grid);
  const auto tf = stft_all(fine, SigmaSeries::constant(1024, sigma), grid);
  for (Index m = 64; m < 448; m += 5) {
    const double t = m / 128.0;
    const Index bin = grid.nearest_bin(9.0 + 10.0 * t);
    const double vc = std::abs(tc.values(m, bin));
    const double vf = std::abs(tf.values(2 * m, bin));
    CHECK(std::abs(vc - vf) < 1e-3 * vf);
  }
}

TEST_CASE("real input is conjugate symmetric on a two-sided grid") {
  const auto s = gen_linear_chirp().signal;
  const FreqGrid grid{-32.0, 0.5, 129};
  const auto tf = stft_all(s, SigmaSeries::constant(s.size(), 1.0 / 16.0), grid);
  CHECK(tf.real_input);
  double worst = 0.0;
  for (Index m = 0; m < tf.frames(); ++m) {
    for (Index b = 0; b < 129; ++b) {
      worst = std::max(worst, std::abs(tf.values(m, b) - std::conj(tf.values(m, 128 - b))));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("magnitude bound and finiteness") {
  const auto s = add_noise(gen_cosine_if().signal, 5.0, 2);
  const double sigma = 1.0 / 16.0;
  const auto tf = stft_all(s, SigmaSeries::constant(s.size(), sigma),
                           FreqGrid::oversampled(128.0, s.size(), 2));
  CHECK(tf.values.allFinite());
  const double bound = s.dt() * s.samples.cwiseAbs().sum() * gaussian_window(0.0) / sigma;
  CHECK(tf.values.cwiseAbs().maxCoeff() <= bound);
  CHECK(tf.frames() == s.size());
  CHECK(tf.bins() == 1024);
  CHECK(tf.times(5) == s.time(5));
}

TEST_CASE("stft_all rows are bitwise stft_frame outputs") {
  const auto s = gen_two_lfm().signal;
  Eigen::VectorXd sig(128);
  for (Index m = 0; m < 128; ++m) sig(m) = 0.04 + 0.0003 * m;
  const SigmaSeries sigma{sig, SigmaSource::user_file};
  const FreqGrid grid = FreqGrid::oversampled(128.0, 128, 4);
  const auto tf = stft_all(s, sigma, grid);
  for (Index m = 0; m < 128; ++m) {
    const auto row = stft_frame(s, m, sig(m), grid);
    CHECK((row.array() == tf.values.row(m).array()).all());
  }
  const auto again = stft_all(s, sigma, grid);
  CHECK((again.values.array() == tf.values.array()).all());
}

TEST_CASE("invalid STFT inputs") {
  const auto s = gen_two_lfm().signal;
  const FreqGrid grid = FreqGrid::oversampled(128.0, 128, 4);
  CHECK_THROWS_AS(stft_all(s, SigmaSeries::constant(127, 0.0625), grid), std::invalid_argument);
  CHECK_THROWS_AS(stft_all(s, SigmaSeries::constant(128, 0.0), grid), std::invalid_argument);
  CHECK_THROWS_AS(stft_frame(s, 0, -1.0, grid), std::invalid_argument);
  CHECK_THROWS_AS(stft_frame(s, 128, 0.0625, grid), std::out_of_range);
}
