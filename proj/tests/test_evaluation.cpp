#include "doctest.h"

#include "astft/evaluation.hpp"
#include "astft/pipeline.hpp"

#include <cmath>

using namespace astft;
using doctest::Approx;

TEST_CASE("interior slice") {
  const auto s128 = interior_slice(128);
  CHECK(s128.first_label() == 17);
  CHECK(s128.last_label() == 112);
  CHECK(s128.begin == 16);
  CHECK(s128.size() == 96);
  const auto s512 = interior_slice(512);
  CHECK(s512.first_label() == 65);
  CHECK(s512.last_label() == 448);
  const auto s8 = interior_slice(8);
  CHECK(s8.first_label() == 2);
  CHECK(s8.last_label() == 7);
  CHECK_THROWS_AS(interior_slice(7), std::invalid_argument);
  // Exactly N/8 samples dropped at each end.
  for (Index n : {64, 100, 1024}) {
    const auto s = interior_slice(n);
    CHECK(s.begin == n / 8);
    CHECK(s.end == 7 * n / 8);
  }
}

TEST_CASE("rmse") {
  Eigen::MatrixXcd truth(16, 2);
  for (Index m = 0; m < 16; ++m) {
    truth(m, 0) = Complex(std::cos(0.4 * m), std::sin(0.4 * m));
    truth(m, 1) = Complex(1.0 + 0.1 * m, -0.5);
  }
  const auto slice = interior_slice(16);
  CHECK(rmse(truth, truth, slice) == 0.0);
  CHECK(rmse(truth, 2.0 * truth, slice) == Approx(1.0));

  Eigen::MatrixXcd est = truth;
  est.col(0) *= 1.1;
  est.col(1) *= 0.7;
  CHECK(rmse(truth, est, slice) == Approx(0.2));

  const Complex scale(3.0, -2.0);
  CHECK(std::abs(rmse(scale * truth, scale * est, slice) - rmse(truth, est, slice)) < 1e-12);

  Eigen::MatrixXcd bad = est;
  bad(5, 0) = 100.0;
  FrameMask mask = FrameMask::Constant(16, false);
  mask(5) = true;
  CHECK(rmse(truth, bad, slice, &mask) == Approx(0.2));
  CHECK(rmse(truth, bad, slice) > 1.0);

  CHECK_THROWS_AS(rmse(Eigen::MatrixXcd::Zero(16, 1), Eigen::MatrixXcd::Zero(16, 1), slice),
                  std::invalid_argument);
  CHECK_THROWS_AS(rmse(truth, est.leftCols(1), slice), std::invalid_argument);
}

TEST_CASE("median") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK_THROWS_AS(median({}), std::invalid_argument);
}

TEST_CASE("generator lookup") {
  CHECK(model_by_name("two_lfm").n == 128);
  CHECK(model_by_name("one_chirp").n == 512);
  CHECK(model_by_name("one_cosine").n == 1024);
  CHECK_THROWS_AS(model_by_name("three_lfm"), std::invalid_argument);
  CHECK(generator_names().size() == 3);
}

TEST_CASE("evaluate compares real inputs against the real components") {
  const auto gen = gen_two_lfm();
  const auto sigma = SigmaSeries::constant(128, kFigureSigma);
  const auto run = separate(gen.signal, sigma, SeparationConfig{}, &gen.truth);
  const auto report =
      evaluate(gen.truth, run.si, true, "unit", "si", make_echo(sigma, SeparationConfig{}));
  CHECK(report.slice.begin == 16);
  CHECK(report.times.size() == 96);
  CHECK(report.components.size() == 2);
  CHECK(report.chirp_source == "none");
  CHECK(report.echo.sigma == kFigureSigma);
  CHECK(report.echo.sigma_policy == "constant");
  CHECK(report.rmse >= 0.0);
  const Eigen::MatrixXcd real_truth = gen.truth.components.real().cast<Complex>();
  CHECK(report.rmse == Approx(rmse(real_truth.rightCols(2), run.si.x_hat.rightCols(2),
                                   report.slice, &run.si.flagged)));
  for (const auto& c : report.components) {
    CHECK(c.abs_error.size() == 96);
    CHECK(c.median_abs <= c.max_abs);
  }
  CHECK_THROWS_AS(evaluate(gen_linear_chirp().truth, run.si, true, "x", "si", RunEcho{}),
                  std::invalid_argument);
}

TEST_CASE("table 1 at sigma = 1/16 keeps the model ordering") {
  const auto t = run_table1();
  CHECK(t.ordered());
  CHECK(t.si.rmse > 0.0);
  CHECK(t.lc.chirp_source == "estimated");
  CHECK(t.lc_true.chirp_source == "ground_truth");
  CHECK(t.si.slice.first_label() == 17);
  const auto again = run_table1();
  CHECK(again.si.rmse == t.si.rmse);
  CHECK(again.lc.rmse == t.lc.rmse);
  CHECK(again.lc_true.rmse == t.lc_true.rmse);
}

TEST_CASE("figure experiments") {
  const auto runs = run_figures();
  REQUIRE(runs.size() == 4);
  CHECK(runs[0].name == "one_chirp_clean");
  CHECK(runs[1].name == "one_chirp_10db");
  CHECK(runs[2].name == "one_cosine_clean");
  CHECK(runs[3].name == "one_cosine_15db");
  REQUIRE(runs[0].lc_true);
  CHECK_FALSE(runs[1].lc_true);
  CHECK(runs[1].seed == 1u);
  CHECK_FALSE(runs[0].seed);

  const double si = runs[0].si.components[0].median_abs;
  const double lct = runs[0].lc_true->components[0].median_abs;
  CHECK(lct / si < 0.2);
  CHECK(runs[0].lc.components[0].median_abs < si);
  CHECK(runs[2].lc.components[0].median_abs < runs[2].si.components[0].median_abs);

  const auto again = run_figures();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    CHECK(again[i].si.components[0].abs_error == runs[i].si.components[0].abs_error);
    CHECK(again[i].lc.components[0].abs_error == runs[i].lc.components[0].abs_error);
  }
}

TEST_CASE("noisy ordering over seeds") {
  const auto chirp = noisy_ordering("one_chirp", 10.0, 5);
  CHECK(chirp.seeds.size() == 5);
  CHECK(chirp.seeds.front() == 1u);
  CHECK(chirp.holds());
  const auto cosine = noisy_ordering("one_cosine", 15.0, 5, 100);
  CHECK(cosine.seeds.front() == 100u);
  CHECK(cosine.holds());
  CHECK_THROWS_AS(noisy_ordering("one_chirp", 10.0, 0), std::invalid_argument);
}
