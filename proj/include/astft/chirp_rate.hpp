#pragma once

#include <Eigen/Dense>

namespace astft {

// Cubic B-spline smoother {1, 4, 6, 4, 1} / 16 with whole-sample mirror
// extension at both ends. Requires at least 5 samples.
Eigen::VectorXd bspline_smooth(const Eigen::Ref<const Eigen::VectorXd>& series);

// Fourth-order five-point derivative: centred stencil in the interior,
// one-sided five-point stencils for the first and last two samples.
Eigen::VectorXd five_point_derivative(const Eigen::Ref<const Eigen::VectorXd>& series, double dt);

struct ChirpRateSeries {
  Eigen::VectorXd raw;       // derivative of the smoothed ridge
  Eigen::VectorXd smoothed;  // raw, smoothed once more
};

// Smooth the ridge, differentiate, smooth the derivative.
ChirpRateSeries estimate_chirp_rate(const Eigen::Ref<const Eigen::VectorXd>& eta_hat, double dt);

}  // namespace astft
