#include "astft/chirp_rate.hpp"

#include <array>
#include <stdexcept>

namespace astft {

namespace {

using Index = Eigen::Index;

constexpr std::array<double, 5> kBsplineTaps{1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0,
                                             1.0 / 16.0};

void require_length(Index n) {
  if (n < 5) throw std::invalid_argument("series needs at least 5 samples");
}

// Whole-sample reflection: index -1 maps to 1, index n maps to n - 2.
Index mirror(Index i, Index n) {
  if (i < 0) return -i;
  if (i >= n) return 2 * (n - 1) - i;
  return i;
}

}  // namespace

Eigen::VectorXd bspline_smooth(const Eigen::Ref<const Eigen::VectorXd>& series) {
  const Index n = series.size();
  require_length(n);
  Eigen::VectorXd out(n);
  for (Index m = 0; m < n; ++m) {
    double acc = 0.0;
    for (Index j = 0; j < 5; ++j) {
      acc += kBsplineTaps[static_cast<std::size_t>(j)] * series(mirror(m + j - 2, n));
    }
    out(m) = acc;
  }
  return out;
}

Eigen::VectorXd five_point_derivative(const Eigen::Ref<const Eigen::VectorXd>& f, double dt) {
  const Index n = f.size();
  require_length(n);
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double scale = 1.0 / (12.0 * dt);
  Eigen::VectorXd d(n);
  for (Index m = 2; m < n - 2; ++m) {
    d(m) = (f(m - 2) - 8.0 * f(m - 1) + 8.0 * f(m + 1) - f(m + 2)) * scale;
  }
  d(0) = (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) * scale;
  d(1) = (-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4)) * scale;
  d(n - 2) = (3.0 * f(n - 1) + 10.0 * f(n - 2) - 18.0 * f(n - 3) + 6.0 * f(n - 4) - f(n - 5)) *
             scale;
  d(n - 1) = (25.0 * f(n - 1) - 48.0 * f(n - 2) + 36.0 * f(n - 3) - 16.0 * f(n - 4) +
              3.0 * f(n - 5)) *
             scale;
  return d;
}

ChirpRateSeries estimate_chirp_rate(const Eigen::Ref<const Eigen::VectorXd>& eta_hat, double dt) {
  ChirpRateSeries out;
  out.raw = five_point_derivative(bspline_smooth(eta_hat), dt);
  out.smoothed = bspline_smooth(out.raw);
  return out;
}

}  // namespace astft
