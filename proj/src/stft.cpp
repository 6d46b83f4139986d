#include "astft/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace astft {

void validate(const SigmaSeries& sigma, Index expected_length) {
  if (sigma.size() != expected_length) {
    throw std::invalid_argument("sigma series has " + std::to_string(sigma.size()) +
                                " values, signal has " + std::to_string(expected_length));
  }
  if (!sigma.values.allFinite() || (sigma.values.array() <= 0.0).any()) {
    throw std::invalid_argument("sigma values must be finite and positive");
  }
}

Eigen::VectorXd FreqGrid::etas() const {
  Eigen::VectorXd out(n_bins);
  for (Index n = 0; n < n_bins; ++n) out(n) = eta(n);
  return out;
}

Index FreqGrid::nearest_bin(double value) const {
  const double pos = std::round((value - eta_min) / delta_eta);
  return static_cast<Index>(std::clamp(pos, 0.0, static_cast<double>(n_bins - 1)));
}

FreqGrid FreqGrid::oversampled(double sample_rate, Index n, int oversampling, bool include_zero) {
  if (!(sample_rate > 0.0) || n <= 0 || oversampling < 1) {
    throw std::invalid_argument("invalid grid request");
  }
  FreqGrid grid;
  grid.delta_eta = sample_rate / (static_cast<double>(oversampling) * static_cast<double>(n));
  grid.n_bins = static_cast<Index>(oversampling) * n / 2;
  grid.eta_min = grid.delta_eta;
  if (include_zero) {
    grid.eta_min = 0.0;
    grid.n_bins += 1;
  }
  return grid;
}

void validate(const FreqGrid& grid) {
  if (!(grid.delta_eta > 0.0) || !std::isfinite(grid.eta_min)) {
    throw std::invalid_argument("frequency grid spacing must be positive");
  }
  if (grid.n_bins < 8) throw std::invalid_argument("frequency grid needs at least 8 bins");
}

namespace detail {

Index window_half_width(double sigma, double sample_rate, double truncation) {
  return static_cast<Index>(std::floor(truncation * sigma * sample_rate));
}

ModulationTable::ModulationTable(const FreqGrid& grid, double dt, Index half_width)
    : half_width_(half_width), table_(2 * half_width + 1, grid.n_bins) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (Index d = -half_width; d <= half_width; ++d) {
    const double offset = static_cast<double>(d) * dt;
    for (Index n = 0; n < grid.n_bins; ++n) {
      const double phase = -kTwoPi * grid.eta(n) * offset;
      table_(d + half_width, n) = std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
}

}  // namespace detail

}  // namespace astft
