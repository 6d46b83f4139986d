#pragma once

#include "astft/signal.hpp"
#include "astft/window.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace astft {

enum class SigmaSource { constant, user_file, sigma1_rule };

// Per-sample window width sigma(t_m), seconds.
struct SigmaSeries {
  Eigen::VectorXd values;
  SigmaSource source = SigmaSource::constant;

  static SigmaSeries constant(Index n, double sigma) {
    return {Eigen::VectorXd::Constant(n, sigma), SigmaSource::constant};
  }
  Index size() const { return values.size(); }
};

void validate(const SigmaSeries& sigma, Index expected_length);

// eta_n = eta_min + n * delta_eta, n = 0 .. n_bins - 1.
struct FreqGrid {
  double eta_min = 0.0;
  double delta_eta = 1.0;
  Index n_bins = 0;

  double eta(Index n) const { return eta_min + delta_eta * static_cast<double>(n); }
  Eigen::VectorXd etas() const;
  // Bin whose frequency is closest to eta (clamped to the grid).
  Index nearest_bin(double eta) const;

  // delta = rate / (F N), bins cover (0, rate/2]; with include_zero the grid
  // starts at 0 Hz instead (needed when a trend is recovered).
  static FreqGrid oversampled(double sample_rate, Index n, int oversampling = 4,
                              bool include_zero = false);
};

void validate(const FreqGrid& grid);

// V(t_m, eta_n): rows are frames, columns are bins.
struct TFMatrix {
  Eigen::MatrixXcd values;
  FreqGrid grid;
  SigmaSeries sigma;
  Eigen::VectorXd times;
  double sample_rate = 1.0;
  bool real_input = false;

  Index frames() const { return values.rows(); }
  Index bins() const { return values.cols(); }
};

namespace detail {

// Modulation table E(d, n) = e^{-i 2 pi eta_n d dt} for offsets |d| <= half_width.
class ModulationTable {
 public:
  ModulationTable(const FreqGrid& grid, double dt, Index half_width);

  Index half_width() const { return half_width_; }
  auto row(Index offset) const { return table_.row(offset + half_width_); }

 private:
  Index half_width_;
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> table_;
};

Index window_half_width(double sigma, double sample_rate, double truncation);

// One analysis frame. Summation runs over offsets in ascending order so that
// stft_frame and stft_all agree bit for bit.
template <typename Scalar>
void accumulate_frame(const Vector<Scalar>& x, Index m, double sigma, double dt,
                      double truncation, const ModulationTable& table,
                      Eigen::RowVectorXcd& out) {
  const Index n = x.size();
  const Index h = std::min(window_half_width(sigma, 1.0 / dt, truncation), table.half_width());
  out.setZero();
  for (Index d = -h; d <= h; ++d) {
    const Index j = m + d;
    if (j < 0 || j >= n) continue;
    const double tau = static_cast<double>(d) * dt / sigma;
    const double weight = dt * gaussian_window(tau) / sigma;
    out.noalias() += (weight * x(j)) * table.row(d);
  }
}

}  // namespace detail

// Riemann-sum STFT of one frame with window width sigma_m; samples outside the
// record count as zero.
template <typename Scalar>
Eigen::RowVectorXcd stft_frame(const SampledSignal<Scalar>& signal, Index m, double sigma_m,
                               const FreqGrid& grid, double truncation = 5.0) {
  if (!(sigma_m > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (m < 0 || m >= signal.size()) throw std::out_of_range("frame index out of range");
  validate(grid);
  const double dt = signal.dt();
  const Index h = detail::window_half_width(sigma_m, signal.sample_rate, truncation);
  const detail::ModulationTable table(grid, dt, h);
  Eigen::RowVectorXcd row(grid.n_bins);
  detail::accumulate_frame(signal.samples, m, sigma_m, dt, truncation, table, row);
  return row;
}

template <typename Scalar>
TFMatrix stft_all(const SampledSignal<Scalar>& signal, const SigmaSeries& sigma,
                  const FreqGrid& grid, double truncation = 5.0) {
  validate(sigma, signal.size());
  validate(grid);
  const double dt = signal.dt();
  const Index h = detail::window_half_width(sigma.values.maxCoeff(), signal.sample_rate,
                                            truncation);
  const detail::ModulationTable table(grid, dt, h);

  TFMatrix tf;
  tf.values.resize(signal.size(), grid.n_bins);
  tf.grid = grid;
  tf.sigma = sigma;
  tf.times = signal.times();
  tf.sample_rate = signal.sample_rate;
  tf.real_input = !is_complex_v<Scalar>;
  Eigen::RowVectorXcd row(grid.n_bins);
  for (Index m = 0; m < signal.size(); ++m) {
    detail::accumulate_frame(signal.samples, m, sigma.values(m), dt, truncation, table, row);
    tf.values.row(m) = row;
  }
  return tf;
}

}  // namespace astft
