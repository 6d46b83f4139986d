#pragma once

#include "astft/stft.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace astft {

using IndexMatrix = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic>;

// Support threshold on |V(t, .)|: an absolute level, or a fraction of the
// frame maximum.
struct ThresholdPolicy {
  enum class Mode { absolute, relative };
  Mode mode = Mode::relative;
  double value = 0.3;

  static ThresholdPolicy absolute(double level) { return {Mode::absolute, level}; }
  static ThresholdPolicy relative(double ratio) { return {Mode::relative, ratio}; }

  // Threshold level for one frame of magnitudes.
  double resolve(const Eigen::Ref<const Eigen::RowVectorXd>& magnitudes) const;
};

void validate(const ThresholdPolicy& policy);

// Inclusive bin range [lo, hi].
struct BinInterval {
  Index lo = 0;
  Index hi = 0;

  Index width() const { return hi - lo + 1; }
  bool contains(Index bin) const { return bin >= lo && bin <= hi; }
  friend bool operator==(const BinInterval&, const BinInterval&) = default;
};

// Bins with |V| strictly above the resolved threshold, ascending.
std::vector<Index> threshold_support(const Eigen::Ref<const Eigen::RowVectorXd>& magnitudes,
                                     const ThresholdPolicy& policy);

// Maximal runs of consecutive bins, ordered by frequency. Input must be sorted.
std::vector<BinInterval> cluster_frame(const std::vector<Index>& support);

// First bin of the largest magnitude inside the interval (ties go low).
Index interval_argmax(const Eigen::Ref<const Eigen::RowVectorXd>& magnitudes,
                      const BinInterval& interval);

struct RidgeOptions {
  ThresholdPolicy threshold;
  std::optional<Index> k_expected;  // empty: take the count at the seed frame
  bool trend = false;               // lowest cluster is the trend, eta_0 = 0
};

// Column l is component l; column 0 is the trend (eta 0, bin of 0 Hz) or
// unused (-1 bins) when no trend was declared.
struct RidgeSet {
  Eigen::MatrixXd eta_hat;
  IndexMatrix bins;
  IndexMatrix cluster_lo;  // -1 when the frame carried the previous estimate
  IndexMatrix cluster_hi;
  std::vector<std::vector<BinInterval>> clusters;  // every cluster per frame
  Eigen::VectorXi k_detected;                      // non-trend clusters per frame
  Eigen::Array<bool, Eigen::Dynamic, 1> flagged;   // a component was carried forward
  Index seed_frame = 0;
  bool has_trend = false;

  Index frames() const { return eta_hat.rows(); }
  Index num_components() const { return eta_hat.cols() - 1; }
};

// Per-frame argmax ridges, tracked from the frame of maximal energy outwards by
// greedy nearest-frequency matching against the previous frame's estimates.
RidgeSet track_ridges(const TFMatrix& tf, const RidgeOptions& options);

// sigma_1(t) = 2 alpha / min_k (phi'_k(t) - phi'_{k-1}(t)), k = 2..K.
// inst_freq holds one column per component (no trend column).
SigmaSeries sigma1_rule(const Eigen::Ref<const Eigen::MatrixXd>& inst_freq, double alpha);

}  // namespace astft
