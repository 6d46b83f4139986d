#include "astft/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace astft {

double ThresholdPolicy::resolve(const Eigen::Ref<const Eigen::RowVectorXd>& magnitudes) const {
  if (mode == Mode::absolute) return value;
  return magnitudes.size() == 0 ? 0.0 : value * magnitudes.maxCoeff();
}

void validate(const ThresholdPolicy& policy) {
  if (!(policy.value > 0.0) || !std::isfinite(policy.value)) {
    throw std::invalid_argument("threshold must be positive");
  }
  if (policy.mode == ThresholdPolicy::Mode::relative && !(policy.value < 1.0)) {
    throw std::invalid_argument("relative threshold must lie in (0, 1)");
  }
}

std::vector<Index> threshold_support(const Eigen::Ref<const Eigen::RowVectorXd>& magnitudes,
                                     const ThresholdPolicy& policy) {
  const double level = policy.resolve(magnitudes);
  std::vector<Index> support;
  for (Index n = 0; n < magnitudes.size(); ++n) {
    if (magnitudes(n) > level) support.push_back(n);
  }
  return support;
}

std::vector<BinInterval> cluster_frame(const std::vector<Index>& support) {
  std::vector<BinInterval> runs;
  for (Index bin : support) {
    if (!runs.empty() && bin == runs.back().hi + 1) {
      runs.back().hi = bin;
    } else {
      runs.push_back({bin, bin});
    }
  }
  return runs;
}

Index interval_argmax(const Eigen::Ref<const Eigen::RowVectorXd>& magnitudes,
                      const BinInterval& interval) {
  Index best = interval.lo;
  for (Index n = interval.lo + 1; n <= interval.hi; ++n) {
    if (magnitudes(n) > magnitudes(best)) best = n;
  }
  return best;
}

namespace {

struct FrameClusters {
  std::vector<BinInterval> intervals;  // non-trend clusters
  std::vector<Index> peaks;
  std::optional<BinInterval> trend;
};

FrameClusters analyse_frame(const Eigen::RowVectorXd& magnitudes, const RidgeOptions& options,
                            std::vector<BinInterval>& all_clusters) {
  all_clusters = cluster_frame(threshold_support(magnitudes, options.threshold));
  FrameClusters out;
  std::size_t first = 0;
  if (options.trend && !all_clusters.empty()) {
    out.trend = all_clusters.front();
    first = 1;
  }
  for (std::size_t c = first; c < all_clusters.size(); ++c) {
    out.intervals.push_back(all_clusters[c]);
    out.peaks.push_back(interval_argmax(magnitudes, all_clusters[c]));
  }
  return out;
}

// K strongest clusters of the seed frame, in frequency order.
std::vector<std::size_t> strongest(const FrameClusters& frame, const Eigen::RowVectorXd& magnitudes,
                                   Index k) {
  std::vector<std::size_t> order(frame.peaks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return magnitudes(frame.peaks[a]) > magnitudes(frame.peaks[b]);
  });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

RidgeSet track_ridges(const TFMatrix& tf, const RidgeOptions& options) {
  validate(options.threshold);
  if (!tf.values.allFinite()) throw std::invalid_argument("TF matrix has non-finite entries");
  const Index frames = tf.frames();
  if (frames == 0) throw std::invalid_argument("empty TF matrix");

  Index zero_bin = -1;
  if (options.trend) {
    zero_bin = tf.grid.nearest_bin(0.0);
    if (tf.grid.eta(zero_bin) != 0.0) {
      throw std::invalid_argument("trend extraction needs a grid that contains 0 Hz");
    }
  }

  const Eigen::MatrixXd magnitudes = tf.values.cwiseAbs();
  std::vector<FrameClusters> analysed(static_cast<std::size_t>(frames));
  RidgeSet ridges;
  ridges.clusters.resize(static_cast<std::size_t>(frames));
  ridges.k_detected.resize(frames);
  for (Index m = 0; m < frames; ++m) {
    const auto um = static_cast<std::size_t>(m);
    analysed[um] = analyse_frame(magnitudes.row(m), options, ridges.clusters[um]);
    ridges.k_detected(m) = static_cast<int>(analysed[um].intervals.size());
  }

  // Seed at the frame of maximal energy that resolves enough clusters.
  const Eigen::VectorXd energy = magnitudes.rowwise().squaredNorm();
  Index seed = -1;
  for (Index m = 0; m < frames; ++m) {
    const Index found = ridges.k_detected(m);
    const bool usable = options.k_expected ? found >= *options.k_expected : found > 0;
    if (usable && (seed < 0 || energy(m) > energy(seed))) seed = m;
  }
  if (seed < 0) throw std::runtime_error("no frame resolves the expected number of ridges");

  const Index k = options.k_expected ? *options.k_expected : ridges.k_detected(seed);
  if (k < 1 && !options.trend) {
    throw std::invalid_argument("at least one component must be tracked");
  }

  ridges.seed_frame = seed;
  ridges.has_trend = options.trend;
  ridges.eta_hat = Eigen::MatrixXd::Zero(frames, k + 1);
  ridges.bins = IndexMatrix::Constant(frames, k + 1, -1);
  ridges.cluster_lo = IndexMatrix::Constant(frames, k + 1, -1);
  ridges.cluster_hi = IndexMatrix::Constant(frames, k + 1, -1);
  ridges.flagged = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(frames, false);

  auto record = [&](Index m, Index l, const BinInterval& interval, Index bin) {
    ridges.bins(m, l) = bin;
    ridges.eta_hat(m, l) = tf.grid.eta(bin);
    ridges.cluster_lo(m, l) = interval.lo;
    ridges.cluster_hi(m, l) = interval.hi;
  };

  for (Index m = 0; m < frames; ++m) {
    if (!options.trend) continue;
    ridges.bins(m, 0) = zero_bin;
    const auto& trend = analysed[static_cast<std::size_t>(m)].trend;
    if (trend) {
      ridges.cluster_lo(m, 0) = trend->lo;
      ridges.cluster_hi(m, 0) = trend->hi;
    } else {
      ridges.flagged(m) = true;
    }
  }

  const FrameClusters& seed_frame = analysed[static_cast<std::size_t>(seed)];
  const std::vector<std::size_t> chosen = strongest(seed_frame, magnitudes.row(seed), k);
  for (Index l = 1; l <= k; ++l) {
    const std::size_t c = chosen[static_cast<std::size_t>(l - 1)];
    record(seed, l, seed_frame.intervals[c], seed_frame.peaks[c]);
  }

  auto follow = [&](Index from, Index to) {
    const FrameClusters& frame = analysed[static_cast<std::size_t>(to)];
    std::vector<std::tuple<double, Index, std::size_t>> pairs;
    for (Index l = 1; l <= k; ++l) {
      for (std::size_t c = 0; c < frame.peaks.size(); ++c) {
        const double distance = std::abs(tf.grid.eta(frame.peaks[c]) - ridges.eta_hat(from, l));
        pairs.emplace_back(distance, l, c);
      }
    }
    std::sort(pairs.begin(), pairs.end());
    std::vector<bool> component_done(static_cast<std::size_t>(k + 1), false);
    std::vector<bool> cluster_used(frame.peaks.size(), false);
    for (const auto& [distance, l, c] : pairs) {
      if (component_done[static_cast<std::size_t>(l)] || cluster_used[c]) continue;
      component_done[static_cast<std::size_t>(l)] = true;
      cluster_used[c] = true;
      record(to, l, frame.intervals[c], frame.peaks[c]);
    }
    for (Index l = 1; l <= k; ++l) {
      if (component_done[static_cast<std::size_t>(l)]) continue;
      ridges.bins(to, l) = ridges.bins(from, l);
      ridges.eta_hat(to, l) = ridges.eta_hat(from, l);
      ridges.flagged(to) = true;
    }
  };

  for (Index m = seed + 1; m < frames; ++m) follow(m - 1, m);
  for (Index m = seed - 1; m >= 0; --m) follow(m + 1, m);
  return ridges;
}

SigmaSeries sigma1_rule(const Eigen::Ref<const Eigen::MatrixXd>& inst_freq, double alpha) {
  if (inst_freq.cols() < 2) throw std::invalid_argument("sigma_1 needs at least two components");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  SigmaSeries out;
  out.source = SigmaSource::sigma1_rule;
  out.values.resize(inst_freq.rows());
  for (Index m = 0; m < inst_freq.rows(); ++m) {
    const Eigen::RowVectorXd gaps =
        inst_freq.row(m).tail(inst_freq.cols() - 1) - inst_freq.row(m).head(inst_freq.cols() - 1);
    const double min_gap = gaps.minCoeff();
    if (!(min_gap > 0.0)) throw std::invalid_argument("IF gaps must be positive");
    out.values(m) = 2.0 * alpha / min_gap;
  }
  return out;
}

}  // namespace astft
