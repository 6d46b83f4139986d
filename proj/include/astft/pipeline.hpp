#pragma once

#include "astft/chirp_rate.hpp"
#include "astft/recovery.hpp"
#include "astft/ridge.hpp"
#include "astft/signal.hpp"
#include "astft/stft.hpp"
#include "astft/window.hpp"

#include <optional>
#include <stdexcept>

namespace astft {

struct SeparationConfig {
  WindowSpec window;
  int oversampling = 4;
  ThresholdPolicy threshold;
  std::optional<Index> k_expected;
  bool trend = false;
};

void validate(const SeparationConfig& config);

// Everything one separation run produces. lc_true is present only when
// ground truth was handed in.
struct Separation {
  TFMatrix tf;
  RidgeSet ridges;
  Eigen::MatrixXd chirp_rate;  // estimated r~, frames x (K + 1), trend column 0
  ComponentRecovery si;
  ComponentRecovery lc;
  std::optional<ComponentRecovery> lc_true;
};

// Five-point chirp-rate estimate for every oscillatory ridge column.
Eigen::MatrixXd estimate_chirp_rates(const RidgeSet& ridges, double dt);

template <typename Scalar>
Separation separate(const SampledSignal<Scalar>& signal, const SigmaSeries& sigma,
                    const SeparationConfig& config, const GroundTruth* truth = nullptr) {
  validate(signal);
  validate(config);
  Separation out;
  const FreqGrid grid =
      FreqGrid::oversampled(signal.sample_rate, signal.size(), config.oversampling, config.trend);
  out.tf = stft_all(signal, sigma, grid, config.window.truncation);
  out.ridges = track_ridges(out.tf, RidgeOptions{config.threshold, config.k_expected, config.trend});
  out.chirp_rate = estimate_chirp_rates(out.ridges, signal.dt());
  out.si = recover_sinusoidal(out.tf, out.ridges);
  out.lc = recover_linear_chirp(out.tf, out.ridges, out.chirp_rate, ChirpRateSource::estimated);
  if (truth) {
    if (truth->size() != signal.size() || truth->chirp_rate.cols() != out.chirp_rate.cols()) {
      throw std::invalid_argument("ground truth does not match the separation");
    }
    out.lc_true = recover_linear_chirp(out.tf, out.ridges, truth->chirp_rate,
                                       ChirpRateSource::ground_truth);
  }
  return out;
}

}  // namespace astft
