#pragma once

#include "astft/ridge.hpp"
#include "astft/stft.hpp"

#include <Eigen/Dense>

#include <string_view>

namespace astft {

enum class RecoveryModel { sinusoidal, linear_chirp };
enum class ChirpRateSource { none, estimated, ground_truth };

std::string_view to_string(RecoveryModel model);
std::string_view to_string(ChirpRateSource source);

// Same column layout as RidgeSet: column 0 is the trend.
struct ComponentRecovery {
  Eigen::MatrixXcd x_hat;       // real inputs keep a zero imaginary part
  Eigen::MatrixXd amplitude;    // instantaneous amplitude estimate
  Eigen::MatrixXd chirp_rate;   // rate used by the linear-chirp correction
  RecoveryModel model = RecoveryModel::sinusoidal;
  ChirpRateSource source = ChirpRateSource::none;
  Eigen::Array<bool, Eigen::Dynamic, 1> flagged;
  bool has_trend = false;

  Index frames() const { return x_hat.rows(); }
  Index num_components() const { return x_hat.cols() - 1; }
};

// x_l(t) ~ V(t, eta_l); 2 Re V for real inputs (Re V for the trend).
ComponentRecovery recover_sinusoidal(const TFMatrix& tf, const RidgeSet& ridges);

// x_l(t) ~ V(t, eta_l) / G_l(0) = sqrt(1 - i 2 pi phi''_l sigma^2) V(t, eta_l);
// 2 Re of that for real inputs. chirp_rates has one column per ridge column.
ComponentRecovery recover_linear_chirp(const TFMatrix& tf, const RidgeSet& ridges,
                                       const Eigen::Ref<const Eigen::MatrixXd>& chirp_rates,
                                       ChirpRateSource source);

// |V(t, eta_l)|, doubled for the oscillatory components of real inputs.
Eigen::MatrixXd estimate_amplitude(const TFMatrix& tf, const RidgeSet& ridges);

}  // namespace astft
