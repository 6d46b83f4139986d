#include "astft/recovery.hpp"

#include "astft/window.hpp"

#include <stdexcept>

namespace astft {

std::string_view to_string(RecoveryModel model) {
  return model == RecoveryModel::sinusoidal ? "sinusoidal" : "linear_chirp";
}

std::string_view to_string(ChirpRateSource source) {
  switch (source) {
    case ChirpRateSource::estimated:
      return "estimated";
    case ChirpRateSource::ground_truth:
      return "ground_truth";
    case ChirpRateSource::none:
      break;
  }
  return "none";
}

namespace {

void check_alignment(const TFMatrix& tf, const RidgeSet& ridges) {
  if (ridges.frames() != tf.frames()) {
    throw std::invalid_argument("ridges do not match the TF matrix");
  }
  if ((ridges.bins.array() >= tf.bins()).any()) {
    throw std::invalid_argument("ridge bin outside the TF grid");
  }
}

bool missing(const RidgeSet& ridges, Index m, Index l) {
  if (l == 0 && !ridges.has_trend) return false;
  return ridges.cluster_lo(m, l) < 0;
}

// Real inputs: oscillatory components are 2 Re, the trend is Re.
Complex to_output(const TFMatrix& tf, Index l, Complex value) {
  if (!tf.real_input) return value;
  return {l == 0 ? value.real() : 2.0 * value.real(), 0.0};
}

template <typename Correction>
ComponentRecovery recover(const TFMatrix& tf, const RidgeSet& ridges, Correction&& correction) {
  check_alignment(tf, ridges);
  const Index frames = tf.frames();
  const Index cols = ridges.eta_hat.cols();

  ComponentRecovery out;
  out.has_trend = ridges.has_trend;
  out.flagged = ridges.flagged;
  out.x_hat = Eigen::MatrixXcd::Zero(frames, cols);
  out.amplitude = estimate_amplitude(tf, ridges);
  for (Index l = ridges.has_trend ? 0 : 1; l < cols; ++l) {
    for (Index m = 0; m < frames; ++m) {
      if (m > 0 && missing(ridges, m, l)) {
        out.x_hat(m, l) = out.x_hat(m - 1, l);
        continue;
      }
      const Complex v = tf.values(m, ridges.bins(m, l));
      out.x_hat(m, l) = to_output(tf, l, correction(m, l) * v);
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd estimate_amplitude(const TFMatrix& tf, const RidgeSet& ridges) {
  check_alignment(tf, ridges);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(tf.frames(), ridges.eta_hat.cols());
  for (Index l = ridges.has_trend ? 0 : 1; l < out.cols(); ++l) {
    const double scale = (tf.real_input && l > 0) ? 2.0 : 1.0;
    for (Index m = 0; m < out.rows(); ++m) {
      out(m, l) = scale * std::abs(tf.values(m, ridges.bins(m, l)));
    }
  }
  return out;
}

ComponentRecovery recover_sinusoidal(const TFMatrix& tf, const RidgeSet& ridges) {
  ComponentRecovery out = recover(tf, ridges, [](Index, Index) { return Complex(1.0, 0.0); });
  out.model = RecoveryModel::sinusoidal;
  out.source = ChirpRateSource::none;
  out.chirp_rate = Eigen::MatrixXd::Zero(tf.frames(), ridges.eta_hat.cols());
  return out;
}

ComponentRecovery recover_linear_chirp(const TFMatrix& tf, const RidgeSet& ridges,
                                       const Eigen::Ref<const Eigen::MatrixXd>& chirp_rates,
                                       ChirpRateSource source) {
  if (chirp_rates.rows() != tf.frames() || chirp_rates.cols() != ridges.eta_hat.cols()) {
    throw std::invalid_argument("chirp-rate matrix must be frames x (K + 1)");
  }
  if (!chirp_rates.allFinite()) throw std::invalid_argument("chirp rates must be finite");
  ComponentRecovery out = recover(tf, ridges, [&](Index m, Index l) {
    if (l == 0) return Complex(1.0, 0.0);
    return chirp_correction(KernelParams{tf.sigma.values(m), chirp_rates(m, l)});
  });
  out.model = RecoveryModel::linear_chirp;
  out.source = source;
  out.chirp_rate = chirp_rates;
  out.chirp_rate.col(0).setZero();
  return out;
}

}  // namespace astft
