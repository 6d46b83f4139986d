#pragma once

#include "astft/signal.hpp"
#include "astft/stft.hpp"
#include "astft/window.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace astft {

// Error-bound quantities of the sinusoidal and linear-chirp local models,
// evaluated from ground truth. Undefined bounds are NaN, never clamped.

// eps1 I_1 sigma + pi eps2 I_2 sigma^2
double lambda0(double eps1, double eps2, double sigma);
// eps1 I_1 sigma + (pi / 3) eps3 I_3 sigma^3
double pi0(double eps1, double eps3, double sigma);

// Amplitudes are the components present at one instant, ordered by index
// (trend first when there is one); l is a position in that vector.

// M lambda0 + sum_{k != l} A_k g^(alpha (2|l - k| - 1))
double sinusoidal_error(Index l, const Eigen::Ref<const Eigen::VectorXd>& amplitudes,
                        double alpha, double lambda0);

// Separation widths between zones: radii_k + radii_l + 2 * (radii strictly between).
Eigen::MatrixXd upsilon(const Eigen::Ref<const Eigen::VectorXd>& radii);

// M Pi0 + sum_{k != l} A_k |G_k(Upsilon_{k,l} - radii_l)|
double chirp_error(Index l, const Eigen::Ref<const Eigen::VectorXd>& amplitudes,
                   const std::vector<KernelParams>& kernels,
                   const Eigen::Ref<const Eigen::MatrixXd>& upsilon_table,
                   const Eigen::Ref<const Eigen::VectorXd>& radii, double pi0);

struct SinusoidalBounds {
  std::optional<double> bd1;        // IF error, Hz; needs err < A/2
  std::optional<double> bd2;        // |V(eta) - x_l|
  std::optional<double> bd1_gauss;  // Gaussian simplification; needs err < A/4
  std::optional<double> bd2_gauss;
};

struct ChirpBounds {
  std::optional<double> bd1;        // needs Err < |G(0)| A / 2
  std::optional<double> bd2;        // |V(eta) - G(0) x_l|
  std::optional<double> bd1_gauss;  // needs Err < |G(0)| A / 4
  std::optional<double> bd2_gauss;  // |x_l - sqrt(1 - i b) V(eta)|
};

SinusoidalBounds sinusoidal_bounds(double err, double amplitude, double sigma);
ChirpBounds chirp_bounds(double chirp_err, double amplitude, const KernelParams& params);

enum class RadiusRule {
  linearized,  // alpha (1 + 2 pi |phi''| sigma^2)
  exact,       // xi_k with |G_k(xi_k)| = tau0
};

enum class SeparationModel { sinusoidal, linear_chirp };

// Per-frame well-separation: sigma (phi'_k - phi'_{k-1}) >= 2 alpha for the
// sinusoidal model, >= alpha_k + alpha_{k-1} for the chirp model. The trend
// (IF 0) takes part when truth has one.
Eigen::Array<bool, Eigen::Dynamic, 1> check_separation(const SigmaSeries& sigma,
                                                       const GroundTruth& truth, double tau0,
                                                       SeparationModel model,
                                                       RadiusRule rule = RadiusRule::linearized);

// Slow-variation constants from sampled ground truth (five-point
// derivatives), for inputs that come without an analytic model.
ModelAssumptions assumptions_from_truth(const GroundTruth& truth);

struct BoundsConfig {
  double tau0 = 0.2;
  RadiusRule radius = RadiusRule::linearized;
  std::optional<Eigen::VectorXd> threshold;  // eps~_1 per frame
};

struct ConditionFlags {
  Eigen::Array<bool, Eigen::Dynamic, 1> theorem1;         // 2 M (tau0 + lambda0) <= mu
  Eigen::Array<bool, Eigen::Dynamic, 1> threshold1;       // eps~_1 inside the theorem-1 window
  Eigen::Array<bool, Eigen::Dynamic, 1> separated;        // sinusoidal zones disjoint
  Eigen::Array<bool, Eigen::Dynamic, 1> non_overlapping;  // chirp zones disjoint
  Eigen::Array<bool, Eigen::Dynamic, 1> theorem2;  // Err_l < |G_l(0)| A_l / 2, 2M(tau0+Pi0) <= g0 mu
  Eigen::Array<bool, Eigen::Dynamic, 1> threshold2;  // eps~_1 inside the theorem-2 window

  // When no threshold is given, threshold1/threshold2 report whether the
  // window is non-empty.
  Eigen::Array<bool, Eigen::Dynamic, 1> all() const;
};

struct BoundReport {
  Eigen::VectorXd times;
  Eigen::VectorXd sigma;
  Eigen::VectorXd mu, total, g0;  // min A_k, M = sum A_k, min(1, |G_k(0)|)
  Eigen::VectorXd lambda0, pi0;
  Eigen::VectorXd window1_lo, window1_hi, window2_lo, window2_hi;  // feasible eps~_1

  // frames x (K + 1); column 0 is the trend, NaN when there is none.
  Eigen::MatrixXd total_others;  // M_l
  Eigen::MatrixXd radius;        // alpha_l
  Eigen::MatrixXd err, chirp_err;
  Eigen::MatrixXd bd1, bd2, bd1_gauss, bd2_gauss;
  Eigen::MatrixXd chirp_bd1, chirp_bd2, chirp_bd1_gauss, chirp_bd2_gauss;
  std::vector<Eigen::MatrixXd> upsilon;  // per frame, over the present components

  ConditionFlags flags;
  bool has_trend = false;
  double alpha = 0.0;
  double tau0 = 0.0;

  Index frames() const { return times.size(); }
  Index num_components() const { return err.cols() - 1; }
};

BoundReport compute_bounds(const GroundTruth& truth, const SigmaSeries& sigma,
                           const ModelAssumptions& assumptions, const BoundsConfig& config = {});

struct ThresholdWindow {
  double lo = 0.0;
  double hi = 0.0;
  double midpoint() const { return 0.5 * (lo + hi); }
};

// Intersection over frames [begin, end) of the theorem windows selected;
// empty when the intersection is.
std::optional<ThresholdWindow> common_threshold_window(const BoundReport& report, Index begin,
                                                       Index end, bool theorem1, bool theorem2);

}  // namespace astft
