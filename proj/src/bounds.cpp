#include "astft/bounds.hpp"

#include "astft/chirp_rate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace astft {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Flags = Eigen::Array<bool, Eigen::Dynamic, 1>;

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

double value_or_nan(const std::optional<double>& v) { return v ? *v : kNaN; }

// Indices of the components present in truth, in increasing order.
std::vector<Index> present_columns(const GroundTruth& truth) {
  std::vector<Index> cols;
  for (Index l = truth.has_trend ? 0 : 1; l <= truth.num_components(); ++l) cols.push_back(l);
  return cols;
}

double radius_for(const KernelParams& p, double alpha, double tau0, RadiusRule rule) {
  if (rule == RadiusRule::linearized) return chirp_support_radius(p, alpha);
  return chirp_support_radius_exact(p, tau0);
}

void check_inputs(const GroundTruth& truth, const SigmaSeries& sigma) {
  validate(sigma, truth.size());
  if (truth.num_components() < 0 || truth.inst_freq.cols() != truth.amplitude.cols() ||
      truth.chirp_rate.cols() != truth.amplitude.cols()) {
    throw std::invalid_argument("ground truth matrices disagree");
  }
}

}  // namespace

double lambda0(double eps1, double eps2, double sigma) {
  require_nonnegative(eps1, "eps1");
  require_nonnegative(eps2, "eps2");
  require_nonnegative(sigma, "sigma");
  return eps1 * abs_moment(1) * sigma + kPi * eps2 * abs_moment(2) * sigma * sigma;
}

double pi0(double eps1, double eps3, double sigma) {
  require_nonnegative(eps1, "eps1");
  require_nonnegative(eps3, "eps3");
  require_nonnegative(sigma, "sigma");
  return eps1 * abs_moment(1) * sigma + kPi / 3.0 * eps3 * abs_moment(3) * sigma * sigma * sigma;
}

double sinusoidal_error(Index l, const Eigen::Ref<const Eigen::VectorXd>& amplitudes,
                        double alpha, double lambda0) {
  if (l < 0 || l >= amplitudes.size()) throw std::out_of_range("component index");
  double err = amplitudes.sum() * lambda0;
  for (Index k = 0; k < amplitudes.size(); ++k) {
    if (k == l) continue;
    const double d = static_cast<double>(2 * std::abs(l - k) - 1);
    err += amplitudes(k) * gaussian_window_hat(alpha * d);
  }
  return err;
}

Eigen::MatrixXd upsilon(const Eigen::Ref<const Eigen::VectorXd>& radii) {
  const Index n = radii.size();
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    for (Index l = k + 1; l < n; ++l) {
      const double between = l - k > 1 ? radii.segment(k + 1, l - k - 1).sum() : 0.0;
      u(k, l) = u(l, k) = radii(k) + radii(l) + 2.0 * between;
    }
  }
  return u;
}

double chirp_error(Index l, const Eigen::Ref<const Eigen::VectorXd>& amplitudes,
                   const std::vector<KernelParams>& kernels,
                   const Eigen::Ref<const Eigen::MatrixXd>& upsilon_table,
                   const Eigen::Ref<const Eigen::VectorXd>& radii, double pi0) {
  const Index n = amplitudes.size();
  if (static_cast<Index>(kernels.size()) != n || radii.size() != n ||
      upsilon_table.rows() != n || upsilon_table.cols() != n) {
    throw std::invalid_argument("chirp_error inputs disagree in size");
  }
  if (l < 0 || l >= n) throw std::out_of_range("component index");
  double err = amplitudes.sum() * pi0;
  for (Index k = 0; k < n; ++k) {
    if (k == l) continue;
    err += amplitudes(k) *
           chirp_kernel_abs(upsilon_table(k, l) - radii(l), kernels[static_cast<std::size_t>(k)]);
  }
  return err;
}

SinusoidalBounds sinusoidal_bounds(double err, double amplitude, double sigma) {
  require_nonnegative(err, "err");
  if (!(amplitude > 0.0) || !(sigma > 0.0)) {
    throw std::invalid_argument("amplitude and sigma must be positive");
  }
  SinusoidalBounds out;
  if (err < amplitude / 2.0) {
    const double r = gaussian_window_hat_inverse(1.0 - 2.0 * err / amplitude);
    out.bd1 = r / sigma;
    out.bd2 = err + 2.0 * kPi * abs_moment(1) * amplitude * r;
  }
  if (err < amplitude / 4.0) {
    out.bd1_gauss = std::sqrt(2.0) / (sigma * kPi) * std::sqrt(err / amplitude);
    out.bd2_gauss = err + 2.0 * std::sqrt(2.0) * abs_moment(1) * std::sqrt(amplitude * err);
  }
  return out;
}

ChirpBounds chirp_bounds(double chirp_err, double amplitude, const KernelParams& params) {
  require_nonnegative(chirp_err, "Err");
  if (!(amplitude > 0.0) || !(params.sigma > 0.0)) {
    throw std::invalid_argument("amplitude and sigma must be positive");
  }
  const double g0 = chirp_kernel_peak(params);
  const double b2 = 1.0 + params.spread() * params.spread();
  ChirpBounds out;
  if (chirp_err < g0 * amplitude / 2.0) {
    const double r = chirp_kernel_abs_inverse(g0 - 2.0 * chirp_err / amplitude, params);
    out.bd1 = r / params.sigma;
    out.bd2 = chirp_err + 2.0 * kPi * abs_moment(1) * amplitude * r;
  }
  if (chirp_err < g0 * amplitude / 4.0) {
    out.bd1_gauss = std::sqrt(2.0) / (params.sigma * kPi) * std::pow(b2, 0.625) *
                    std::sqrt(chirp_err / amplitude);
    out.bd2_gauss = std::pow(b2, 0.25) * chirp_err + 2.0 * std::sqrt(2.0) * abs_moment(1) *
                                                         std::pow(b2, 0.875) *
                                                         std::sqrt(amplitude * chirp_err);
  }
  return out;
}

Flags check_separation(const SigmaSeries& sigma, const GroundTruth& truth, double tau0,
                       SeparationModel model, RadiusRule rule) {
  check_inputs(truth, sigma);
  if (truth.num_components() < 1) throw std::invalid_argument("K >= 1 required");
  const double alpha = alpha_from_tau0(tau0);
  const auto cols = present_columns(truth);
  Flags ok = Flags::Constant(truth.size(), true);
  for (Index m = 0; m < truth.size(); ++m) {
    const double s = sigma.values(m);
    for (std::size_t j = 1; j < cols.size(); ++j) {
      const Index k = cols[j];
      const Index prev = cols[j - 1];
      const double gap = s * (truth.inst_freq(m, k) - truth.inst_freq(m, prev));
      double need = 2.0 * alpha;
      if (model == SeparationModel::linear_chirp) {
        need = radius_for({s, truth.chirp_rate(m, k)}, alpha, tau0, rule) +
               radius_for({s, truth.chirp_rate(m, prev)}, alpha, tau0, rule);
      }
      if (gap < need) ok(m) = false;
    }
  }
  return ok;
}

ModelAssumptions assumptions_from_truth(const GroundTruth& truth) {
  const Index n = truth.size();
  if (n < 5) throw std::invalid_argument("ground truth needs at least 5 samples");
  if (truth.num_components() < 1) throw std::invalid_argument("K >= 1 required");
  const double dt = (truth.times(n - 1) - truth.times(0)) / static_cast<double>(n - 1);
  ModelAssumptions out;
  out.dprime = std::numeric_limits<double>::infinity();
  double min_amp = std::numeric_limits<double>::infinity();
  double max_slope = 0.0;
  for (Index l : present_columns(truth)) {
    const Eigen::VectorXd a = truth.amplitude.col(l);
    min_amp = std::min(min_amp, a.minCoeff());
    max_slope = std::max(max_slope, five_point_derivative(a, dt).cwiseAbs().maxCoeff());
    if (l == 0) continue;
    const Eigen::VectorXd cr = truth.chirp_rate.col(l);
    out.eps2 = std::max(out.eps2, cr.cwiseAbs().maxCoeff());
    out.eps3 = std::max(out.eps3, five_point_derivative(cr, dt).cwiseAbs().maxCoeff());
    if (l > 1) {
      out.dprime = std::min(out.dprime,
                            (truth.inst_freq.col(l) - truth.inst_freq.col(l - 1)).minCoeff());
    }
  }
  out.eps1 = min_amp > 0.0 ? max_slope / min_amp : std::numeric_limits<double>::infinity();
  if (out.eps1 < 1e-8) out.eps1 = 0.0;
  if (out.eps3 < 1e-8) out.eps3 = 0.0;
  if (truth.num_components() < 2) out.dprime = 0.0;
  return out;
}

Flags ConditionFlags::all() const {
  return theorem1 && threshold1 && separated && non_overlapping && theorem2 && threshold2;
}

BoundReport compute_bounds(const GroundTruth& truth, const SigmaSeries& sigma,
                           const ModelAssumptions& assumptions, const BoundsConfig& config) {
  check_inputs(truth, sigma);
  if (truth.num_components() < 1) throw std::invalid_argument("K >= 1 required");
  validate(WindowSpec{config.tau0, 5.0});
  const Index frames = truth.size();
  if (config.threshold && config.threshold->size() != frames) {
    throw std::invalid_argument("threshold series length must match the signal");
  }

  const double tau0 = config.tau0;
  const double alpha = alpha_from_tau0(tau0);
  const auto cols = present_columns(truth);
  const Index n = static_cast<Index>(cols.size());
  const Index width = truth.num_components() + 1;

  BoundReport r;
  r.times = truth.times;
  r.sigma = sigma.values;
  r.has_trend = truth.has_trend;
  r.alpha = alpha;
  r.tau0 = tau0;
  for (Eigen::VectorXd* v : {&r.mu, &r.total, &r.g0, &r.lambda0, &r.pi0, &r.window1_lo,
                             &r.window1_hi, &r.window2_lo, &r.window2_hi}) {
    v->resize(frames);
  }
  for (Eigen::MatrixXd* mtx :
       {&r.total_others, &r.radius, &r.err, &r.chirp_err, &r.bd1, &r.bd2, &r.bd1_gauss,
        &r.bd2_gauss, &r.chirp_bd1, &r.chirp_bd2, &r.chirp_bd1_gauss, &r.chirp_bd2_gauss}) {
    mtx->setConstant(frames, width, kNaN);
  }
  r.upsilon.reserve(static_cast<std::size_t>(frames));
  r.flags.separated =
      check_separation(sigma, truth, tau0, SeparationModel::sinusoidal, config.radius);
  r.flags.non_overlapping =
      check_separation(sigma, truth, tau0, SeparationModel::linear_chirp, config.radius);
  for (Flags* f : {&r.flags.theorem1, &r.flags.threshold1, &r.flags.theorem2,
                   &r.flags.threshold2}) {
    f->resize(frames);
  }

  Eigen::VectorXd amps(n), radii(n);
  std::vector<KernelParams> kernels(static_cast<std::size_t>(n));
  for (Index m = 0; m < frames; ++m) {
    const double s = sigma.values(m);
    for (Index j = 0; j < n; ++j) {
      const Index l = cols[static_cast<std::size_t>(j)];
      amps(j) = truth.amplitude(m, l);
      if (!(amps(j) > 0.0)) throw std::invalid_argument("ground-truth amplitude must be positive");
      kernels[static_cast<std::size_t>(j)] = KernelParams{s, truth.chirp_rate(m, l)};
      radii(j) = radius_for(kernels[static_cast<std::size_t>(j)], alpha, tau0, config.radius);
    }
    const double mu = amps.minCoeff();
    const double total = amps.sum();
    double g0 = 1.0;
    for (const auto& kp : kernels) g0 = std::min(g0, chirp_kernel_peak(kp));
    const double lam = lambda0(assumptions.eps1, assumptions.eps2, s);
    const double pz = pi0(assumptions.eps1, assumptions.eps3, s);
    r.mu(m) = mu;
    r.total(m) = total;
    r.g0(m) = g0;
    r.lambda0(m) = lam;
    r.pi0(m) = pz;
    r.window1_lo(m) = total * (tau0 + lam);
    r.window1_hi(m) = mu - total * (tau0 + lam);
    r.window2_lo(m) = total * (tau0 + pz);
    r.window2_hi(m) = g0 * mu - total * (tau0 + pz);
    r.upsilon.push_back(upsilon(radii));
    const Eigen::MatrixXd& ups = r.upsilon.back();

    bool chirp_defined = true;
    for (Index j = 0; j < n; ++j) {
      const Index l = cols[static_cast<std::size_t>(j)];
      const KernelParams& kp = kernels[static_cast<std::size_t>(j)];
      r.total_others(m, l) = total - amps(j);
      r.radius(m, l) = radii(j);
      const double e = sinusoidal_error(j, amps, alpha, lam);
      const double ce = chirp_error(j, amps, kernels, ups, radii, pz);
      r.err(m, l) = e;
      r.chirp_err(m, l) = ce;
      const SinusoidalBounds sb = sinusoidal_bounds(e, amps(j), s);
      r.bd1(m, l) = value_or_nan(sb.bd1);
      r.bd2(m, l) = value_or_nan(sb.bd2);
      r.bd1_gauss(m, l) = value_or_nan(sb.bd1_gauss);
      r.bd2_gauss(m, l) = value_or_nan(sb.bd2_gauss);
      const ChirpBounds cb = chirp_bounds(ce, amps(j), kp);
      r.chirp_bd1(m, l) = value_or_nan(cb.bd1);
      r.chirp_bd2(m, l) = value_or_nan(cb.bd2);
      r.chirp_bd1_gauss(m, l) = value_or_nan(cb.bd1_gauss);
      r.chirp_bd2_gauss(m, l) = value_or_nan(cb.bd2_gauss);
      if (!(ce < chirp_kernel_peak(kp) * amps(j) / 2.0)) chirp_defined = false;
    }

    r.flags.theorem1(m) = 2.0 * total * (tau0 + lam) <= mu;
    r.flags.theorem2(m) = chirp_defined && 2.0 * total * (tau0 + pz) <= g0 * mu;
    if (config.threshold) {
      const double e1 = (*config.threshold)(m);
      r.flags.threshold1(m) = r.window1_lo(m) <= e1 && e1 <= r.window1_hi(m);
      r.flags.threshold2(m) = r.window2_lo(m) <= e1 && e1 <= r.window2_hi(m);
    } else {
      r.flags.threshold1(m) = r.window1_lo(m) <= r.window1_hi(m);
      r.flags.threshold2(m) = r.window2_lo(m) <= r.window2_hi(m);
    }
  }
  return r;
}

std::optional<ThresholdWindow> common_threshold_window(const BoundReport& report, Index begin,
                                                       Index end, bool theorem1, bool theorem2) {
  if (begin < 0 || end > report.frames() || begin >= end) {
    throw std::out_of_range("frame range");
  }
  ThresholdWindow w{0.0, std::numeric_limits<double>::infinity()};
  for (Index m = begin; m < end; ++m) {
    if (theorem1) {
      w.lo = std::max(w.lo, report.window1_lo(m));
      w.hi = std::min(w.hi, report.window1_hi(m));
    }
    if (theorem2) {
      w.lo = std::max(w.lo, report.window2_lo(m));
      w.hi = std::min(w.hi, report.window2_hi(m));
    }
  }
  if (!theorem1 && !theorem2) return std::nullopt;
  if (!(w.lo <= w.hi)) return std::nullopt;
  return w;
}

}  // namespace astft
