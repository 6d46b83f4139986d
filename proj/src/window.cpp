#include "astft/window.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace astft {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrtTwoPi = 0.3989422804014327;

}  // namespace

void validate(const WindowSpec& spec) {
  if (!(spec.tau0 > 0.0 && spec.tau0 < 1.0)) {
    throw std::invalid_argument("tau0 must lie in (0, 1)");
  }
  if (!(spec.truncation >= 3.0)) {
    throw std::invalid_argument("window truncation must be at least 3 sigma");
  }
}

double KernelParams::spread() const { return 2.0 * kPi * lambda(); }

double gaussian_window(double tau) { return kInvSqrtTwoPi * std::exp(-0.5 * tau * tau); }

double gaussian_window_hat(double xi) { return std::exp(-2.0 * kPi * kPi * xi * xi); }

double gaussian_window_hat_inverse(double y) {
  if (!(y > 0.0 && y <= 1.0)) throw std::invalid_argument("|g^|^{-1} defined on (0, 1]");
  return std::sqrt(-std::log(y)) / (kPi * std::numbers::sqrt2);
}

double alpha_from_tau0(double tau0) {
  if (!(tau0 > 0.0 && tau0 < 1.0)) throw std::invalid_argument("tau0 must lie in (0, 1)");
  return std::sqrt(2.0 * std::log(1.0 / tau0)) / (2.0 * kPi);
}

std::complex<double> chirped_window_transform(double xi, double lambda,
                                              const QuadratureOptions& quad) {
  if (!(quad.step > 0.0) || !(quad.half_width > 0.0)) {
    throw std::invalid_argument("invalid quadrature options");
  }
  const auto intervals = static_cast<long>(std::ceil(2.0 * quad.half_width / quad.step));
  const double h = 2.0 * quad.half_width / static_cast<double>(intervals);
  std::complex<double> sum{0.0, 0.0};
  for (long j = 0; j <= intervals; ++j) {
    const double tau = -quad.half_width + h * static_cast<double>(j);
    const double phase = -2.0 * kPi * xi * tau - kPi * lambda * tau * tau;
    const double weight = (j == 0 || j == intervals) ? 0.5 : 1.0;
    sum += weight * gaussian_window(tau) * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return h * sum;
}

std::complex<double> chirp_kernel(double xi, const KernelParams& params) {
  const double b = params.spread();
  const std::complex<double> root = std::sqrt(std::complex<double>(1.0, -b));
  const double scale = -2.0 * kPi * kPi * xi * xi / (1.0 + b * b);
  return std::exp(std::complex<double>(scale, scale * b)) / root;
}

std::complex<double> chirp_kernel_quadrature(double xi, const KernelParams& params,
                                             const QuadratureOptions& quad) {
  return chirped_window_transform(xi, -params.lambda(), quad);
}

double chirp_kernel_peak(const KernelParams& params) {
  const double b = params.spread();
  return std::pow(1.0 + b * b, -0.25);
}

double chirp_kernel_abs(double xi, const KernelParams& params) {
  const double b = params.spread();
  return chirp_kernel_peak(params) * std::exp(-2.0 * kPi * kPi * xi * xi / (1.0 + b * b));
}

double chirp_kernel_abs_inverse(double y, const KernelParams& params) {
  const double peak = chirp_kernel_peak(params);
  if (!(y > 0.0 && y <= peak)) throw std::invalid_argument("|G|^{-1} defined on (0, |G(0)|]");
  return std::sqrt(-std::log(y / peak)) / (kPi * std::numbers::sqrt2 * peak * peak);
}

std::complex<double> chirp_correction(const KernelParams& params) {
  return std::sqrt(std::complex<double>(1.0, -params.spread()));
}

double chirp_support_radius(const KernelParams& params, double alpha) {
  return alpha * (1.0 + 2.0 * kPi * std::abs(params.lambda()));
}

double chirp_support_radius_exact(const KernelParams& params, double tau0) {
  if (!(tau0 > 0.0 && tau0 < 1.0)) throw std::invalid_argument("tau0 must lie in (0, 1)");
  const double b = params.spread();
  const double q = 1.0 + b * b;
  const double radicand = 2.0 * std::log(1.0 / tau0) - 0.5 * std::log(q);
  if (radicand < 0.0) {
    throw std::invalid_argument("|G(0)| already below tau0; no support radius");
  }
  return std::sqrt(q) * std::sqrt(radicand) / (2.0 * kPi);
}

double abs_moment(int n) {
  switch (n) {
    case 1:
      return std::sqrt(2.0 / kPi);
    case 2:
      return 1.0;
    case 3:
      return 2.0 * std::sqrt(2.0 / kPi);
    default:
      throw std::invalid_argument("absolute moment available for n = 1, 2, 3");
  }
}

}  // namespace astft
