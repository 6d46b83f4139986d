#pragma once

#include <complex>

namespace astft {

// Gaussian window g(t) = e^{-t^2/2} / sqrt(2 pi) and the chirp-modulated
// kernels built from it. Only the Gaussian ships: every closed form below is
// its specialization.

struct WindowSpec {
  double tau0 = 0.2;        // essential-support threshold, in (0, 1)
  double truncation = 5.0;  // window treated as zero beyond truncation * sigma
};

// Throws std::invalid_argument unless 0 < tau0 < 1 and truncation >= 3.
void validate(const WindowSpec& spec);

// Window width sigma(t) and local chirp rate phi''(t) at one instant.
struct KernelParams {
  double sigma = 1.0;       // seconds
  double chirp_rate = 0.0;  // Hz/s

  // Dimensionless product phi'' sigma^2.
  double lambda() const { return chirp_rate * sigma * sigma; }
  // 2 pi phi'' sigma^2, the quantity every closed form below is written in.
  double spread() const;
};

struct QuadratureOptions {
  double half_width = 8.0;
  double step = 1e-3;
};

double gaussian_window(double tau);
double gaussian_window_hat(double xi);

// Inverse of |g^| on (0, 1]: sqrt(-ln y) / (pi sqrt 2).
double gaussian_window_hat_inverse(double y);

// Radius alpha with g^(alpha) = tau0.
double alpha_from_tau0(double tau0);

// Trapezoid quadrature of  int g(tau) e^{-i 2 pi xi tau - i pi lambda tau^2} dtau.
std::complex<double> chirped_window_transform(double xi, double lambda,
                                              const QuadratureOptions& quad = {});

// Fourier transform of e^{i pi sigma^2 phi'' tau^2} g(tau), closed form:
// (1 - i b)^{-1/2} exp(-2 pi^2 xi^2 (1 + i b) / (1 + b^2)), b = 2 pi phi'' sigma^2,
// with the square root taken in the quadrant of 1 - i b.
std::complex<double> chirp_kernel(double xi, const KernelParams& params);

// The same kernel by direct quadrature; the independent check on chirp_kernel.
std::complex<double> chirp_kernel_quadrature(double xi, const KernelParams& params,
                                             const QuadratureOptions& quad = {});

// |G(xi)| and |G(0)| = (1 + b^2)^{-1/4}.
double chirp_kernel_abs(double xi, const KernelParams& params);
double chirp_kernel_peak(const KernelParams& params);

// xi >= 0 with |G(xi)| = y, for 0 < y <= |G(0)|.
double chirp_kernel_abs_inverse(double y, const KernelParams& params);

// Linear-chirp correction sqrt(1 - i b) = 1 / G(0), same-quadrant root.
std::complex<double> chirp_correction(const KernelParams& params);

// Support radius alpha (1 + 2 pi |phi''| sigma^2); always >= the exact radius.
double chirp_support_radius(const KernelParams& params, double alpha);

// Exact radius xi_k with |G(xi_k)| = tau0. Requires tau0 (1 + b^2)^{1/4} <= 1.
double chirp_support_radius_exact(const KernelParams& params, double tau0);

// I_n = int |tau^n g(tau)| dtau for n in {1, 2, 3}.
double abs_moment(int n);

}  // namespace astft
