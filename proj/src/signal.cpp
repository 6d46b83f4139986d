#include "astft/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace astft {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double constant_zero(double) { return 0.0; }

}  // namespace

template <typename Scalar>
void validate(const SampledSignal<Scalar>& signal) {
  if (!(signal.sample_rate > 0.0) || !std::isfinite(signal.sample_rate)) {
    throw std::invalid_argument("sample rate must be positive");
  }
  if (signal.size() < kMinSignalLength) {
    throw std::invalid_argument("signal needs at least " + std::to_string(kMinSignalLength) +
                                " samples, got " + std::to_string(signal.size()));
  }
  if (!signal.samples.allFinite()) {
    throw std::invalid_argument("signal contains non-finite samples");
  }
}

AhmModel linear_chirp_model() {
  AhmModel model;
  model.n = 512;
  model.sample_rate = 128.0;
  model.components.push_back(ComponentSpec{
      [](double) { return 1.0; },
      [](double t) { return 9.0 * t + 5.0 * t * t; },
      [](double t) { return 9.0 + 10.0 * t; },
      [](double) { return 10.0; },
      constant_zero,
  });
  return model;
}

AhmModel cosine_if_model() {
  AhmModel model;
  model.n = 1024;
  model.sample_rate = 128.0;
  model.components.push_back(ComponentSpec{
      [](double t) { return std::log(10.0 + std::sqrt(t)); },
      [](double t) { return 16.0 * t + 0.5 * std::cos(4.0 * t); },
      [](double t) { return 16.0 - 2.0 * std::sin(4.0 * t); },
      [](double t) { return -8.0 * std::cos(4.0 * t); },
      [](double t) { return 32.0 * std::sin(4.0 * t); },
  });
  return model;
}

AhmModel two_lfm_model() {
  AhmModel model;
  model.n = 128;
  model.sample_rate = 128.0;
  model.components.push_back(ComponentSpec{
      [](double) { return 1.0; },
      [](double t) { return 10.0 * t + 5.0 * t * t; },
      [](double t) { return 10.0 + 10.0 * t; },
      [](double) { return 10.0; },
      constant_zero,
  });
  model.components.push_back(ComponentSpec{
      [](double) { return 1.0; },
      [](double t) { return 20.0 * t + 9.0 * t * t; },
      [](double t) { return 20.0 + 18.0 * t; },
      [](double) { return 18.0; },
      constant_zero,
  });
  return model;
}

template <typename Scalar>
Synthesized<Scalar> synth_ahm(const AhmModel& model) {
  if (model.components.empty() && !model.has_trend()) {
    throw std::invalid_argument("model needs at least one component or a trend");
  }
  if (!(model.sample_rate > 0.0)) throw std::invalid_argument("sample rate must be positive");
  if (model.n < kMinSignalLength) throw std::invalid_argument("model length below minimum");

  const Index n = model.n;
  const Index cols = model.num_components() + 1;

  Synthesized<Scalar> out;
  out.signal.sample_rate = model.sample_rate;
  out.signal.t0 = model.t0;
  out.signal.samples = Vector<Scalar>::Zero(n);

  GroundTruth& truth = out.truth;
  truth.has_trend = model.has_trend();
  truth.times = out.signal.times();
  truth.amplitude = Eigen::MatrixXd::Zero(n, cols);
  truth.inst_freq = Eigen::MatrixXd::Zero(n, cols);
  truth.chirp_rate = Eigen::MatrixXd::Zero(n, cols);
  truth.components = Eigen::MatrixXcd::Zero(n, cols);

  for (Index m = 0; m < n; ++m) {
    const double t = truth.times(m);
    Scalar value{0.0};
    if (model.has_trend()) {
      const double a0 = model.trend(t);
      truth.amplitude(m, 0) = a0;
      truth.components(m, 0) = Complex(a0, 0.0);
      value += a0;
    }
    double previous_if = 0.0;
    for (Index k = 1; k < cols; ++k) {
      const ComponentSpec& c = model.components[static_cast<std::size_t>(k - 1)];
      const double a = c.amplitude(t);
      const double f = c.phase_d1(t);
      if (!(a > 0.0)) throw std::invalid_argument("component amplitude must be positive");
      if (!(f > 0.0)) throw std::invalid_argument("component IF must be positive");
      if (k > 1 && !(f > previous_if)) {
        throw std::invalid_argument("component IFs must be strictly increasing at t = " +
                                    std::to_string(t));
      }
      previous_if = f;
      const double arg = kTwoPi * c.phase(t);
      const Complex z = a * Complex(std::cos(arg), std::sin(arg));
      truth.amplitude(m, k) = a;
      truth.inst_freq(m, k) = f;
      truth.chirp_rate(m, k) = c.phase_d2 ? c.phase_d2(t) : 0.0;
      truth.components(m, k) = z;
      if constexpr (is_complex_v<Scalar>) {
        value += z;
      } else {
        value += z.real();
      }
    }
    out.signal.samples(m) = value;
  }
  return out;
}

Synthesized<double> gen_linear_chirp() { return synth_ahm<double>(linear_chirp_model()); }
Synthesized<double> gen_cosine_if() { return synth_ahm<double>(cosine_if_model()); }
Synthesized<double> gen_two_lfm() { return synth_ahm<double>(two_lfm_model()); }

template <typename Scalar>
SampledSignal<Scalar> add_noise(const SampledSignal<Scalar>& signal, double snr_db,
                                std::uint64_t seed) {
  if (!signal.samples.allFinite()) throw std::invalid_argument("signal has non-finite samples");
  if (std::isinf(snr_db) && snr_db > 0.0) return signal;
  if (std::isnan(snr_db)) throw std::invalid_argument("SNR must not be NaN");

  const double signal_energy = signal.samples.squaredNorm();
  if (!(signal_energy > 0.0)) throw std::invalid_argument("SNR undefined for an all-zero signal");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector<Scalar> noise(signal.size());
  for (Index m = 0; m < noise.size(); ++m) {
    if constexpr (is_complex_v<Scalar>) {
      const double re = normal(rng);
      const double im = normal(rng);
      noise(m) = Scalar(re, im);
    } else {
      noise(m) = normal(rng);
    }
  }
  const double target_energy = signal_energy / std::pow(10.0, snr_db / 10.0);
  noise *= std::sqrt(target_energy / noise.squaredNorm());

  SampledSignal<Scalar> out = signal;
  out.samples += noise;
  return out;
}

ModelAssumptions estimate_assumptions(const AhmModel& model, double t_lo, double t_hi,
                                      Index points) {
  if (!(t_hi > t_lo) || points < 2) throw std::invalid_argument("invalid assumption range");
  ModelAssumptions out;
  out.dprime = std::numeric_limits<double>::infinity();

  const double h = 1e-6;
  auto amplitude_slope = [h](const Evaluator& a, double t) {
    return (a(t + h) - a(t - h)) / (2.0 * h);
  };

  double min_amp = std::numeric_limits<double>::infinity();
  double max_slope = 0.0;
  for (Index i = 0; i < points; ++i) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    if (model.has_trend()) {
      min_amp = std::min(min_amp, model.trend(t));
      max_slope = std::max(max_slope, std::abs(amplitude_slope(model.trend, t)));
    }
    for (std::size_t k = 0; k < model.components.size(); ++k) {
      const ComponentSpec& c = model.components[k];
      min_amp = std::min(min_amp, c.amplitude(t));
      max_slope = std::max(max_slope, std::abs(amplitude_slope(c.amplitude, t)));
      if (c.phase_d2) out.eps2 = std::max(out.eps2, std::abs(c.phase_d2(t)));
      if (c.phase_d3) out.eps3 = std::max(out.eps3, std::abs(c.phase_d3(t)));
      if (k > 0) {
        out.dprime = std::min(out.dprime, c.phase_d1(t) - model.components[k - 1].phase_d1(t));
      }
    }
  }
  out.eps1 = min_amp > 0.0 ? max_slope / min_amp : std::numeric_limits<double>::infinity();
  // Finite-difference noise on constant amplitudes.
  if (out.eps1 < 1e-8) out.eps1 = 0.0;
  if (model.components.size() < 2) out.dprime = 0.0;
  return out;
}

template void validate(const SampledSignal<double>&);
template void validate(const SampledSignal<Complex>&);
template Synthesized<double> synth_ahm<double>(const AhmModel&);
template Synthesized<Complex> synth_ahm<Complex>(const AhmModel&);
template SampledSignal<double> add_noise(const SampledSignal<double>&, double, std::uint64_t);
template SampledSignal<Complex> add_noise(const SampledSignal<Complex>&, double, std::uint64_t);

}  // namespace astft
