#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace astft {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
inline constexpr bool is_complex_v = false;
template <typename T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

// Uniformly sampled record. Real signals keep real storage; the complex
// harmonic model is only recovered downstream.
template <typename Scalar>
struct SampledSignal {
  Vector<Scalar> samples;
  double sample_rate = 1.0;
  double t0 = 0.0;

  Index size() const { return samples.size(); }
  double dt() const { return 1.0 / sample_rate; }
  double time(Index m) const { return t0 + static_cast<double>(m) / sample_rate; }
  Eigen::VectorXd times() const {
    Eigen::VectorXd t(size());
    for (Index m = 0; m < size(); ++m) t(m) = time(m);
    return t;
  }
};

using RealSignal = SampledSignal<double>;
using ComplexSignal = SampledSignal<Complex>;

inline constexpr Index kMinSignalLength = 16;

// Throws std::invalid_argument on rate <= 0, length < 16 or non-finite samples.
template <typename Scalar>
void validate(const SampledSignal<Scalar>& signal);

using Evaluator = std::function<double(double)>;

// One AHM component A(t) e^{i 2 pi phi(t)}; phase in cycles.
struct ComponentSpec {
  Evaluator amplitude;
  Evaluator phase;
  Evaluator phase_d1;  // instantaneous frequency, Hz
  Evaluator phase_d2;  // chirp rate, Hz/s
  Evaluator phase_d3;  // optional, Hz/s^2
};

struct AhmModel {
  std::vector<ComponentSpec> components;
  Evaluator trend;  // empty when the model has no trend
  Index n = 0;
  double sample_rate = 1.0;
  double t0 = 0.0;

  bool has_trend() const { return static_cast<bool>(trend); }
  Index num_components() const { return static_cast<Index>(components.size()); }
};

// Column l of every matrix is component l; column 0 is the trend
// (zero IF, zero chirp rate) and is all zeros when the model has none.
struct GroundTruth {
  Eigen::VectorXd times;
  Eigen::MatrixXd amplitude;
  Eigen::MatrixXd inst_freq;
  Eigen::MatrixXd chirp_rate;
  Eigen::MatrixXcd components;  // A_l e^{i 2 pi phi_l}; trend stored as A_0
  bool has_trend = false;

  Index size() const { return times.size(); }
  Index num_components() const { return amplitude.cols() - 1; }
};

struct ModelAssumptions {
  double eps1 = 0.0;    // relative amplitude variation, 1/s
  double eps2 = 0.0;    // sup |phi''|, Hz/s
  double eps3 = 0.0;    // sup |phi'''|, Hz/s^2
  double dprime = 0.0;  // minimal IF gap, Hz
};

template <typename Scalar>
struct Synthesized {
  SampledSignal<Scalar> signal;
  GroundTruth truth;
};

// cos(2 pi (9t + 5t^2)) on [0,4), N = 512 at 128 Hz.
AhmModel linear_chirp_model();
// ln(10 + sqrt t) cos(2 pi (16t + 0.5 cos 4t)) on [0,8), N = 1024 at 128 Hz.
AhmModel cosine_if_model();
// cos(2 pi (10t + 5t^2)) + cos(2 pi (20t + 9t^2)) on [0,1), N = 128 at 128 Hz.
AhmModel two_lfm_model();

// Real synthesis emits A_0 + sum A_k cos(2 pi phi_k); complex synthesis
// emits A_0 + sum A_k e^{i 2 pi phi_k}. Rejects non-positive amplitudes or
// IFs and IFs that are not strictly increasing in k.
template <typename Scalar>
Synthesized<Scalar> synth_ahm(const AhmModel& model);

Synthesized<double> gen_linear_chirp();
Synthesized<double> gen_cosine_if();
Synthesized<double> gen_two_lfm();

inline constexpr double kNoiseFree = std::numeric_limits<double>::infinity();

// Adds white Gaussian noise (circular for complex signals) scaled so that the
// whole-record energy ratio equals snr_db exactly. snr_db = +inf returns the
// input unchanged.
template <typename Scalar>
SampledSignal<Scalar> add_noise(const SampledSignal<Scalar>& signal, double snr_db,
                                std::uint64_t seed);

// Sampled estimates of the slow-variation constants on [t_lo, t_hi]:
// eps1 = sup|A'| / inf A, eps2 = sup|phi''|, eps3 = sup|phi'''|, d' = min gap.
ModelAssumptions estimate_assumptions(const AhmModel& model, double t_lo, double t_hi,
                                      Index points = 4097);

}  // namespace astft
