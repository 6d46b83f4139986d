#pragma once

#include "astft/pipeline.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace astft {

// Interior frames [begin, end), zero-based. The one-based labels are
// begin + 1 .. end, i.e. N/8 + 1 .. 7N/8.
struct SliceRange {
  Index begin = 0;
  Index end = 0;

  Index size() const { return end - begin; }
  Index first_label() const { return begin + 1; }
  Index last_label() const { return end; }
};

// Throws std::invalid_argument when n < 8.
SliceRange interior_slice(Index n);

using FrameMask = Eigen::Array<bool, Eigen::Dynamic, 1>;

// ||v - v^|| / ||v||; throws on zero-norm truth or size mismatch.
double relative_l2(const Eigen::Ref<const Eigen::VectorXcd>& truth,
                   const Eigen::Ref<const Eigen::VectorXcd>& estimate);

// Mean over columns of relative_l2 restricted to the slice; frames with
// exclude(m) set are dropped.
double rmse(const Eigen::Ref<const Eigen::MatrixXcd>& truth,
            const Eigen::Ref<const Eigen::MatrixXcd>& estimate, const SliceRange& slice,
            const FrameMask* exclude = nullptr);

// Run settings echoed into every report.
struct RunEcho {
  std::string sigma_policy = "constant";
  std::optional<double> sigma;  // set for constant sigma
  double tau0 = 0.2;
  ThresholdPolicy threshold;
  int oversampling = 4;
  double truncation = 5.0;
  std::optional<double> snr_db;
  std::optional<std::uint64_t> seed;
};

RunEcho make_echo(const SigmaSeries& sigma, const SeparationConfig& config);

struct ComponentError {
  Index component = 0;
  Eigen::VectorXd abs_error;  // interior frames, flagged ones included
  double relative_l2 = 0.0;   // interior, flagged frames excluded
  double median_abs = 0.0;
  double max_abs = 0.0;
};

struct EvalReport {
  std::string experiment;
  std::string model;  // si, lc, lc-true-cr
  std::string chirp_source;
  SliceRange slice;
  Eigen::VectorXd times;  // interior
  Index excluded_frames = 0;
  double rmse = 0.0;
  std::vector<ComponentError> components;
  RunEcho echo;
};

// Real inputs are scored against A cos(2 pi phi), complex ones against
// A e^{i 2 pi phi}. The trend is scored when both truth and recovery have one.
EvalReport evaluate(const GroundTruth& truth, const ComponentRecovery& recovery, bool real_input,
                    std::string experiment, std::string model, const RunEcho& echo);

// one_chirp, one_cosine or two_lfm; throws std::invalid_argument otherwise.
AhmModel model_by_name(std::string_view name);
std::vector<std::string> generator_names();

struct Table1Result {
  EvalReport si;
  EvalReport lc;
  EvalReport lc_true;

  bool ordered() const { return lc_true.rmse < lc.rmse && lc.rmse < si.rmse; }
};

// two_lfm with the given window widths.
Table1Result run_table1(const SigmaSeries& sigma, const SeparationConfig& config = {});
// The sigma = 1/16 row.
Table1Result run_table1(const SeparationConfig& config = {});

struct FigureRun {
  std::string name;  // e.g. one_chirp_clean
  std::optional<double> snr_db;
  std::optional<std::uint64_t> seed;
  EvalReport si;
  EvalReport lc;
  std::optional<EvalReport> lc_true;  // clean runs only
};

inline constexpr double kFigureSigma = 1.0 / 16.0;

// one_chirp clean and at 10 dB, one_cosine clean and at 15 dB, sigma = 1/16.
std::vector<FigureRun> run_figures(const SeparationConfig& config = {}, std::uint64_t seed = 1);

struct NoisyOrdering {
  std::string name;
  double snr_db = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> si_medians;  // per seed, interior median |error|
  std::vector<double> lc_medians;
  double si_median = 0.0;  // median over seeds
  double lc_median = 0.0;

  bool holds() const { return lc_median < si_median; }
};

NoisyOrdering noisy_ordering(std::string_view name, double snr_db, int seeds,
                             std::uint64_t first_seed = 1, const SeparationConfig& config = {});

double median(std::vector<double> values);

}  // namespace astft
