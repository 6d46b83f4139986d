#include "astft/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace astft {

void validate(const SeparationConfig& config) {
  validate(config.window);
  validate(config.threshold);
  if (config.oversampling < 1) throw std::invalid_argument("oversampling must be >= 1");
  if (config.k_expected && *config.k_expected < 0) {
    throw std::invalid_argument("k_expected must be >= 0");
  }
}

Eigen::MatrixXd estimate_chirp_rates(const RidgeSet& ridges, double dt) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ridges.frames(), ridges.eta_hat.cols());
  for (Index l = 1; l < out.cols(); ++l) {
    out.col(l) = estimate_chirp_rate(ridges.eta_hat.col(l), dt).smoothed;
  }
  return out;
}

SliceRange interior_slice(Index n) {
  if (n < 8) throw std::invalid_argument("interior slice needs n >= 8");
  return {n / 8, 7 * n / 8};
}

double relative_l2(const Eigen::Ref<const Eigen::VectorXcd>& truth,
                   const Eigen::Ref<const Eigen::VectorXcd>& estimate) {
  if (truth.size() != estimate.size()) throw std::invalid_argument("length mismatch");
  const double denom = truth.norm();
  if (!(denom > 0.0)) throw std::invalid_argument("zero-norm truth");
  return (truth - estimate).norm() / denom;
}

namespace {

Eigen::VectorXcd kept_rows(const Eigen::Ref<const Eigen::VectorXcd>& v, const SliceRange& slice,
                           const FrameMask* exclude) {
  std::vector<Complex> rows;
  for (Index m = slice.begin; m < slice.end; ++m) {
    if (exclude && (*exclude)(m)) continue;
    rows.push_back(v(m));
  }
  return Eigen::Map<Eigen::VectorXcd>(rows.data(), static_cast<Index>(rows.size()));
}

void check_slice(const SliceRange& slice, Index n) {
  if (slice.begin < 0 || slice.end > n || slice.begin >= slice.end) {
    throw std::invalid_argument("slice outside the series");
  }
}

Eigen::VectorXcd reference(const GroundTruth& truth, Index l, bool real_input) {
  if (!real_input) return truth.components.col(l);
  return truth.components.col(l).real().cast<Complex>();
}

}  // namespace

double rmse(const Eigen::Ref<const Eigen::MatrixXcd>& truth,
            const Eigen::Ref<const Eigen::MatrixXcd>& estimate, const SliceRange& slice,
            const FrameMask* exclude) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols()) {
    throw std::invalid_argument("shape mismatch");
  }
  if (truth.cols() < 1) throw std::invalid_argument("no components");
  check_slice(slice, truth.rows());
  if (exclude && exclude->size() != truth.rows()) throw std::invalid_argument("mask length");
  double sum = 0.0;
  for (Index k = 0; k < truth.cols(); ++k) {
    sum += relative_l2(kept_rows(truth.col(k), slice, exclude),
                       kept_rows(estimate.col(k), slice, exclude));
  }
  return sum / static_cast<double>(truth.cols());
}

RunEcho make_echo(const SigmaSeries& sigma, const SeparationConfig& config) {
  RunEcho e;
  switch (sigma.source) {
    case SigmaSource::constant:
      e.sigma_policy = "constant";
      if (sigma.size() > 0) e.sigma = sigma.values(0);
      break;
    case SigmaSource::user_file:
      e.sigma_policy = "user_file";
      break;
    case SigmaSource::sigma1_rule:
      e.sigma_policy = "sigma1";
      break;
  }
  e.tau0 = config.window.tau0;
  e.threshold = config.threshold;
  e.oversampling = config.oversampling;
  e.truncation = config.window.truncation;
  return e;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of nothing");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

EvalReport evaluate(const GroundTruth& truth, const ComponentRecovery& recovery, bool real_input,
                    std::string experiment, std::string model, const RunEcho& echo) {
  if (truth.size() != recovery.frames() ||
      truth.num_components() != recovery.num_components()) {
    throw std::invalid_argument("recovery does not match ground truth");
  }
  EvalReport r;
  r.experiment = std::move(experiment);
  r.model = std::move(model);
  r.chirp_source = std::string(to_string(recovery.source));
  r.echo = echo;
  r.slice = interior_slice(truth.size());
  r.times = truth.times.segment(r.slice.begin, r.slice.size());
  const FrameMask* mask = recovery.flagged.size() == truth.size() ? &recovery.flagged : nullptr;
  if (mask) r.excluded_frames = mask->segment(r.slice.begin, r.slice.size()).count();

  const Index first = (truth.has_trend && recovery.has_trend) ? 0 : 1;
  double sum = 0.0;
  for (Index l = first; l <= truth.num_components(); ++l) {
    const Eigen::VectorXcd ref = reference(truth, l, real_input);
    ComponentError c;
    c.component = l;
    c.abs_error =
        (ref - recovery.x_hat.col(l)).segment(r.slice.begin, r.slice.size()).cwiseAbs();
    c.relative_l2 = relative_l2(kept_rows(ref, r.slice, mask),
                                kept_rows(recovery.x_hat.col(l), r.slice, mask));
    c.median_abs = median(std::vector<double>(c.abs_error.begin(), c.abs_error.end()));
    c.max_abs = c.abs_error.maxCoeff();
    sum += c.relative_l2;
    r.components.push_back(std::move(c));
  }
  r.rmse = sum / static_cast<double>(r.components.size());
  return r;
}

AhmModel model_by_name(std::string_view name) {
  if (name == "one_chirp") return linear_chirp_model();
  if (name == "one_cosine") return cosine_if_model();
  if (name == "two_lfm") return two_lfm_model();
  throw std::invalid_argument("unknown generator '" + std::string(name) +
                              "' (expected one_chirp, one_cosine or two_lfm)");
}

std::vector<std::string> generator_names() { return {"one_chirp", "one_cosine", "two_lfm"}; }

Table1Result run_table1(const SigmaSeries& sigma, const SeparationConfig& config) {
  const auto synth = synth_ahm<double>(two_lfm_model());
  SeparationConfig cfg = config;
  if (!cfg.k_expected) cfg.k_expected = 2;
  const Separation sep = separate(synth.signal, sigma, cfg, &synth.truth);
  const RunEcho echo = make_echo(sigma, cfg);
  Table1Result t;
  t.si = evaluate(synth.truth, sep.si, true, "table1", "si", echo);
  t.lc = evaluate(synth.truth, sep.lc, true, "table1", "lc", echo);
  t.lc_true = evaluate(synth.truth, *sep.lc_true, true, "table1", "lc-true-cr", echo);
  return t;
}

Table1Result run_table1(const SeparationConfig& config) {
  return run_table1(SigmaSeries::constant(two_lfm_model().n, kFigureSigma), config);
}

namespace {

FigureRun figure_run(std::string_view name, std::optional<double> snr_db,
                     std::optional<std::uint64_t> seed, const SeparationConfig& config) {
  const auto synth = synth_ahm<double>(model_by_name(name));
  RealSignal signal = synth.signal;
  if (snr_db) signal = add_noise(signal, *snr_db, seed.value_or(0));
  const SigmaSeries sigma = SigmaSeries::constant(signal.size(), kFigureSigma);
  SeparationConfig cfg = config;
  if (!cfg.k_expected) cfg.k_expected = 1;
  const Separation sep = separate(signal, sigma, cfg, snr_db ? nullptr : &synth.truth);

  FigureRun run;
  run.name = std::string(name) + (snr_db ? "_" + std::to_string(static_cast<int>(*snr_db)) + "db"
                                         : std::string("_clean"));
  run.snr_db = snr_db;
  run.seed = snr_db ? seed : std::nullopt;
  RunEcho echo = make_echo(sigma, cfg);
  echo.snr_db = run.snr_db;
  echo.seed = run.seed;
  run.si = evaluate(synth.truth, sep.si, true, run.name, "si", echo);
  run.lc = evaluate(synth.truth, sep.lc, true, run.name, "lc", echo);
  if (sep.lc_true) {
    run.lc_true = evaluate(synth.truth, *sep.lc_true, true, run.name, "lc-true-cr", echo);
  }
  return run;
}

}  // namespace

std::vector<FigureRun> run_figures(const SeparationConfig& config, std::uint64_t seed) {
  std::vector<FigureRun> runs;
  runs.push_back(figure_run("one_chirp", std::nullopt, std::nullopt, config));
  runs.push_back(figure_run("one_chirp", 10.0, seed, config));
  runs.push_back(figure_run("one_cosine", std::nullopt, std::nullopt, config));
  runs.push_back(figure_run("one_cosine", 15.0, seed, config));
  return runs;
}

NoisyOrdering noisy_ordering(std::string_view name, double snr_db, int seeds,
                             std::uint64_t first_seed, const SeparationConfig& config) {
  if (seeds < 1) throw std::invalid_argument("need at least one seed");
  NoisyOrdering out;
  out.name = std::string(name);
  out.snr_db = snr_db;
  for (int i = 0; i < seeds; ++i) {
    const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(i);
    const FigureRun run = figure_run(name, snr_db, seed, config);
    out.seeds.push_back(seed);
    out.si_medians.push_back(run.si.components.front().median_abs);
    out.lc_medians.push_back(run.lc.components.front().median_abs);
  }
  out.si_median = median(out.si_medians);
  out.lc_median = median(out.lc_medians);
  return out;
}

}  // namespace astft
