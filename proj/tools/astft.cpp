// astft: synthesize test signals, separate them with the adaptive STFT, and
// evaluate the error bounds.

#include "run_config.hpp"

#include "astft/bounds.hpp"
#include "astft/evaluation.hpp"
#include "astft/io.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <variant>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace astft;
using cli::RunConfig;

namespace {

struct Input {
  io::AnySignal signal;
  std::optional<GroundTruth> truth;
  std::optional<AhmModel> model;

  Index size() const {
    return std::visit([](const auto& s) { return s.size(); }, signal);
  }
  bool real() const { return std::holds_alternative<RealSignal>(signal); }
};

Input load_input(const RunConfig& c) {
  Input in;
  if (cli::is_generator(c.input)) {
    in.model = model_by_name(c.input);
    if (c.complex_input) {
      auto s = synth_ahm<Complex>(*in.model);
      in.signal = std::move(s.signal);
      in.truth = std::move(s.truth);
    } else {
      auto s = synth_ahm<double>(*in.model);
      in.signal = std::move(s.signal);
      in.truth = std::move(s.truth);
    }
  } else {
    in.signal = io::read_signal_csv(c.input);
    if (c.truth) in.truth = io::read_truth_csv(*c.truth);
  }
  if (c.sample_rate) {
    std::visit([&](auto& s) { s.sample_rate = *c.sample_rate; }, in.signal);
  }
  if (c.snr_db) {
    std::visit([&](auto& s) { s = add_noise(s, *c.snr_db, c.seed); }, in.signal);
  }
  if (in.truth && in.truth->size() != in.size()) {
    throw std::invalid_argument("ground truth length does not match the signal");
  }
  return in;
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

SigmaSeries resolve_sigma(const RunConfig& c, const Input& in) {
  if (c.sigma == "sigma1") {
    const GroundTruth& g = *in.truth;
    return sigma1_rule(g.inst_freq.rightCols(g.num_components()), alpha_from_tau0(c.tau0));
  }
  if (auto v = parse_number(c.sigma)) {
    SigmaSeries s = SigmaSeries::constant(in.size(), *v);
    validate(s, in.size());
    return s;
  }
  if (!fs::exists(c.sigma)) throw std::invalid_argument("sigma file '" + c.sigma + "' not found");
  return io::read_sigma_csv(c.sigma, in.size());
}

json ridge_summary(const RidgeSet& r, const FreqGrid& grid) {
  return {{"seed_frame", r.seed_frame},
          {"components", r.num_components()},
          {"flagged_frames", r.flagged.count()},
          {"trend", r.has_trend},
          {"grid",
           {{"eta_min", grid.eta_min}, {"delta_eta", grid.delta_eta}, {"n_bins", grid.n_bins}}}};
}

int cmd_synth(const std::string& name, bool complex_input, std::optional<double> snr,
              std::uint64_t seed, const fs::path& out) {
  const AhmModel model = model_by_name(name);
  if (complex_input) {
    auto s = synth_ahm<Complex>(model);
    if (snr) s.signal = add_noise(s.signal, *snr, seed);
    io::write_signal_csv(out / (name + "_signal.csv"), s.signal);
    io::write_truth_csv(out / (name + "_truth.csv"), s.truth);
  } else {
    auto s = synth_ahm<double>(model);
    if (snr) s.signal = add_noise(s.signal, *snr, seed);
    io::write_signal_csv(out / (name + "_signal.csv"), s.signal);
    io::write_truth_csv(out / (name + "_truth.csv"), s.truth);
  }
  std::cout << "wrote " << (out / (name + "_signal.csv")).string() << " (" << model.n
            << " samples at " << model.sample_rate << " Hz)\n";
  return 0;
}

int cmd_separate(const RunConfig& c, const fs::path& out) {
  const Input in = load_input(c);
  const SigmaSeries sigma = resolve_sigma(c, in);
  const SeparationConfig sc = cli::separation_config(c);
  const GroundTruth* truth = in.truth ? &*in.truth : nullptr;
  const Separation sep = std::visit(
      [&](const auto& s) { return separate(s, sigma, sc, truth); }, in.signal);

  const Eigen::VectorXd& times = sep.tf.times;
  io::write_ridge_csv(out / "ridges.csv", sep.ridges, times);
  if (c.tf_dump) io::write_tf_csv(out / "tf.csv", sep.tf);

  json report;
  report["config"] = cli::to_json(c);
  report["separation"] = io::to_json(sc);
  report["ridges"] = ridge_summary(sep.ridges, sep.tf.grid);

  const RunEcho echo = make_echo(sigma, sc);
  std::vector<EvalReport> evals;
  auto emit = [&](const ComponentRecovery& rec, const std::string& name) {
    io::write_component_csv(out / ("components_" + name + ".csv"), rec, sep.ridges,
                            sep.chirp_rate, times);
    if (truth) evals.push_back(evaluate(*truth, rec, in.real(), "separate", name, echo));
  };
  const bool all = c.model == cli::ModelSelect::all;
  if (all || c.model == cli::ModelSelect::si) emit(sep.si, "si");
  if (all || c.model == cli::ModelSelect::lc) emit(sep.lc, "lc");
  if (sep.lc_true && (all || c.model == cli::ModelSelect::lc_true)) {
    emit(*sep.lc_true, "lc-true-cr");
  }

  if (!evals.empty()) {
    json metrics = json::array();
    std::vector<const EvalReport*> ptrs;
    for (const auto& e : evals) {
      metrics.push_back(io::to_json(e));
      ptrs.push_back(&e);
      std::cout << e.model << " RMSE " << io::format_double(e.rmse) << '\n';
    }
    report["metrics"] = std::move(metrics);
    io::write_error_series_csv(out / "errors.csv", ptrs);
  }
  io::write_json(out / "report.json", report);
  std::cout << "separated " << sep.ridges.num_components() << " component(s); outputs in "
            << out.string() << '\n';
  return 0;
}

json flag_counts(const BoundReport& r, Index begin, Index end) {
  auto count = [&](const Eigen::Array<bool, Eigen::Dynamic, 1>& f) {
    return f.segment(begin, end - begin).count();
  };
  return {{"frames", end - begin},
          {"theo1_cond1", count(r.flags.theorem1)},
          {"cond_ep1", count(r.flags.threshold1)},
          {"separated_cond_1st", count(r.flags.separated)},
          {"cond_no_overlapping", count(r.flags.non_overlapping)},
          {"theo2_cond", count(r.flags.theorem2)},
          {"cond_ep_2nd", count(r.flags.threshold2)}};
}

json window_json(const std::optional<ThresholdWindow>& w) {
  if (!w) return nullptr;
  return {{"lo", w->lo}, {"hi", w->hi}};
}

int cmd_bounds(const RunConfig& c, const fs::path& out) {
  const Input in = load_input(c);
  if (!in.truth) throw std::invalid_argument("bounds need ground truth (generator or truth file)");
  const GroundTruth& truth = *in.truth;
  const SigmaSeries sigma = resolve_sigma(c, in);
  const ModelAssumptions as =
      in.model ? estimate_assumptions(*in.model, truth.times(0), truth.times(truth.size() - 1))
               : assumptions_from_truth(truth);

  BoundsConfig bc;
  bc.tau0 = c.tau0;
  bc.radius = c.radius;
  if (c.threshold.mode == ThresholdPolicy::Mode::absolute) {
    bc.threshold = Eigen::VectorXd::Constant(truth.size(), c.threshold.value);
  }
  const BoundReport r = compute_bounds(truth, sigma, as, bc);
  io::write_bounds_csv(out / "bounds.csv", r);

  const SliceRange slice = interior_slice(truth.size());
  json summary;
  summary["config"] = cli::to_json(c);
  summary["assumptions"] = {
      {"eps1", as.eps1}, {"eps2", as.eps2}, {"eps3", as.eps3}, {"dprime", as.dprime}};
  summary["alpha"] = r.alpha;
  summary["pass_counts_all"] = flag_counts(r, 0, r.frames());
  summary["pass_counts_interior"] = flag_counts(r, slice.begin, slice.end);
  summary["threshold_window_theorem1"] =
      window_json(common_threshold_window(r, slice.begin, slice.end, true, false));
  summary["threshold_window_theorem2"] =
      window_json(common_threshold_window(r, slice.begin, slice.end, false, true));
  io::write_json(out / "bounds.json", summary);

  const Index sep_fail = (!r.flags.separated).count();
  const Index ovl_fail = (!r.flags.non_overlapping).count();
  std::cout << "separation failures: sinusoidal " << sep_fail << ", chirp " << ovl_fail << " of "
            << r.frames() << " frames\n";
  return 0;
}

json table_row(const std::string& label, const Table1Result& t) {
  return {{"sigma", label},
          {"si", t.si.rmse},
          {"lc", t.lc.rmse},
          {"lc_true_cr", t.lc_true.rmse},
          {"ordered", t.ordered()},
          {"reports", {io::to_json(t.si), io::to_json(t.lc), io::to_json(t.lc_true)}}};
}

int cmd_table1(const RunConfig& c, const std::optional<std::string>& sigma_file,
               const fs::path& out) {
  const SeparationConfig sc = cli::separation_config(c);
  json doc;
  doc["config"] = io::to_json(sc);
  json rows = json::array();

  const Table1Result fixed = run_table1(sc);
  rows.push_back(table_row("1/16", fixed));
  io::write_error_series_csv(out / "table1_sigma_1_16_errors.csv",
                             {&fixed.si, &fixed.lc, &fixed.lc_true});
  std::cout << "sigma=1/16   si " << io::format_double(fixed.si.rmse) << "  lc "
            << io::format_double(fixed.lc.rmse) << "  lc-true-cr "
            << io::format_double(fixed.lc_true.rmse) << '\n';

  if (sigma_file) {
    const SigmaSeries s = io::read_sigma_csv(*sigma_file, two_lfm_model().n);
    const Table1Result user = run_table1(s, sc);
    rows.push_back(table_row("user:" + *sigma_file, user));
    io::write_error_series_csv(out / "table1_sigma_user_errors.csv",
                               {&user.si, &user.lc, &user.lc_true});
    std::cout << "sigma=user   si " << io::format_double(user.si.rmse) << "  lc "
              << io::format_double(user.lc.rmse) << "  lc-true-cr "
              << io::format_double(user.lc_true.rmse) << '\n';
  }
  doc["rows"] = std::move(rows);
  io::write_json(out / "table1.json", doc);
  return 0;
}

int cmd_figures(const RunConfig& c, int seeds, const fs::path& out) {
  const SeparationConfig sc = cli::separation_config(c);
  json doc;
  doc["config"] = io::to_json(sc);
  json runs = json::array();
  for (const FigureRun& run : run_figures(sc, c.seed)) {
    std::vector<const EvalReport*> ptrs{&run.si, &run.lc};
    json reports = {io::to_json(run.si), io::to_json(run.lc)};
    if (run.lc_true) {
      ptrs.push_back(&*run.lc_true);
      reports.push_back(io::to_json(*run.lc_true));
    }
    io::write_error_series_csv(out / (run.name + "_errors.csv"), ptrs);
    runs.push_back({{"name", run.name}, {"reports", std::move(reports)}});
    std::cout << run.name << ": median |err| si "
              << io::format_double(run.si.components.front().median_abs) << ", lc "
              << io::format_double(run.lc.components.front().median_abs) << '\n';
  }
  doc["runs"] = std::move(runs);

  json ordering = json::array();
  for (const auto& [name, snr] : {std::pair{"one_chirp", 10.0}, std::pair{"one_cosine", 15.0}}) {
    const NoisyOrdering o = noisy_ordering(name, snr, seeds, c.seed, sc);
    ordering.push_back({{"name", o.name},
                        {"snr_db", o.snr_db},
                        {"seeds", o.seeds},
                        {"si_medians", o.si_medians},
                        {"lc_medians", o.lc_medians},
                        {"si_median", o.si_median},
                        {"lc_median", o.lc_median},
                        {"lc_below_si", o.holds()}});
  }
  doc["noisy_ordering"] = std::move(ordering);
  io::write_json(out / "figures.json", doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive STFT component separation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  app.add_option("-c,--config", config_path, "JSON run config")->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("-o,--out", out_dir,
                                 std::string("output directory (else $") + cli::kOutDirEnv +
                                     ", else config out_dir)");

  // Overrides shared by the pipeline commands.
  std::optional<std::string> input, truth, sigma, model, radius;
  std::optional<double> tau0, rho, eps1, snr, rate, truncation;
  std::optional<int> oversampling;
  std::optional<Index> k_expected;
  std::optional<std::uint64_t> seed;
  bool complex_flag = false, trend_flag = false, tf_dump = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", input, "generator name or signal CSV");
    sub->add_option("--truth", truth, "ground-truth CSV for file inputs");
    sub->add_option("--sigma", sigma, "window width: seconds, sigma1, or a t,sigma CSV");
    sub->add_option("--tau0", tau0, "essential-support threshold");
    auto* r = sub->add_option("--rho", rho, "relative ridge threshold");
    auto* e = sub->add_option("--eps1", eps1, "absolute ridge threshold");
    r->excludes(e);
    sub->add_option("--k", k_expected, "expected number of components");
    sub->add_option("--oversampling", oversampling, "frequency-grid oversampling F");
    sub->add_option("--truncation", truncation, "window truncation L");
    sub->add_option("--seed", seed, "noise seed");
    sub->add_option("--snr", snr, "add white Gaussian noise at this SNR (dB)");
    sub->add_option("--sample-rate", rate, "override the sample rate");
    sub->add_flag("--complex", complex_flag, "complex generator output");
    sub->add_flag("--trend", trend_flag, "the signal has a trend component");
  };

  auto* synth = app.add_subcommand("synth", "write a generator signal and its ground truth");
  std::string synth_name;
  synth->add_option("name", synth_name, "generator")
      ->required()
      ->check(CLI::IsMember(generator_names()));
  synth->add_option("--snr", snr, "add white Gaussian noise at this SNR (dB)");
  synth->add_option("--seed", seed, "noise seed");
  synth->add_flag("--complex", complex_flag, "complex output");

  auto* sep = app.add_subcommand("separate", "separate components and recover them");
  add_common(sep);
  sep->add_option("--model", model, "all, si, lc or lc-true-cr");
  sep->add_flag("--tf-dump", tf_dump, "also write the TF matrix");

  auto* bounds = app.add_subcommand("bounds", "evaluate the error bounds from ground truth");
  add_common(bounds);
  bounds->add_option("--radius", radius, "chirp zone radius: linearized or exact");

  auto* table1 = app.add_subcommand("table1", "two-LFM RMSE table");
  std::optional<std::string> sigma_file;
  table1->add_option("--sigma-file", sigma_file, "user t,sigma series for the second row")
      ->check(CLI::ExistingFile);
  table1->add_option("--oversampling", oversampling, "frequency-grid oversampling F");
  table1->add_option("--rho", rho, "relative ridge threshold");

  auto* figures = app.add_subcommand("figures", "one-chirp and one-cosine error series");
  int seeds = 11;
  figures->add_option("--seeds", seeds, "noise realizations for the ordering check")
      ->check(CLI::PositiveNumber);
  figures->add_option("--seed", seed, "first noise seed");
  figures->add_option("--oversampling", oversampling, "frequency-grid oversampling F");
  figures->add_option("--rho", rho, "relative ridge threshold");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig c = config_path.empty() ? RunConfig{} : cli::load_config(config_path);
    if (input) c.input = *input;
    if (truth) c.truth = *truth;
    if (sigma) c.sigma = *sigma;
    if (tau0) c.tau0 = *tau0;
    if (rho) c.threshold = ThresholdPolicy::relative(*rho);
    if (eps1) c.threshold = ThresholdPolicy::absolute(*eps1);
    if (k_expected) c.k_expected = *k_expected;
    if (oversampling) c.oversampling = *oversampling;
    if (truncation) c.truncation = *truncation;
    if (seed) c.seed = *seed;
    if (snr) c.snr_db = *snr;
    if (rate) c.sample_rate = *rate;
    if (model) c.model = cli::parse_model(*model);
    if (radius) {
      if (*radius != "linearized" && *radius != "exact") {
        throw std::invalid_argument("radius must be linearized or exact");
      }
      c.radius = *radius == "exact" ? RadiusRule::exact : RadiusRule::linearized;
    }
    if (complex_flag) c.complex_input = true;
    if (trend_flag) c.trend = true;
    if (tf_dump) c.tf_dump = true;
    if (!out_dir.empty()) c.out_dir = out_dir;
    const fs::path out = cli::resolve_out_dir(c, out_opt->count() > 0);

    if (*synth) return cmd_synth(synth_name, c.complex_input, c.snr_db, c.seed, out);
    cli::validate(c);
    if (*sep) return cmd_separate(c, out);
    if (*bounds) return cmd_bounds(c, out);
    if (*table1) return cmd_table1(c, sigma_file, out);
    if (*figures) return cmd_figures(c, seeds, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
