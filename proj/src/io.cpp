#include "astft/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace astft::io {

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

// Rate and t0 from a uniform time column.
std::pair<double, double> timing(const CsvTable& table) {
  const Index tc = table.column("t");
  const std::size_t n = table.rows.size();
  if (n < 2) throw std::invalid_argument("signal needs at least two rows");
  const double t0 = table.number(0, tc);
  const double dt = (table.number(n - 1, tc) - t0) / static_cast<double>(n - 1);
  if (!(dt > 0.0)) throw std::invalid_argument("time column must increase");
  for (std::size_t i = 0; i < n; ++i) {
    const double expected = t0 + dt * static_cast<double>(i);
    if (std::abs(table.number(i, tc) - expected) > 1e-6 * dt) {
      throw std::invalid_argument("time column is not uniform at row " + std::to_string(i + 1));
    }
  }
  return {1.0 / dt, t0};
}

std::string flag_list(const BoundReport& r, Index m, Index l) {
  std::string s;
  auto add = [&](bool fail, const char* name) {
    if (!fail) return;
    if (!s.empty()) s += '|';
    s += name;
  };
  add(!r.flags.theorem1(m), "theo1_cond1");
  add(!r.flags.threshold1(m), "cond_ep1");
  add(!r.flags.separated(m), "separated");
  add(!r.flags.non_overlapping(m), "no_overlap");
  add(!r.flags.theorem2(m), "theo2_cond");
  add(!r.flags.threshold2(m), "cond_ep_2nd");
  add(std::isnan(r.bd1(m, l)), "bd_undef");
  add(std::isnan(r.chirp_bd1(m, l)), "Bd_undef");
  return s.empty() ? "ok" : s;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

Index CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<Index>(i);
  }
  throw std::invalid_argument("missing CSV column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, Index col) const {
  return parse_double(rows.at(row).at(static_cast<std::size_t>(col)));
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line);
    for (auto& c : cells) c = strip(c);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                  ": expected " + std::to_string(table.header.size()) +
                                  " fields");
    }
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw std::invalid_argument(path.string() + ": empty file");
  return table;
}

AnySignal read_signal_csv(const fs::path& path) {
  const CsvTable table = read_csv(path);
  const auto [rate, t0] = timing(table);
  const auto n = static_cast<Index>(table.rows.size());
  const auto has = [&](const char* c) {
    return std::find(table.header.begin(), table.header.end(), c) != table.header.end();
  };
  if (has("re") && has("im")) {
    ComplexSignal s{Vector<Complex>(n), rate, t0};
    const Index re = table.column("re");
    const Index im = table.column("im");
    for (Index m = 0; m < n; ++m) {
      const auto i = static_cast<std::size_t>(m);
      s.samples(m) = {table.number(i, re), table.number(i, im)};
    }
    validate(s);
    return s;
  }
  RealSignal s{Eigen::VectorXd(n), rate, t0};
  const Index vc = table.column("value");
  for (Index m = 0; m < n; ++m) s.samples(m) = table.number(static_cast<std::size_t>(m), vc);
  validate(s);
  return s;
}

void write_signal_csv(const fs::path& path, const RealSignal& signal) {
  auto out = open_out(path);
  out << "t,value\n";
  for (Index m = 0; m < signal.size(); ++m) {
    out << format_double(signal.time(m)) << ',' << format_double(signal.samples(m)) << '\n';
  }
}

void write_signal_csv(const fs::path& path, const ComplexSignal& signal) {
  auto out = open_out(path);
  out << "t,re,im\n";
  for (Index m = 0; m < signal.size(); ++m) {
    out << format_double(signal.time(m)) << ',' << format_double(signal.samples(m).real())
        << ',' << format_double(signal.samples(m).imag()) << '\n';
  }
}

void write_truth_csv(const fs::path& path, const GroundTruth& truth) {
  auto out = open_out(path);
  out << "t,k,A,if,cr,re,im\n";
  for (Index m = 0; m < truth.size(); ++m) {
    for (Index k = truth.has_trend ? 0 : 1; k <= truth.num_components(); ++k) {
      out << format_double(truth.times(m)) << ',' << k << ','
          << format_double(truth.amplitude(m, k)) << ',' << format_double(truth.inst_freq(m, k))
          << ',' << format_double(truth.chirp_rate(m, k)) << ','
          << format_double(truth.components(m, k).real()) << ','
          << format_double(truth.components(m, k).imag()) << '\n';
    }
  }
}

GroundTruth read_truth_csv(const fs::path& path) {
  const CsvTable table = read_csv(path);
  const Index tc = table.column("t"), kc = table.column("k"), ac = table.column("A"),
              fc = table.column("if"), cc = table.column("cr"), rc = table.column("re"),
              ic = table.column("im");
  Index k_max = 0;
  bool trend = false;
  std::vector<double> times;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto k = static_cast<Index>(table.number(i, kc));
    if (k < 0) throw std::invalid_argument("negative component index");
    k_max = std::max(k_max, k);
    trend = trend || k == 0;
    const double t = table.number(i, tc);
    if (times.empty() || t != times.back()) times.push_back(t);
  }
  const auto n = static_cast<Index>(times.size());
  const Index per_frame = k_max + (trend ? 1 : 0);
  if (per_frame < 1 || static_cast<Index>(table.rows.size()) != n * per_frame) {
    throw std::invalid_argument("ground truth must list every component at every sample");
  }
  GroundTruth g;
  g.has_trend = trend;
  g.times = Eigen::Map<Eigen::VectorXd>(times.data(), n);
  g.amplitude = Eigen::MatrixXd::Zero(n, k_max + 1);
  g.inst_freq = g.amplitude;
  g.chirp_rate = g.amplitude;
  g.components = Eigen::MatrixXcd::Zero(n, k_max + 1);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto m = static_cast<Index>(i) / per_frame;
    const auto k = static_cast<Index>(table.number(i, kc));
    if (table.number(i, tc) != times[static_cast<std::size_t>(m)]) {
      throw std::invalid_argument("ground truth rows must be grouped by sample");
    }
    g.amplitude(m, k) = table.number(i, ac);
    g.inst_freq(m, k) = table.number(i, fc);
    g.chirp_rate(m, k) = table.number(i, cc);
    g.components(m, k) = {table.number(i, rc), table.number(i, ic)};
  }
  return g;
}

SigmaSeries read_sigma_csv(const fs::path& path, Index n) {
  const CsvTable table = read_csv(path);
  const Index sc = table.column("sigma");
  SigmaSeries s;
  s.source = SigmaSource::user_file;
  s.values.resize(static_cast<Index>(table.rows.size()));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    s.values(static_cast<Index>(i)) = table.number(i, sc);
  }
  validate(s, n);
  return s;
}

void write_tf_csv(const fs::path& path, const TFMatrix& tf) {
  auto out = open_out(path);
  out << "m,n,t,eta,re,im\n";
  for (Index m = 0; m < tf.frames(); ++m) {
    const std::string t = format_double(tf.times(m));
    for (Index k = 0; k < tf.bins(); ++k) {
      out << m << ',' << k << ',' << t << ',' << format_double(tf.grid.eta(k)) << ','
          << format_double(tf.values(m, k).real()) << ','
          << format_double(tf.values(m, k).imag()) << '\n';
    }
  }
}

void write_ridge_csv(const fs::path& path, const RidgeSet& ridges, const Eigen::VectorXd& times) {
  if (times.size() != ridges.frames()) throw std::invalid_argument("times do not match ridges");
  auto out = open_out(path);
  out << "m,t,l,eta_hat,cluster_lo,cluster_hi\n";
  for (Index m = 0; m < ridges.frames(); ++m) {
    for (Index l = ridges.has_trend ? 0 : 1; l <= ridges.num_components(); ++l) {
      out << m << ',' << format_double(times(m)) << ',' << l << ','
          << format_double(ridges.eta_hat(m, l)) << ',' << ridges.cluster_lo(m, l) << ','
          << ridges.cluster_hi(m, l) << '\n';
    }
  }
}

void write_component_csv(const fs::path& path, const ComponentRecovery& recovery,
                         const RidgeSet& ridges, const Eigen::MatrixXd& r_tilde,
                         const Eigen::VectorXd& times) {
  if (times.size() != recovery.frames() || ridges.frames() != recovery.frames() ||
      r_tilde.rows() != recovery.frames() || r_tilde.cols() != recovery.x_hat.cols()) {
    throw std::invalid_argument("component table inputs disagree");
  }
  auto out = open_out(path);
  out << "m,t,l,xhat_re,xhat_im,A_hat,eta_hat,r_tilde,flag\n";
  for (Index m = 0; m < recovery.frames(); ++m) {
    for (Index l = recovery.has_trend ? 0 : 1; l <= recovery.num_components(); ++l) {
      const bool flag = ridges.cluster_lo(m, l) < 0 && (l > 0 || ridges.has_trend);
      out << m << ',' << format_double(times(m)) << ',' << l << ','
          << format_double(recovery.x_hat(m, l).real()) << ','
          << format_double(recovery.x_hat(m, l).imag()) << ','
          << format_double(recovery.amplitude(m, l)) << ','
          << format_double(ridges.eta_hat(m, l)) << ',' << format_double(r_tilde(m, l)) << ','
          << (flag ? 1 : 0) << '\n';
    }
  }
}

void write_bounds_csv(const fs::path& path, const BoundReport& report) {
  auto out = open_out(path);
  out << "t,l,lambda0,pi0,err,Err,bd1,bd2,Bd1,Bd2,flags\n";
  for (Index m = 0; m < report.frames(); ++m) {
    for (Index l = report.has_trend ? 0 : 1; l <= report.num_components(); ++l) {
      out << format_double(report.times(m)) << ',' << l << ','
          << format_double(report.lambda0(m)) << ',' << format_double(report.pi0(m)) << ','
          << format_double(report.err(m, l)) << ',' << format_double(report.chirp_err(m, l))
          << ',' << format_double(report.bd1(m, l)) << ',' << format_double(report.bd2(m, l))
          << ',' << format_double(report.chirp_bd1(m, l)) << ','
          << format_double(report.chirp_bd2(m, l)) << ',' << flag_list(report, m, l) << '\n';
    }
  }
}

void write_error_series_csv(const fs::path& path, const std::vector<const EvalReport*>& reports) {
  auto out = open_out(path);
  out << "t,model,l,abs_error\n";
  for (const EvalReport* r : reports) {
    for (const ComponentError& c : r->components) {
      for (Index i = 0; i < c.abs_error.size(); ++i) {
        out << format_double(r->times(i)) << ',' << r->model << ',' << c.component << ','
            << format_double(c.abs_error(i)) << '\n';
      }
    }
  }
}

nlohmann::json to_json(const RunEcho& e) {
  nlohmann::json j;
  j["sigma_policy"] = e.sigma_policy;
  j["sigma"] = e.sigma ? nlohmann::json(*e.sigma) : nlohmann::json(nullptr);
  j["tau0"] = e.tau0;
  j["threshold"] = {
      {"mode", e.threshold.mode == ThresholdPolicy::Mode::relative ? "relative" : "absolute"},
      {"value", e.threshold.value}};
  j["oversampling"] = e.oversampling;
  j["truncation"] = e.truncation;
  j["snr_db"] = e.snr_db ? nlohmann::json(*e.snr_db) : nlohmann::json(nullptr);
  j["seed"] = e.seed ? nlohmann::json(*e.seed) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  j["model"] = r.model;
  j["chirp_rate_source"] = r.chirp_source;
  j["interior"] = {{"first", r.slice.first_label()}, {"last", r.slice.last_label()}};
  j["excluded_frames"] = r.excluded_frames;
  j["rmse"] = r.rmse;
  nlohmann::json comps = nlohmann::json::array();
  for (const ComponentError& c : r.components) {
    comps.push_back({{"l", c.component},
                     {"relative_l2", c.relative_l2},
                     {"median_abs_error", c.median_abs},
                     {"max_abs_error", c.max_abs}});
  }
  j["components"] = std::move(comps);
  j["config"] = to_json(r.echo);
  return j;
}

nlohmann::json to_json(const SeparationConfig& c) {
  nlohmann::json j;
  j["tau0"] = c.window.tau0;
  j["truncation"] = c.window.truncation;
  j["oversampling"] = c.oversampling;
  j["threshold"] = {
      {"mode", c.threshold.mode == ThresholdPolicy::Mode::relative ? "relative" : "absolute"},
      {"value", c.threshold.value}};
  j["k_expected"] = c.k_expected ? nlohmann::json(*c.k_expected) : nlohmann::json(nullptr);
  j["trend"] = c.trend;
  return j;
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

}  // namespace astft::io
