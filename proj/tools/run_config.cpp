#include "run_config.hpp"

#include "astft/evaluation.hpp"
#include "astft/io.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace astft::cli {

namespace fs = std::filesystem;
using nlohmann::json;

ModelSelect parse_model(const std::string& s) {
  if (s == "all") return ModelSelect::all;
  if (s == "si") return ModelSelect::si;
  if (s == "lc") return ModelSelect::lc;
  if (s == "lc-true-cr") return ModelSelect::lc_true;
  throw std::invalid_argument("model must be one of all, si, lc, lc-true-cr (got '" + s + "')");
}

std::string to_string(ModelSelect model) {
  switch (model) {
    case ModelSelect::si:
      return "si";
    case ModelSelect::lc:
      return "lc";
    case ModelSelect::lc_true:
      return "lc-true-cr";
    case ModelSelect::all:
      break;
  }
  return "all";
}

bool is_generator(const std::string& input) {
  for (const auto& name : generator_names()) {
    if (name == input) return true;
  }
  return false;
}

namespace {

template <typename T>
T get(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument("config key '" + key + "' has the wrong type");
  }
}

ThresholdPolicy parse_threshold(const json& value) {
  if (!value.is_object()) throw std::invalid_argument("config key 'threshold' must be an object");
  ThresholdPolicy p;
  for (const auto& [k, v] : value.items()) {
    if (k == "mode") {
      const auto mode = get<std::string>(v, "threshold.mode");
      if (mode == "relative") {
        p.mode = ThresholdPolicy::Mode::relative;
      } else if (mode == "absolute") {
        p.mode = ThresholdPolicy::Mode::absolute;
      } else {
        throw std::invalid_argument("threshold.mode must be relative or absolute");
      }
    } else if (k == "value") {
      p.value = get<double>(v, "threshold.value");
    } else {
      throw std::invalid_argument("unknown config key 'threshold." + k + "'");
    }
  }
  return p;
}

}  // namespace

void apply_json(RunConfig& c, const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, v] : doc.items()) {
    // Optional settings accept null, which is how to_json writes them when unset.
    if (v.is_null()) {
      if (key == "truth") {
        c.truth.reset();
      } else if (key == "sample_rate") {
        c.sample_rate.reset();
      } else if (key == "k_expected") {
        c.k_expected.reset();
      } else if (key == "snr_db") {
        c.snr_db.reset();
      } else {
        throw std::invalid_argument("config key '" + key + "' must not be null");
      }
      continue;
    }
    if (key == "input") {
      c.input = get<std::string>(v, key);
    } else if (key == "complex") {
      c.complex_input = get<bool>(v, key);
    } else if (key == "truth") {
      c.truth = get<std::string>(v, key);
    } else if (key == "sample_rate") {
      c.sample_rate = get<double>(v, key);
    } else if (key == "sigma") {
      c.sigma = v.is_number() ? io::format_double(v.get<double>()) : get<std::string>(v, key);
    } else if (key == "tau0") {
      c.tau0 = get<double>(v, key);
    } else if (key == "threshold") {
      c.threshold = parse_threshold(v);
    } else if (key == "k_expected") {
      c.k_expected = get<Index>(v, key);
    } else if (key == "trend") {
      c.trend = get<bool>(v, key);
    } else if (key == "model") {
      c.model = parse_model(get<std::string>(v, key));
    } else if (key == "oversampling") {
      c.oversampling = get<int>(v, key);
    } else if (key == "truncation") {
      c.truncation = get<double>(v, key);
    } else if (key == "seed") {
      c.seed = get<std::uint64_t>(v, key);
    } else if (key == "snr_db") {
      c.snr_db = get<double>(v, key);
    } else if (key == "radius") {
      const auto r = get<std::string>(v, key);
      if (r == "linearized") {
        c.radius = RadiusRule::linearized;
      } else if (r == "exact") {
        c.radius = RadiusRule::exact;
      } else {
        throw std::invalid_argument("radius must be linearized or exact");
      }
    } else if (key == "tf_dump") {
      c.tf_dump = get<bool>(v, key);
    } else if (key == "out_dir") {
      c.out_dir = get<std::string>(v, key);
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  RunConfig c;
  apply_json(c, doc);
  return c;
}

fs::path resolve_out_dir(const RunConfig& config, bool flag_given) {
  if (flag_given) return config.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return config.out_dir;
}

void validate(const RunConfig& c) {
  validate(WindowSpec{c.tau0, c.truncation});
  validate(c.threshold);
  if (c.oversampling < 1) throw std::invalid_argument("oversampling must be >= 1");
  if (c.k_expected && *c.k_expected < 0) throw std::invalid_argument("k_expected must be >= 0");
  if (c.sample_rate && !(*c.sample_rate > 0.0)) {
    throw std::invalid_argument("sample_rate must be positive");
  }
  const bool generated = is_generator(c.input);
  if (!generated && !fs::exists(c.input)) {
    throw std::invalid_argument("input '" + c.input +
                                "' is neither a generator name nor an existing file");
  }
  if (generated && c.truth) throw std::invalid_argument("truth file given for a generator input");
  if (c.truth && !fs::exists(*c.truth)) {
    throw std::invalid_argument("truth file '" + *c.truth + "' does not exist");
  }
  const bool has_truth = generated || c.truth;
  if (c.model == ModelSelect::lc_true && !has_truth) {
    throw std::invalid_argument("model lc-true-cr needs ground truth");
  }
  if (c.sigma == "sigma1" && !has_truth) {
    throw std::invalid_argument("sigma1 needs ground-truth instantaneous frequencies");
  }
}

SeparationConfig separation_config(const RunConfig& c) {
  SeparationConfig s;
  s.window = WindowSpec{c.tau0, c.truncation};
  s.oversampling = c.oversampling;
  s.threshold = c.threshold;
  s.k_expected = c.k_expected;
  s.trend = c.trend;
  return s;
}

json to_json(const RunConfig& c) {
  json j;
  j["input"] = c.input;
  j["complex"] = c.complex_input;
  j["truth"] = c.truth ? json(*c.truth) : json(nullptr);
  j["sample_rate"] = c.sample_rate ? json(*c.sample_rate) : json(nullptr);
  j["sigma"] = c.sigma;
  j["tau0"] = c.tau0;
  j["threshold"] = {
      {"mode", c.threshold.mode == ThresholdPolicy::Mode::relative ? "relative" : "absolute"},
      {"value", c.threshold.value}};
  j["k_expected"] = c.k_expected ? json(*c.k_expected) : json(nullptr);
  j["trend"] = c.trend;
  j["model"] = to_string(c.model);
  j["oversampling"] = c.oversampling;
  j["truncation"] = c.truncation;
  j["seed"] = c.seed;
  j["snr_db"] = c.snr_db ? json(*c.snr_db) : json(nullptr);
  j["radius"] = c.radius == RadiusRule::linearized ? "linearized" : "exact";
  j["tf_dump"] = c.tf_dump;
  return j;
}

}  // namespace astft::cli
