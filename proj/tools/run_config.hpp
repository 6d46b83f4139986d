#pragma once

#include "astft/bounds.hpp"
#include "astft/pipeline.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace astft::cli {

inline constexpr const char* kOutDirEnv = "ASTFT_OUT_DIR";

enum class ModelSelect { all, si, lc, lc_true };

// Everything a subcommand needs. Defaults are the library defaults.
struct RunConfig {
  std::string input = "two_lfm";  // generator name or signal CSV path
  bool complex_input = false;     // generators only
  std::optional<std::string> truth;  // ground-truth CSV for file inputs
  std::optional<double> sample_rate;
  std::string sigma = "0.0625";  // number, "sigma1", or a `t,sigma` CSV path
  double tau0 = 0.2;
  ThresholdPolicy threshold;
  std::optional<Index> k_expected;
  bool trend = false;
  ModelSelect model = ModelSelect::all;
  int oversampling = 4;
  double truncation = 5.0;
  std::uint64_t seed = 1;
  std::optional<double> snr_db;
  RadiusRule radius = RadiusRule::linearized;
  bool tf_dump = false;
  std::filesystem::path out_dir = "out";
};

ModelSelect parse_model(const std::string& s);
std::string to_string(ModelSelect model);

// Applies the keys of a JSON object; unknown keys and wrong types throw.
void apply_json(RunConfig& config, const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

// Out dir precedence: explicit flag, then the environment, then the config.
std::filesystem::path resolve_out_dir(const RunConfig& config, bool flag_given);

// Throws std::invalid_argument on inconsistent settings.
void validate(const RunConfig& config);

SeparationConfig separation_config(const RunConfig& config);
nlohmann::json to_json(const RunConfig& config);

bool is_generator(const std::string& input);

}  // namespace astft::cli
