#include "doctest.h"

#include "run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <unistd.h>

using namespace astft;
using namespace astft::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_file(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / ("astft_cfg_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("defaults are the library defaults") {
  const RunConfig c;
  const SeparationConfig s = separation_config(c);
  CHECK(s.window.tau0 == 0.2);
  CHECK(s.window.truncation == 5.0);
  CHECK(s.oversampling == 4);
  CHECK(s.threshold.mode == ThresholdPolicy::Mode::relative);
  CHECK(s.threshold.value == 0.3);
  CHECK_FALSE(s.k_expected);
  CHECK(c.sigma == "0.0625");
  CHECK(c.model == ModelSelect::all);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("model names") {
  CHECK(parse_model("si") == ModelSelect::si);
  CHECK(parse_model("lc") == ModelSelect::lc);
  CHECK(parse_model("lc-true-cr") == ModelSelect::lc_true);
  CHECK(parse_model("all") == ModelSelect::all);
  CHECK_THROWS_AS(parse_model("lc_true"), std::invalid_argument);
  for (auto m : {ModelSelect::all, ModelSelect::si, ModelSelect::lc, ModelSelect::lc_true}) {
    CHECK(parse_model(to_string(m)) == m);
  }
}

TEST_CASE("JSON config keys") {
  RunConfig c;
  apply_json(c, json::parse(R"({
    "input": "one_chirp", "complex": true, "sigma": 0.05, "tau0": 0.15,
    "threshold": {"mode": "absolute", "value": 0.4}, "k_expected": 1, "trend": false,
    "model": "lc", "oversampling": 2, "truncation": 6, "seed": 9, "snr_db": 10,
    "radius": "exact", "tf_dump": true, "out_dir": "elsewhere"
  })"));
  CHECK(c.input == "one_chirp");
  CHECK(c.complex_input);
  CHECK(c.sigma == "0.05");
  CHECK(c.tau0 == 0.15);
  CHECK(c.threshold.mode == ThresholdPolicy::Mode::absolute);
  CHECK(c.threshold.value == 0.4);
  CHECK(*c.k_expected == 1);
  CHECK(c.model == ModelSelect::lc);
  CHECK(c.oversampling == 2);
  CHECK(c.truncation == 6.0);
  CHECK(c.seed == 9u);
  CHECK(*c.snr_db == 10.0);
  CHECK(c.radius == RadiusRule::exact);
  CHECK(c.tf_dump);
  CHECK(c.out_dir == "elsewhere");

  RunConfig partial;
  apply_json(partial, json::parse(R"({"sigma": "sigma1"})"));
  CHECK(partial.sigma == "sigma1");
  CHECK(partial.input == "two_lfm");
}

TEST_CASE("bad JSON configs") {
  RunConfig c;
  CHECK_THROWS_AS(apply_json(c, json::parse(R"({"sigmaa": 1})")), std::invalid_argument);
  CHECK_THROWS_AS(apply_json(c, json::parse(R"({"tau0": "big"})")), std::invalid_argument);
  CHECK_THROWS_AS(apply_json(c, json::parse(R"({"threshold": 0.3})")), std::invalid_argument);
  CHECK_THROWS_AS(apply_json(c, json::parse(R"({"threshold": {"mode": "loose"}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_json(c, json::parse(R"({"radius": "wide"})")), std::invalid_argument);
  CHECK_THROWS_AS(apply_json(c, json::parse(R"({"tau0": null})")), std::invalid_argument);
  CHECK_THROWS_AS(apply_json(c, json::parse("[1, 2]")), std::invalid_argument);

  CHECK_THROWS_AS(load_config(scratch_file("broken.json", "{ nope")), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), std::invalid_argument);
  const auto good = load_config(scratch_file("good.json", R"({"seed": 4})"));
  CHECK(good.seed == 4u);
}

TEST_CASE("echoed config loads back") {
  RunConfig c;
  c.input = "one_cosine";
  c.k_expected = 1;
  c.snr_db = 15.0;
  RunConfig back;
  apply_json(back, to_json(c));
  CHECK(to_json(back) == to_json(c));
  RunConfig unset;
  apply_json(unset, to_json(RunConfig{}));
  CHECK_FALSE(unset.k_expected);
  CHECK_FALSE(unset.snr_db);
}

TEST_CASE("output directory precedence: flag, environment, config") {
  RunConfig c;
  c.out_dir = "from_config";
  ::unsetenv(kOutDirEnv);
  CHECK(resolve_out_dir(c, false) == "from_config");
  ::setenv(kOutDirEnv, "from_env", 1);
  CHECK(resolve_out_dir(c, false) == "from_env");
  CHECK(resolve_out_dir(c, true) == "from_config");
  ::setenv(kOutDirEnv, "", 1);
  CHECK(resolve_out_dir(c, false) == "from_config");
  ::unsetenv(kOutDirEnv);
}

TEST_CASE("consistency checks") {
  RunConfig c;
  c.input = "/nonexistent/signal.csv";
  CHECK_THROWS_AS(validate(c), std::invalid_argument);

  const auto signal = scratch_file("sig.csv", "t,value\n0,1\n");
  c.input = signal.string();
  CHECK_NOTHROW(validate(c));
  c.model = ModelSelect::lc_true;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.model = ModelSelect::lc;
  c.sigma = "sigma1";
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.truth = scratch_file("truth.csv", "t,k,A,if,cr,re,im\n").string();
  CHECK_NOTHROW(validate(c));
  c.model = ModelSelect::lc_true;
  CHECK_NOTHROW(validate(c));
  c.truth = "/nonexistent/truth.csv";
  CHECK_THROWS_AS(validate(c), std::invalid_argument);

  RunConfig gen;
  gen.truth = signal.string();
  CHECK_THROWS_AS(validate(gen), std::invalid_argument);

  RunConfig bad;
  bad.tau0 = 1.5;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = RunConfig{};
  bad.oversampling = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = RunConfig{};
  bad.threshold = ThresholdPolicy::relative(1.2);
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = RunConfig{};
  bad.sample_rate = -1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);

  CHECK(is_generator("two_lfm"));
  CHECK_FALSE(is_generator("two_lfm.csv"));
  fs::remove_all(signal.parent_path());
}
