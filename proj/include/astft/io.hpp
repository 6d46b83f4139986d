#pragma once

#include "astft/bounds.hpp"
#include "astft/evaluation.hpp"
#include "astft/recovery.hpp"
#include "astft/ridge.hpp"
#include "astft/signal.hpp"
#include "astft/stft.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace astft::io {

namespace fs = std::filesystem;

// Shortest decimal that reads back to the same double.
std::string format_double(double v);

// Minimal CSV table: one header row, numeric or text cells, no quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  Index column(std::string_view name) const;  // throws when absent
  double number(std::size_t row, Index col) const;
};

CsvTable read_csv(const fs::path& path);

using AnySignal = std::variant<RealSignal, ComplexSignal>;

// `t,value` gives a real signal, `t,re,im` a complex one. The rate comes from
// the t column, which must be uniform.
AnySignal read_signal_csv(const fs::path& path);
void write_signal_csv(const fs::path& path, const RealSignal& signal);
void write_signal_csv(const fs::path& path, const ComplexSignal& signal);

// `t,k,A,if,cr,re,im`, one row per sample and component; k = 0 is the trend.
void write_truth_csv(const fs::path& path, const GroundTruth& truth);
GroundTruth read_truth_csv(const fs::path& path);

// `t,sigma` (or a single `sigma` column); length must equal n.
SigmaSeries read_sigma_csv(const fs::path& path, Index n);

void write_tf_csv(const fs::path& path, const TFMatrix& tf);
void write_ridge_csv(const fs::path& path, const RidgeSet& ridges, const Eigen::VectorXd& times);
void write_component_csv(const fs::path& path, const ComponentRecovery& recovery,
                         const RidgeSet& ridges, const Eigen::MatrixXd& r_tilde,
                         const Eigen::VectorXd& times);
void write_bounds_csv(const fs::path& path, const BoundReport& report);

// `t,model,l,abs_error` over the interior slice of every report.
void write_error_series_csv(const fs::path& path, const std::vector<const EvalReport*>& reports);

nlohmann::json to_json(const RunEcho& echo);
nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const SeparationConfig& config);

void write_json(const fs::path& path, const nlohmann::json& doc);

}  // namespace astft::io
