#pragma once

#include <optional>
#include <string>
#include <vector>

#include "covertnet/bounds.hpp"
#include "covertnet/config.hpp"
#include "covertnet/schemes.hpp"

#include "json.hpp"

namespace covertnet {

inline constexpr const char* kArtifactVersion = "covertnet 0.1.0-g1";

struct SweepSpec {
  std::vector<double> n_values;
  NetworkConfig base;                  // powers, l-law, seed, defaults
  // Optional grid axes; empty means "use the base value".
  std::vector<double> kappa_values;
  std::vector<double> alpha_values;
  std::vector<double> delta_values;
  std::vector<double> gamma_values;
  std::vector<std::string> schemes;    // subset of {mh, hc, hybrid}
  int trials = 1;
  int jobs = 1;
  bool run_bounds = true;
  std::string out_path;

  void validate() const;
  /// All (kappa, alpha, delta, gamma) combinations, base-filled when empty.
  std::vector<NetworkConfig> grid_points() const;
};

struct TrialRow {
  double n = 0.0;
  double kappa = 0.0, alpha = 0.0, delta = 0.0, gamma = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  int n_l = 0, n_w = 0;
  std::vector<SchemeResult> results;
  std::optional<CutsetBound> bound;
  std::optional<RegimeClassification> regime;
};

struct SweepTable {
  SweepSpec spec;
  std::vector<TrialRow> rows;
};

struct RegressionResult {
  double exponent = 0.0;  // fitted slope of log mean vs log n
  double stderr_ = 0.0;
  double theory = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  int points = 0;
};

SweepTable run_sweep(const SweepSpec& spec);

/// OLS slope of log(mean quantity) against log n. Non-positive means are
/// excluded; fewer than 3 surviving points is an error. log_correction
/// divides the quantity by (log n)^q before fitting.
RegressionResult fit_exponent(const std::vector<double>& n_values,
                              const std::vector<double>& means, double theory, double tolerance,
                              double log_correction = 0.0);

/// Per-n trial means of a quantity extracted from the table.
std::vector<double> trial_means(const SweepTable& table,
                                const std::function<double(const TrialRow&)>& quantity);

nlohmann::ordered_json config_to_json(const NetworkConfig& cfg);
NetworkConfig config_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json result_to_json(const SchemeResult& r);
nlohmann::ordered_json bound_to_json(const CutsetBound& b);
nlohmann::ordered_json regime_to_json(const RegimeClassification& r);
nlohmann::ordered_json table_to_json(const SweepTable& t);
std::string table_to_csv(const SweepTable& t);

/// Per-trial substream seed derivation: hash(master seed, n index, trial).
std::uint64_t trial_seed(std::uint64_t master, std::size_t n_index, int trial);

}  // namespace covertnet
