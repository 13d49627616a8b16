#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "covertnet/harness.hpp"

using namespace covertnet;

namespace {

SweepSpec small_spec() {
  SweepSpec spec;
  spec.base.kappa = 0.5;
  spec.base.alpha = 3.0;
  spec.base.l_beta = 1.0;
  spec.base.seed = 123;
  spec.n_values = {1024.0, 2048.0};
  spec.schemes = {"mh"};
  spec.trials = 2;
  return spec;
}

}  // namespace

TEST_CASE("fit_exponent recovers exact power laws") {
  std::vector<double> ns = {1024, 4096, 16384, 65536};
  std::vector<double> ys;
  for (double n : ns) ys.push_back(3.0 * std::pow(n, 0.5));
  auto r = fit_exponent(ns, ys, 0.5, 0.01);
  CHECK(r.exponent == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.pass);

  std::vector<double> flat(ns.size(), 7.0);
  r = fit_exponent(ns, flat, 0.0, 0.01);
  CHECK(r.exponent == doctest::Approx(0.0));

  // Log correction divides out a known polylog factor.
  std::vector<double> with_logs;
  for (double n : ns) with_logs.push_back(std::pow(n, 0.25) * std::pow(std::log(n), 2.0));
  r = fit_exponent(ns, with_logs, 0.25, 0.01, 2.0);
  CHECK(r.exponent == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("fit_exponent excludes non-positive means and demands 3 points") {
  std::vector<double> ns = {1024, 2048, 4096, 8192};
  std::vector<double> ys = {0.0, 2.0, 3.0, 4.0};
  CHECK(fit_exponent(ns, ys, 0.0, 10.0).points == 3);
  std::vector<double> bad = {0.0, 0.0, 3.0, 4.0};
  CHECK_THROWS_AS(fit_exponent(ns, bad, 0.0, 1.0), ConfigError);
}

TEST_CASE("run_sweep is deterministic and embeds the config") {
  const SweepSpec spec = small_spec();
  const auto a = run_sweep(spec);
  const auto b = run_sweep(spec);
  const std::string ja = table_to_json(a).dump();
  const std::string jb = table_to_json(b).dump();
  CHECK(ja == jb);
  CHECK(table_to_json(a)["config"]["kappa"].get<double>() == 0.5);
  CHECK(table_to_json(a)["version"].get<std::string>() == std::string(kArtifactVersion));
  CHECK(a.rows.size() == 4);
}

TEST_CASE("parallel sweeps match the single-threaded result byte for byte") {
  SweepSpec spec = small_spec();
  const auto serial = run_sweep(spec);
  spec.jobs = 2;
  const auto parallel = run_sweep(spec);
  CHECK(table_to_json(serial).dump() == table_to_json(parallel).dump());
}

TEST_CASE("csv rows cover every scheme run") {
  SweepSpec spec = small_spec();
  spec.schemes = {"mh", "hc"};
  const auto table = run_sweep(spec);
  const std::string csv = table_to_csv(table);
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 1 + spec.n_values.size() * spec.trials * spec.schemes.size());
}

TEST_CASE("config json round-trips") {
  NetworkConfig cfg;
  cfg.n = 9999;
  cfg.kappa = 0.33;
  cfg.alpha = 3.25;
  cfg.delta = 0.07;
  cfg.l_beta = 1.5;
  cfg.seed = 424242;
  cfg.hc_depth = 7;
  const auto j = config_to_json(cfg);
  const NetworkConfig back = config_from_json(j);
  CHECK(back.n == cfg.n);
  CHECK(back.kappa == cfg.kappa);
  CHECK(back.alpha == cfg.alpha);
  CHECK(*back.l_beta == 1.5);
  CHECK(back.seed == cfg.seed);
  CHECK(back.hc_depth == 7);
}

TEST_CASE("invalid configs are rejected with ConfigError") {
  nlohmann::ordered_json j;
  j["kappa"] = 1.5;
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
  SweepSpec spec = small_spec();
  spec.trials = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = small_spec();
  spec.schemes = {"warp"};
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("trial seeds differ across indices but reproduce exactly") {
  CHECK(trial_seed(1, 0, 0) != trial_seed(1, 0, 1));
  CHECK(trial_seed(1, 0, 0) != trial_seed(1, 1, 0));
  CHECK(trial_seed(1, 2, 3) == trial_seed(1, 2, 3));
  CHECK(trial_seed(2, 2, 3) != trial_seed(1, 2, 3));
}

TEST_CASE("sweep rows carry bounds and regimes when requested") {
  SweepSpec spec = small_spec();
  spec.run_bounds = true;
  const auto table = run_sweep(spec);
  for (const auto& row : table.rows) {
    REQUIRE(row.bound.has_value());
    REQUIRE(row.regime.has_value());
    for (const auto& r : row.results) CHECK(r.throughput <= row.bound->total);
  }
}
