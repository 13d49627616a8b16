// Command-line front end: simulate | sweep | bound | regime | verify.
// Exit codes: 0 success, 1 configuration error, 2 covertness or bound
// violation. COVERTNET_LOG=debug enables progress chatter on stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "covertnet/harness.hpp"
#include "covertnet/netgen.hpp"
#include "covertnet/preserve.hpp"
#include "covertnet/route.hpp"

namespace {

bool log_enabled() {
  const char* v = std::getenv("COVERTNET_LOG");
  return v != nullptr && std::string(v) != "" && std::string(v) != "0";
}

void log_line(const std::string& msg) {
  if (log_enabled()) std::cerr << "[covertnet] " << msg << "\n";
}

struct CommonOpts {
  covertnet::NetworkConfig cfg;
  std::string config_path;
  std::string scheme = "all";
  int trials = 1;
  int jobs = 1;
  std::string out;
  std::string format = "json";
  std::vector<double> n_list;
  double l_flag = -1.0;
  double l_beta_flag = -1000.0;
  double gamma_flag = -1000.0;
  CLI::App* app = nullptr;
};

void add_common(CLI::App* app, CommonOpts& o) {
  o.app = app;
  app->add_option("--config", o.config_path, "JSON config file; flags override");
  app->add_option("--n", o.n_list, "legitimate-node density (repeatable for sweeps)");
  app->add_option("--kappa", o.cfg.kappa, "warden density exponent in (0,1)");
  app->add_option("--alpha", o.cfg.alpha, "path-loss exponent > 2");
  app->add_option("--delta", o.cfg.delta, "covertness budget (nats)");
  app->add_option("--l", o.l_flag, "warden observation window");
  app->add_option("--l-beta", o.l_beta_flag, "window law l = n^beta");
  app->add_option("--gamma", o.gamma_flag, "preservation exponent (default kappa/2)");
  app->add_option("--scheme", o.scheme, "mh|hc|hybrid|all")
      ->check(CLI::IsMember({"mh", "hc", "hybrid", "all"}));
  app->add_option("--trials", o.trials, "Monte Carlo trials per grid point");
  app->add_option("--seed", o.cfg.seed, "master RNG seed");
  app->add_option("--jobs", o.jobs, "parallel trial workers");
  app->add_option("--out", o.out, "output path (default stdout)");
  app->add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
}

covertnet::SweepSpec make_spec(const CommonOpts& o) {
  covertnet::SweepSpec spec;
  covertnet::NetworkConfig cfg = o.cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw covertnet::ConfigError("cannot open config file: " + o.config_path);
    nlohmann::ordered_json j;
    in >> j;
    cfg = covertnet::config_from_json(j);
    // Flags that were actually given override file values.
    if (o.app->count("--kappa")) cfg.kappa = o.cfg.kappa;
    if (o.app->count("--alpha")) cfg.alpha = o.cfg.alpha;
    if (o.app->count("--delta")) cfg.delta = o.cfg.delta;
    if (o.app->count("--seed")) cfg.seed = o.cfg.seed;
  }
  if (o.l_flag > 0.0) {
    cfg.l = o.l_flag;
    cfg.l_beta.reset();
  }
  if (o.l_beta_flag > -999.0) cfg.l_beta = o.l_beta_flag;
  if (o.gamma_flag > -999.0) cfg.gamma = o.gamma_flag;
  spec.base = cfg;
  spec.n_values = o.n_list.empty() ? std::vector<double>{cfg.n} : o.n_list;
  if (o.scheme == "all")
    spec.schemes = {"mh", "hc", "hybrid"};
  else
    spec.schemes = {o.scheme};
  spec.trials = o.trials;
  spec.jobs = o.jobs;
  return spec;
}

void emit(const covertnet::SweepTable& table, const CommonOpts& o) {
  const std::string payload = o.format == "csv"
                                  ? covertnet::table_to_csv(table)
                                  : covertnet::table_to_json(table).dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << payload;
  } else {
    std::ofstream out(o.out, std::ios::binary);
    out << payload;
    log_line("wrote " + o.out);
  }
}

int run_verify() {
  using namespace covertnet;
  int failures = 0;
  auto check = [&](bool ok, const std::string& name) {
    std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  NetworkConfig cfg;
  cfg.n = 2048;
  cfg.seed = 7;
  CounterRng rng(cfg.seed);
  const NetworkInstance inst = generate_instance(cfg, rng);
  const CellGrid grid = build_cell_grid(inst, cfg.n);
  std::size_t assigned = 0;
  for (const auto& cell : grid.occupancy) assigned += cell.size();
  check(assigned == inst.legit.size(), "cell occupancy partitions the nodes");

  CounterRng rng2(cfg.seed);
  const NetworkInstance again = generate_instance(cfg, rng2);
  bool same = again.n_l == inst.n_l && again.n_w == inst.n_w;
  for (int i = 0; same && i < inst.n_l; ++i)
    same = again.legit[i].x == inst.legit[i].x && again.legit[i].y == inst.legit[i].y;
  check(same, "instances are reproducible from the seed");

  const auto regions = build_regions(inst.wardens, cfg, grid);
  const double b = preservation_width_cells(cfg, grid) * grid.side;
  const auto expanded = expand_all(cluster_regions(regions, preservation_formula_width(cfg)), regions, grid);
  const auto obstacles = make_obstacles(expanded, grid, b);
  const RoutePlan plan = detour_paths(build_direct_paths(inst, grid), obstacles, inst, grid);
  bool clean = true;
  for (const auto& path : plan.paths)
    for (std::size_t k = 1; k + 1 < path.size(); ++k)
      if (obstacles.blocked(path[k])) clean = false;
  check(clean, "relays stay outside every expanded region");

  std::size_t total_len = 0;
  long total_load = 0;
  for (const auto& path : plan.paths) total_len += path.size();
  for (int v : plan.load) total_load += v;
  check(total_load == static_cast<long>(total_len), "load conserves path length");

  const auto seq = hc_exponent_recursion(-0.25, 1.25, 200);
  check(std::fabs(seq.back() - 0.75) < 1e-9, "HC recursion reaches 2 - gamma_p");

  const auto sched = build_mimo_schedule(64, 4096, 512);
  const auto counts = schedule_window_counts(sched);
  check(counts.first >= 7 && counts.second <= 9, "MIMO schedule windows stay within +-1");

  const auto kl = kl_square_identity(
      [](double x) { return 2.0 * x * std::exp(-x * x); },
      [](double x) { return x * std::exp(-x * x / 2.0); }, 14.0);
  check(std::fabs(kl.kl_raw - kl.kl_squared) < 1e-3, "KL is invariant under squaring");

  std::cout << (failures == 0 ? "verify: all invariants hold\n"
                              : "verify: " + std::to_string(failures) + " failure(s)\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covert ad-hoc network throughput-scaling simulator"};
  app.require_subcommand(1);

  CommonOpts sim_opts, sweep_opts, bound_opts, regime_opts;
  std::string sweep_file;

  CLI::App* sim = app.add_subcommand("simulate", "run schemes on one configuration");
  add_common(sim, sim_opts);
  CLI::App* sweep = app.add_subcommand("sweep", "run a sweep specification");
  add_common(sweep, sweep_opts);
  sweep->add_option("--spec", sweep_file, "sweep spec JSON (n_values, config, schemes, trials)");
  CLI::App* bound = app.add_subcommand("bound", "cutset bound and necessary condition only");
  add_common(bound, bound_opts);
  CLI::App* regime = app.add_subcommand("regime", "operating-regime classification table");
  add_common(regime, regime_opts);
  app.add_subcommand("verify", "run the invariant suite");

  try {
    app.parse(argc, argv);

    if (app.got_subcommand("verify")) return run_verify();

    if (app.got_subcommand("simulate")) {
      auto spec = make_spec(sim_opts);
      log_line("simulate: " + std::to_string(spec.n_values.size()) + " point(s)");
      emit(covertnet::run_sweep(spec), sim_opts);
      return 0;
    }
    if (app.got_subcommand("sweep")) {
      covertnet::SweepSpec spec;
      if (!sweep_file.empty()) {
        std::ifstream in(sweep_file);
        if (!in) throw covertnet::ConfigError("cannot open sweep spec: " + sweep_file);
        nlohmann::ordered_json j;
        in >> j;
        spec.base = covertnet::config_from_json(j.at("config"));
        spec.n_values = j.at("n_values").get<std::vector<double>>();
        spec.kappa_values = j.value("kappa_values", std::vector<double>{});
        spec.alpha_values = j.value("alpha_values", std::vector<double>{});
        spec.delta_values = j.value("delta_values", std::vector<double>{});
        spec.gamma_values = j.value("gamma_values", std::vector<double>{});
        spec.schemes = j.value("schemes", std::vector<std::string>{"mh", "hc", "hybrid"});
        spec.trials = j.value("trials", 1);
        spec.jobs = j.value("jobs", 1);
      } else {
        spec = make_spec(sweep_opts);
      }
      if (sweep_opts.jobs > 1) spec.jobs = sweep_opts.jobs;
      emit(covertnet::run_sweep(spec), sweep_opts);
      return 0;
    }
    if (app.got_subcommand("bound")) {
      auto spec = make_spec(bound_opts);
      nlohmann::ordered_json j;
      j["version"] = covertnet::kArtifactVersion;
      j["config"] = covertnet::config_to_json(spec.base);
      j["necessary_inr"] =
          covertnet::necessary_inr(spec.base.delta, spec.base.resolved_l());
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (double n : spec.n_values) {
        nlohmann::ordered_json row;
        row["n"] = n;
        row["bound"] = covertnet::bound_to_json(covertnet::cutset_bound(spec.base, n));
        rows.push_back(row);
      }
      j["rows"] = rows;
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (app.got_subcommand("regime")) {
      auto spec = make_spec(regime_opts);
      nlohmann::ordered_json j;
      j["version"] = covertnet::kArtifactVersion;
      j["config"] = covertnet::config_to_json(spec.base);
      j["regime"] = covertnet::regime_to_json(covertnet::classify_regime(spec.base));
      std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const covertnet::CovertnessError& e) {
    std::cerr << "covertness error: " << e.what() << "\n";
    return 2;
  } catch (const covertnet::BoundViolationError& e) {
    std::cerr << "bound violation: " << e.what() << "\n";
    return 2;
  } catch (const covertnet::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
