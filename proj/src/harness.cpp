#include "covertnet/harness.hpp"

#include <atomic>
#include <mutex>
#include <cmath>
#include <sstream>
#include <thread>

#include "covertnet/netgen.hpp"

namespace covertnet {

using nlohmann::ordered_json;

void SweepSpec::validate() const {
  base.validate();
  if (n_values.empty()) throw ConfigError("sweep needs at least one n value");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  for (const auto& s : schemes)
    if (s != "mh" && s != "hc" && s != "hybrid") throw ConfigError("unknown scheme: " + s);
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t n_index, int trial) {
  return CounterRng::derive_stream(master, n_index, static_cast<std::uint64_t>(trial));
}

std::vector<NetworkConfig> SweepSpec::grid_points() const {
  auto axis = [](const std::vector<double>& v, double fallback) {
    return v.empty() ? std::vector<double>{fallback} : v;
  };
  // Gamma stays unresolved unless listed, so the kappa/2 default tracks each
  // grid point's kappa.
  std::vector<std::optional<double>> gammas;
  if (gamma_values.empty())
    gammas.push_back(base.gamma);
  else
    for (double g : gamma_values) gammas.emplace_back(g);
  std::vector<NetworkConfig> out;
  for (double kappa : axis(kappa_values, base.kappa))
    for (double alpha : axis(alpha_values, base.alpha))
      for (double delta : axis(delta_values, base.delta))
        for (const auto& gamma : gammas) {
          NetworkConfig cfg = base;
          cfg.kappa = kappa;
          cfg.alpha = alpha;
          cfg.delta = delta;
          cfg.gamma = gamma;
          out.push_back(cfg);
        }
  return out;
}

SweepTable run_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepTable table;
  table.spec = spec;
  const std::vector<NetworkConfig> grid = spec.grid_points();
  const std::size_t per_point = static_cast<std::size_t>(spec.trials);
  const std::size_t total = spec.n_values.size() * grid.size() * per_point;
  table.rows.resize(total);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total || failed.load()) return;
      try {
        const std::size_t gi = i / (spec.n_values.size() * per_point);
        const std::size_t rem = i % (spec.n_values.size() * per_point);
        const std::size_t ni = rem / per_point;
        const int trial = static_cast<int>(rem % per_point);
        NetworkConfig cfg = grid[gi];
        cfg.n = spec.n_values[ni];
        cfg.validate();
        TrialRow& row = table.rows[i];
        row.n = cfg.n;
        row.kappa = cfg.kappa;
        row.alpha = cfg.alpha;
        row.delta = cfg.delta;
        row.gamma = cfg.resolved_gamma();
        row.trial = trial;
        row.seed = trial_seed(spec.base.seed, gi * spec.n_values.size() + ni, trial);
        CounterRng rng(row.seed);
        const NetworkInstance inst = generate_instance(cfg, rng);
        row.n_l = inst.n_l;
        row.n_w = inst.n_w;
        for (const auto& s : spec.schemes) row.results.push_back(run_scheme(s, cfg, inst));
        if (spec.run_bounds) {
          row.bound = cutset_bound(cfg, cfg.n);
          row.regime = classify_regime(cfg);
          achievability_vs_bound(row.results, *row.bound);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return table;
}

RegressionResult fit_exponent(const std::vector<double>& n_values,
                              const std::vector<double>& means, double theory, double tolerance,
                              double log_correction) {
  if (n_values.size() != means.size()) throw ConfigError("fit_exponent: size mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (!(means[i] > 0.0)) continue;
    xs.push_back(std::log(n_values[i]));
    ys.push_back(std::log(means[i]) - log_correction * std::log(std::log(n_values[i])));
  }
  if (xs.size() < 3) throw ConfigError("fit_exponent needs >= 3 positive points");

  const std::size_t m = xs.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  RegressionResult r;
  r.points = static_cast<int>(m);
  r.exponent = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double pred = my + r.exponent * (xs[i] - mx);
    ss_res += (ys[i] - pred) * (ys[i] - pred);
  }
  r.stderr_ = m > 2 ? std::sqrt(ss_res / (m - 2) / sxx) : 0.0;
  r.theory = theory;
  r.tolerance = tolerance;
  r.pass = std::fabs(r.exponent - theory) <= tolerance;
  return r;
}

std::vector<double> trial_means(const SweepTable& table,
                                const std::function<double(const TrialRow&)>& quantity) {
  // Means per n value, averaged over trials and any grid axes.
  std::vector<double> sums(table.spec.n_values.size(), 0.0);
  std::vector<int> counts(table.spec.n_values.size(), 0);
  for (const TrialRow& row : table.rows) {
    for (std::size_t ni = 0; ni < table.spec.n_values.size(); ++ni)
      if (table.spec.n_values[ni] == row.n) {
        sums[ni] += quantity(row);
        ++counts[ni];
        break;
      }
  }
  for (std::size_t ni = 0; ni < sums.size(); ++ni)
    if (counts[ni] > 0) sums[ni] /= counts[ni];
  return sums;
}

ordered_json config_to_json(const NetworkConfig& cfg) {
  ordered_json j;
  j["n"] = cfg.n;
  j["kappa"] = cfg.kappa;
  j["alpha"] = cfg.alpha;
  j["delta"] = cfg.delta;
  if (cfg.l_beta)
    j["l_beta"] = *cfg.l_beta;
  else
    j["l"] = cfg.l;
  j["N0"] = cfg.N0;
  j["G"] = cfg.G;
  j["B"] = cfg.B;
  j["P"] = cfg.P;
  j["gamma"] = cfg.resolved_gamma();
  j["c_b"] = cfg.resolved_c_b();
  j["hc_depth"] = cfg.hc_depth;
  j["converse_eps"] = cfg.converse_eps;
  j["seed"] = cfg.seed;
  return j;
}

NetworkConfig config_from_json(const ordered_json& j) {
  NetworkConfig cfg;
  if (j.contains("n")) cfg.n = j["n"].get<double>();
  if (j.contains("kappa")) cfg.kappa = j["kappa"].get<double>();
  if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
  if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
  if (j.contains("l")) cfg.l = j["l"].get<double>();
  if (j.contains("l_beta")) cfg.l_beta = j["l_beta"].get<double>();
  if (j.contains("N0")) cfg.N0 = j["N0"].get<double>();
  if (j.contains("G")) cfg.G = j["G"].get<double>();
  if (j.contains("B")) cfg.B = j["B"].get<double>();
  if (j.contains("P")) cfg.P = j["P"].get<double>();
  if (j.contains("gamma")) cfg.gamma = j["gamma"].get<double>();
  if (j.contains("c_b")) cfg.c_b = j["c_b"].get<double>();
  if (j.contains("hc_depth")) cfg.hc_depth = j["hc_depth"].get<int>();
  if (j.contains("converse_eps")) cfg.converse_eps = j["converse_eps"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  cfg.validate();
  return cfg;
}

ordered_json result_to_json(const SchemeResult& r) {
  ordered_json j;
  j["scheme"] = r.scheme;
  j["n"] = r.n;
  j["rate_per_pair"] = r.rate_per_pair;
  j["throughput"] = r.throughput;
  j["outage_frac"] = r.outage_frac;
  j["n_l"] = r.n_l;
  j["n_w"] = r.n_w;
  j["pairs"] = r.pair_count;
  j["outage_pairs"] = r.outage_pairs;
  j["covert_pass"] = r.covert_pass;
  j["worst_kl"] = r.worst_kl;
  j["worst_warden"] = r.worst_warden;
  j["p_mh"] = r.budget.p_mh;
  j["p_hc_avg"] = r.budget.p_hc_avg;
  j["mimo_scale"] = r.budget.mimo_scale;
  j["M"] = r.M;
  j["recursion_depth"] = r.recursion_depth;
  j["exponent_b"] = r.exponent_b;
  j["degenerate"] = r.degenerate;
  j["max_detour_depth"] = r.max_detour_depth;
  j["max_load"] = r.max_load;
  j["detour_depth_flag"] = r.detour_depth_flag;
  return j;
}

ordered_json bound_to_json(const CutsetBound& b) {
  ordered_json j;
  j["W"] = b.W;
  j["W_scaled"] = b.W_scaled;
  j["miso_term"] = b.miso_term;
  j["transfer_term"] = b.transfer_term;
  j["total"] = b.total;
  j["p_cb"] = b.p_cb;
  j["p_cb_prime"] = b.p_cb_prime;
  j["branch"] = b.branch;
  j["assumes_equal_average_power"] = b.assumes_equal_average_power;
  return j;
}

ordered_json regime_to_json(const RegimeClassification& r) {
  ordered_json j;
  j["regime"] = r.regime;
  j["scheme"] = r.scheme;
  j["s_exponent"] = r.s_exponent;
  j["s_vanishing"] = r.s_vanishing;
  j["predicted_exponent"] = r.predicted_exponent;
  return j;
}

ordered_json table_to_json(const SweepTable& t) {
  ordered_json j;
  j["version"] = kArtifactVersion;
  j["config"] = config_to_json(t.spec.base);
  j["n_values"] = t.spec.n_values;
  j["schemes"] = t.spec.schemes;
  j["trials"] = t.spec.trials;
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json rj;
    rj["n"] = row.n;
    rj["kappa"] = row.kappa;
    rj["alpha"] = row.alpha;
    rj["delta"] = row.delta;
    rj["gamma"] = row.gamma;
    rj["trial"] = row.trial;
    rj["seed"] = row.seed;
    rj["n_l"] = row.n_l;
    rj["n_w"] = row.n_w;
    ordered_json results = ordered_json::array();
    for (const auto& r : row.results) results.push_back(result_to_json(r));
    rj["results"] = results;
    if (row.bound) rj["bound"] = bound_to_json(*row.bound);
    if (row.regime) rj["regime"] = regime_to_json(*row.regime);
    rows.push_back(rj);
  }
  j["rows"] = rows;
  return j;
}

std::string table_to_csv(const SweepTable& t) {
  std::ostringstream os;
  os.precision(17);
  os << "n,kappa,alpha,delta,gamma,trial,seed,n_l,n_w,scheme,throughput,rate_per_pair,outage_frac,worst_kl,"
        "covert_pass,M,max_load,bound_total\n";
  for (const auto& row : t.rows)
    for (const auto& r : row.results) {
      os << row.n << ',' << row.kappa << ',' << row.alpha << ',' << row.delta << ','
         << row.gamma << ',' << row.trial << ',' << row.seed << ',' << row.n_l << ',' << row.n_w
         << ',' << r.scheme << ',' << r.throughput << ',' << r.rate_per_pair << ','
         << r.outage_frac << ',' << r.worst_kl << ',' << (r.covert_pass ? 1 : 0) << ',' << r.M
         << ',' << r.max_load << ',' << (row.bound ? row.bound->total : 0.0) << '\n';
    }
  return os.str();
}

}  // namespace covertnet
