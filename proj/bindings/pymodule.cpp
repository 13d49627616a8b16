// Python bindings for the main operations: instance generation, the three
// schemes, the converse-side analytics, and the sweep/regression helpers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "covertnet/harness.hpp"
#include "covertnet/netgen.hpp"
#include "covertnet/preserve.hpp"
#include "covertnet/route.hpp"

namespace py = pybind11;
using namespace covertnet;

namespace {

NetworkConfig make_config(double n, double kappa, double alpha, double delta, double l,
                          std::optional<double> l_beta, double N0, double G, double B, double P,
                          std::optional<double> gamma, std::uint64_t seed,
                          std::optional<double> c_b, int hc_depth) {
  NetworkConfig cfg;
  cfg.n = n;
  cfg.kappa = kappa;
  cfg.alpha = alpha;
  cfg.delta = delta;
  cfg.l = l;
  cfg.l_beta = l_beta;
  cfg.N0 = N0;
  cfg.G = G;
  cfg.B = B;
  cfg.P = P;
  cfg.gamma = gamma;
  cfg.seed = seed;
  cfg.c_b = c_b;
  cfg.hc_depth = hc_depth;
  cfg.validate();
  return cfg;
}

py::dict result_dict(const SchemeResult& r) {
  py::dict d;
  d["scheme"] = r.scheme;
  d["n"] = r.n;
  d["rate_per_pair"] = r.rate_per_pair;
  d["throughput"] = r.throughput;
  d["outage_frac"] = r.outage_frac;
  d["n_l"] = r.n_l;
  d["n_w"] = r.n_w;
  d["pairs"] = r.pair_count;
  d["outage_pairs"] = r.outage_pairs;
  d["covert_pass"] = r.covert_pass;
  d["worst_kl"] = r.worst_kl;
  d["p_mh"] = r.budget.p_mh;
  d["p_hc_avg"] = r.budget.p_hc_avg;
  d["mimo_scale"] = r.budget.mimo_scale;
  d["M"] = r.M;
  d["exponent_b"] = r.exponent_b;
  d["degenerate"] = r.degenerate;
  d["max_load"] = r.max_load;
  return d;
}

}  // namespace

PYBIND11_MODULE(pycovertnet, m) {
  m.doc() = "Covert ad-hoc network throughput-scaling simulator";
  m.attr("__version__") = kArtifactVersion;

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init(&make_config), py::arg("n") = 4096.0, py::arg("kappa") = 0.5,
           py::arg("alpha") = 3.0, py::arg("delta") = 0.05, py::arg("l") = 4096.0,
           py::arg("l_beta") = std::nullopt, py::arg("N0") = 1.0, py::arg("G") = 1.0,
           py::arg("B") = 1.0, py::arg("P") = 1.0, py::arg("gamma") = std::nullopt,
           py::arg("seed") = 1, py::arg("c_b") = std::nullopt, py::arg("hc_depth") = 5)
      .def_readwrite("n", &NetworkConfig::n)
      .def_readwrite("kappa", &NetworkConfig::kappa)
      .def_readwrite("alpha", &NetworkConfig::alpha)
      .def_readwrite("delta", &NetworkConfig::delta)
      .def_readwrite("l", &NetworkConfig::l)
      .def_readwrite("seed", &NetworkConfig::seed)
      .def("resolved_l", &NetworkConfig::resolved_l)
      .def("resolved_gamma", &NetworkConfig::resolved_gamma);

  py::class_<NetworkInstance>(m, "NetworkInstance")
      .def_readonly("n_l", &NetworkInstance::n_l)
      .def_readonly("n_w", &NetworkInstance::n_w)
      .def_property_readonly("pairs", [](const NetworkInstance& i) { return i.pairs; })
      .def_property_readonly("legit",
                             [](const NetworkInstance& i) {
                               std::vector<std::pair<double, double>> pts;
                               for (const auto& p : i.legit) pts.emplace_back(p.x, p.y);
                               return pts;
                             })
      .def_property_readonly("wardens", [](const NetworkInstance& i) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : i.wardens) pts.emplace_back(p.x, p.y);
        return pts;
      });

  m.def("generate_instance", [](const NetworkConfig& cfg) {
    CounterRng rng(cfg.seed);
    return generate_instance(cfg, rng);
  });

  m.def("run_scheme", [](const std::string& name, const NetworkConfig& cfg,
                         const NetworkInstance& inst) {
    return result_dict(run_scheme(name, cfg, inst));
  });
  m.def("run_detoured_mh", [](const NetworkConfig& cfg, const NetworkInstance& inst) {
    return result_dict(run_detoured_mh(cfg, inst));
  });
  m.def("run_modified_hc", [](const NetworkConfig& cfg, const NetworkInstance& inst) {
    return result_dict(run_modified_hc(cfg, inst));
  });
  m.def("run_detoured_hybrid", [](const NetworkConfig& cfg, const NetworkInstance& inst) {
    return result_dict(run_detoured_hybrid(cfg, inst));
  });

  m.def("hc_exponent_recursion", &hc_exponent_recursion, py::arg("b0"), py::arg("gamma_p"),
        py::arg("iterations"));
  m.def("build_mimo_schedule", [](int M, int n_slots, double l) {
    const auto s = build_mimo_schedule(M, n_slots, l);
    return s.slots;
  });
  m.def("schedule_window_counts", [](std::vector<int> slots, int n_slots, double l) {
    MimoSchedule s{n_slots, l, std::move(slots)};
    return schedule_window_counts(s);
  });
  m.def("short_range_snr", &short_range_snr);
  m.def("necessary_inr", &necessary_inr);
  m.def("covert_power_mh", &covert_power_mh);
  m.def("hop_rate", [](double p, double n, const NetworkConfig& cfg) {
    return hop_rate(p, n, ChannelModel::from(cfg));
  });

  m.def("cutset_bound", [](const NetworkConfig& cfg, double n, double freeze_logs_at) {
    const auto b = cutset_bound(cfg, n, freeze_logs_at);
    py::dict d;
    d["W"] = b.W;
    d["W_scaled"] = b.W_scaled;
    d["miso_term"] = b.miso_term;
    d["transfer_term"] = b.transfer_term;
    d["total"] = b.total;
    d["p_cb"] = b.p_cb;
    d["p_cb_prime"] = b.p_cb_prime;
    d["branch"] = b.branch;
    d["assumes_equal_average_power"] = b.assumes_equal_average_power;
    return d;
  }, py::arg("cfg"), py::arg("n"), py::arg("freeze_logs_at") = 0.0);

  m.def("classify_regime", [](const NetworkConfig& cfg) {
    const auto rc = classify_regime(cfg);
    py::dict d;
    d["regime"] = rc.regime;
    d["scheme"] = rc.scheme;
    d["s_exponent"] = rc.s_exponent;
    d["s_vanishing"] = rc.s_vanishing;
    d["predicted_exponent"] = rc.predicted_exponent;
    return d;
  });

  m.def("fit_exponent", [](std::vector<double> ns, std::vector<double> means, double theory,
                           double tol, double log_correction) {
    const auto r = fit_exponent(ns, means, theory, tol, log_correction);
    py::dict d;
    d["exponent"] = r.exponent;
    d["stderr"] = r.stderr_;
    d["theory"] = r.theory;
    d["pass"] = r.pass;
    d["points"] = r.points;
    return d;
  }, py::arg("ns"), py::arg("means"), py::arg("theory"), py::arg("tol"),
     py::arg("log_correction") = 0.0);

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<CovertnessError>(m, "CovertnessError");
  py::register_exception<BoundViolationError>(m, "BoundViolationError");
}
