#pragma once

#include <string>
#include <vector>

#include "covertnet/bounds.hpp"
#include "covertnet/config.hpp"
#include "covertnet/netgen.hpp"
#include "covertnet/phy.hpp"
#include "covertnet/route.hpp"

namespace covertnet {

struct SchemeResult {
  std::string scheme;  // mh | hc | hybrid
  double n = 0.0;
  double rate_per_pair = 0.0;  // R, nats per channel use
  double throughput = 0.0;     // T = sum of R over non-outage pairs
  double outage_frac = 0.0;
  int n_l = 0, n_w = 0;
  int pair_count = 0, outage_pairs = 0;

  bool covert_pass = false;
  double worst_kl = 0.0;
  int worst_warden = -1;

  PowerBudget budget;
  double M = 0.0;            // cluster / cell size, where applicable
  int recursion_depth = 0;   // HC levels applied
  double exponent_b = 0.0;   // HC exponent after recursion
  bool degenerate = false;   // hybrid collapsed to MH
  int max_detour_depth = 0;
  bool detour_depth_flag = false;
  int max_load = 0;
};

struct HcRecursionState {
  double b = 0.0;        // exponent after the configured levels
  double gamma_p = 1.0;  // power cap P / n^{gamma_p}
  int iterations = 0;
  double M = 0.0;        // cluster size chosen at the last level
};

/// Iterates b <- gamma_p/(2-b) + 1 - gamma_p; returns the whole trajectory
/// including b0. Requires b0 < 1 and gamma_p >= 1.
std::vector<double> hc_exponent_recursion(double b0, double gamma_p, int iterations);

/// The modified-HC parameter block at density n: gamma_p from the nominal
/// average-power cap, the exponent after cfg.hc_depth levels from the TDMA
/// start, and the last level's cluster size.
HcRecursionState hc_recursion_state(const NetworkConfig& cfg, double n);

/// One cluster's M transmission slots spread as evenly as possible over
/// n_slots (Bresenham rounding). Every window of l slots then holds
/// floor(lM/n)-1 .. ceil(lM/n)+1 of them.
struct MimoSchedule {
  int n_slots = 0;
  double l = 0.0;
  std::vector<int> slots;
};

MimoSchedule build_mimo_schedule(int M, int n_slots, double l);

/// Min/max transmissions per circular window of l slots.
std::pair<int, int> schedule_window_counts(const MimoSchedule& s);

struct MimoPowerCheck {
  double m_with = 0.0;        // n^{3/(5-2b)}
  double exp_with = 0.0;      // 9/(10-4b) - 1/2
  double m_without = 0.0;     // n^{1/(2-b)}
  double exp_without = 0.0;   // 1/(2-b)
};

MimoPowerCheck mimo_power_check(double n, double b);

/// Iterate the one-level exponent map from b0; with_scaling selects the
/// down-scaled-power variant.
double iterate_throughput_map(double b0, int iterations, bool with_scaling);

SchemeResult run_detoured_mh(const NetworkConfig& cfg, const NetworkInstance& inst);
SchemeResult run_modified_hc(const NetworkConfig& cfg, const NetworkInstance& inst);
SchemeResult run_detoured_hybrid(const NetworkConfig& cfg, const NetworkInstance& inst);

SchemeResult run_scheme(const std::string& name, const NetworkConfig& cfg,
                        const NetworkInstance& inst);

/// Short-range SNR s(n) = n^{(1/2-kappa/2)(alpha-2)} / sqrt(l).
double short_range_snr(const NetworkConfig& cfg);

}  // namespace covertnet
