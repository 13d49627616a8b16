#pragma once

#include <vector>

#include "covertnet/config.hpp"
#include "covertnet/netgen.hpp"

namespace covertnet {

struct ChannelModel {
  double G = 1.0;
  double alpha = 3.0;
  double N0 = 1.0;

  double gain(double d) const { return G * std::pow(d, -alpha); }

  static ChannelModel from(const NetworkConfig& cfg) { return {cfg.G, cfg.alpha, cfg.N0}; }
};

struct PowerBudget {
  double p_mh = 0.0;      // per-symbol MH power
  double p_hc_avg = 0.0;  // HC average-power cap over any l-window
  double mimo_scale = 0.0;  // sqrt(M/n) applied to MIMO symbol power
};

/// Worst-case adjacent-cell SNR under the cell tessellation for density n.
double snr_hop(double p, double n, const ChannelModel& ch);

/// sum_{i=1..n} 8 i (3i-2)^{-alpha}, the 9-TDMA interfering-group series.
double inr_series(double alpha, double n);

/// Explicit interference-to-noise bound at a legitimate receiver.
double inr_bound_legit(double p, double n, const ChannelModel& ch);

/// inr_bound_legit / snr_hop; independent of p.
double inr_snr_ratio(double n, const ChannelModel& ch);

/// (1/9) log(1 + SNR_hop / (1 + INR)), nats per channel use.
double hop_rate(double p, double n, const ChannelModel& ch);

/// Calibrated constant k of the MH covert power budget. Fixed across n by
/// taking the tightest admissible value over the desk sweep; scales as N0/G.
double mh_power_constant(const NetworkConfig& cfg);

/// P_MH = k n^{(1/2-kappa/2)(alpha-2)} sqrt(delta/l) (sqrt(2 log n / n))^alpha.
double covert_power_mh(const NetworkConfig& cfg);

/// Sum over active cells of gain(max(distance to nearest cell corner,
/// d_floor)) * p: the conservative per-slot interference seen by a warden.
double warden_interference(const Vec2& warden, const std::vector<int>& active_cells, double p,
                           const CellGrid& grid, const ChannelModel& ch, double d_floor);

/// gains[w][c] = gain(max(dist(warden w, nearest corner of cell c), d_floor));
/// shared by every per-warden accounting pass over one instance.
std::vector<std::vector<double>> warden_gain_table(const std::vector<Vec2>& wardens,
                                                   const CellGrid& grid, const ChannelModel& ch,
                                                   double d_floor);

struct WardenKl {
  double max_window_inr = 0.0;  // max_t I_t / N0 over any window
  double kl_sum = 0.0;          // (1/2) sum_t (I_t/N0)^2, worst window
  double kl_max_form = 0.0;     // (l/2) (max I / N0)^2
  bool pass = true;             // kl_sum <= delta
};

struct CovertnessReport {
  std::vector<WardenKl> wardens;
  bool pass = true;
  int worst_warden = -1;
  double worst_kl = 0.0;
};

/// Worst circular window sum of squares for a periodic per-slot trace.
double worst_window_sq_sum(const std::vector<double>& period_trace, double l);

/// KL covertness evaluation for periodic per-slot interference traces, one
/// per warden. The binding bound is the per-window sum form; the max form is
/// carried alongside.
CovertnessReport kl_report(const std::vector<std::vector<double>>& period_traces, double l,
                           double N0, double delta);

CovertnessReport make_report(std::vector<WardenKl> wardens, double delta);

}  // namespace covertnet
