#pragma once

#include <functional>
#include <string>
#include <vector>

#include "covertnet/config.hpp"

namespace covertnet {

struct SchemeResult;  // schemes.hpp

struct CutsetBound {
  double W = 0.0;        // cut strip width (unit-square length)
  double W_scaled = 1.0; // width in nearest-neighbor units, W * sqrt(n)
  double miso_term = 0.0;
  double transfer_term = 0.0;
  double total = 0.0;    // upper bound on T, already scaled x4 from T_cut
  double p_cb = 0.0;
  double p_cb_prime = 0.0;  // n^{alpha/2} P_CB / (N0 B)
  std::string branch;    // "miso+transfer" or "transfer"
  // The converse assumes every active LN spends the same average power over
  // any l-window; every report carries the flag.
  bool assumes_equal_average_power = true;
};

struct RegimeClassification {
  std::string regime;        // hc-vanishing | hc-nonvanishing | mh | hybrid
  std::string scheme;        // mh | hc | hybrid
  double s_exponent = 0.0;   // d log s / d log n under the configured l-law
  bool s_vanishing = false;
  double predicted_exponent = 0.0;
};

/// sqrt(2) sqrt(delta/l): the admissible window-averaged INR at any warden.
double necessary_inr(double delta, double l);

/// Converse-side per-node average power cap (calibrated constant c).
double converse_power_cap(const NetworkConfig& cfg, double n);

/// Cutset upper bound at density n. When freeze_logs_at > 0, every
/// logarithmic factor is evaluated at that density instead, leaving the pure
/// power law for exponent regressions.
CutsetBound cutset_bound(const NetworkConfig& cfg, double n, double freeze_logs_at = 0.0);

RegimeClassification classify_regime(const NetworkConfig& cfg);

struct KlPair {
  double kl_raw = 0.0;
  double kl_squared = 0.0;
};

/// Numerically evaluates D(f_Z || f_N) and D(f_{Z^2} || f_{N^2}) by adaptive
/// quadrature over [0, hi]; the squared densities are derived by the exact
/// change of variables. Divergent integrands report infinity.
KlPair kl_square_identity(const std::function<double(double)>& f_z,
                          const std::function<double(double)>& f_n, double hi);

struct BoundComparison {
  std::vector<double> throughputs;
  double bound_total = 0.0;
  std::vector<double> gap_factors;  // bound / T
};

/// Asserts every scheme throughput is below the cutset total; a violation is
/// a hard error (miscalibrated constants or a bug).
BoundComparison achievability_vs_bound(const std::vector<SchemeResult>& results,
                                       const CutsetBound& bound);

}  // namespace covertnet
