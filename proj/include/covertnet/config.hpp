#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace covertnet {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CovertnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All rates and KL values are in nats; logarithms are natural throughout.
struct NetworkConfig {
  double n = 4096.0;       // legitimate-node density per unit area
  double kappa = 0.5;      // warden density exponent, in (0,1)
  double alpha = 3.0;      // path-loss exponent, > 2
  double delta = 0.05;     // covertness budget in nats
  double l = 4096.0;       // warden observation window (channel uses)
  std::optional<double> l_beta;  // when set, l = n^l_beta
  double N0 = 1.0;         // noise power
  double G = 1.0;          // aggregate antenna/path constant
  double B = 1.0;          // bandwidth (cutset bound only)
  double P = 1.0;          // nominal per-node average power cap
  std::optional<double> gamma;  // preservation exponent; default kappa/2
  std::uint64_t seed = 1;

  // Artifact knobs (spec-level open parameters).
  std::optional<double> c_b;  // preservation width constant; auto by gamma
  int hc_depth = 5;           // HC recursion levels
  double converse_eps = 0.01; // the n^eps / n^{alpha(1/2+eps)} exponents

  double resolved_l() const {
    return l_beta ? std::max(1.0, std::round(std::pow(n, *l_beta))) : l;
  }

  double resolved_gamma() const { return gamma ? *gamma : kappa / 2.0; }

  /// 3*sqrt(2) makes the gamma = 1/2 region exactly nine cells; for smaller
  /// gamma the default keeps total preservation coverage well below the
  /// network area at simulable densities (see README).
  double resolved_c_b() const {
    if (c_b) return *c_b;
    return resolved_gamma() >= 0.5 - 1e-12 ? 3.0 * std::sqrt(2.0) : 0.04;
  }

  void validate() const {
    if (!std::isfinite(n) || n < 3.0) throw ConfigError("n must be finite and >= 3");
    if (!(kappa > 0.0 && kappa < 1.0)) throw ConfigError("kappa must lie in (0,1)");
    if (!(alpha > 2.0)) throw ConfigError("alpha must exceed 2");
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");
    if (resolved_l() < 1.0) throw ConfigError("l must be >= 1");
    if (!(N0 > 0.0) || !(G > 0.0) || !(B > 0.0) || !(P > 0.0))
      throw ConfigError("N0, G, B, P must be positive");
    const double g = resolved_gamma();
    if (!(g > kappa / 2.0 - 1e-12) || g > 0.5 + 1e-12)
      throw ConfigError("gamma must lie in (kappa/2, 1/2]");
  }
};

}  // namespace covertnet
