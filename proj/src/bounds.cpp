#include "covertnet/bounds.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "covertnet/schemes.hpp"

namespace covertnet {

namespace {

double short_range_exponent(const NetworkConfig& cfg) {
  return (0.5 - cfg.kappa / 2.0) * (cfg.alpha - 2.0);
}

// Ring-sum calibration of the converse constant at a fixed reference scale:
// the lower-bound interference of the converse proof meets the necessary INR
// with equality there.
double converse_constant(const NetworkConfig& cfg) {
  static std::mutex mu;
  static std::map<std::pair<double, double>, double> cache;
  const auto key = std::make_pair(cfg.kappa, cfg.alpha);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second * cfg.N0 / cfg.G;
  }
  const double n_ref = 4096.0;
  const double sp = short_range_exponent(cfg);
  const double side = std::sqrt(2.0 * std::log(n_ref) / n_ref);
  const long i0 = std::max(1L, std::lround(std::pow(n_ref, 0.5 - cfg.kappa / 2.0)));
  const long i1 = std::max(i0, std::lround(std::sqrt(n_ref / std::log(n_ref))));
  double ring_sum = 0.0;
  for (long i = i0; i <= i1; ++i)
    ring_sum += 16.0 * i * std::log(n_ref) * std::pow(i * side, -cfg.alpha);
  const double p1 = std::pow(n_ref, sp) / std::log(n_ref) *
                    std::pow(2.0 * std::log(n_ref) / n_ref, cfg.alpha / 2.0);
  const double c_unit = std::sqrt(2.0) / (p1 * ring_sum);
  {
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = c_unit;
  }
  return c_unit * cfg.N0 / cfg.G;
}

}  // namespace

double necessary_inr(double delta, double l) {
  if (delta < 0.0 || l < 1.0) throw ConfigError("necessary_inr needs delta >= 0 and l >= 1");
  return std::sqrt(2.0) * std::sqrt(delta / l);
}

double converse_power_cap(const NetworkConfig& cfg, double n) {
  const double sp = short_range_exponent(cfg);
  NetworkConfig at = cfg;
  at.n = n;
  const double l = at.resolved_l();
  return converse_constant(cfg) * std::pow(n, sp) / std::log(n) * std::sqrt(cfg.delta / l) *
         std::pow(2.0 * std::log(n) / n, cfg.alpha / 2.0);
}

CutsetBound cutset_bound(const NetworkConfig& cfg, double n, double freeze_logs_at) {
  if (cfg.alpha <= 2.0) throw std::domain_error("cutset bound requires alpha > 2");
  const double nl = freeze_logs_at > 0.0 ? freeze_logs_at : n;  // log-factor scale
  const double sp = short_range_exponent(cfg);
  NetworkConfig at = cfg;
  at.n = n;
  const double l = at.resolved_l();
  const double eps = cfg.converse_eps;

  CutsetBound cb;
  cb.p_cb = converse_constant(cfg) * std::pow(n, sp) / std::log(nl) * std::sqrt(cfg.delta / l) *
            std::pow(2.0 * std::log(nl), cfg.alpha / 2.0) * std::pow(n, -cfg.alpha / 2.0);
  cb.p_cb_prime = std::pow(n, cfg.alpha / 2.0) * cb.p_cb / (cfg.N0 * cfg.B);

  const double sqrt_n = std::sqrt(n);
  if (cb.p_cb_prime < 1.0) {
    cb.W_scaled = 1.0;
    cb.W = 1.0 / sqrt_n;
    cb.miso_term = 0.0;
    cb.branch = "transfer";
  } else {
    // Width in nearest-neighbor units, capped below half the network side.
    cb.W_scaled = std::min(std::pow(cb.p_cb_prime, 1.0 / (cfg.alpha - 2.0)), sqrt_n / 2.0 - 1.0);
    cb.W_scaled = std::max(cb.W_scaled, 1.0);
    cb.W = cb.W_scaled / sqrt_n;
    const double inner = 1.0 + cfg.G * cb.p_cb_prime *
                                   std::pow(nl, 1.0 + cfg.alpha * (0.5 + eps));
    cb.miso_term = (cb.W - 1.0 / sqrt_n) * n * std::log(nl) * std::log(inner);
    cb.branch = "miso+transfer";
  }

  double p_cut = 0.0;
  if (cfg.alpha < 3.0) {
    p_cut = cfg.G * cb.p_cb_prime * std::pow(n, 2.0 - cfg.alpha / 2.0) * std::pow(std::log(nl), 2.0);
  } else if (cfg.alpha == 3.0) {
    p_cut = cfg.G * cb.p_cb_prime * sqrt_n * std::pow(std::log(nl), 3.0);
  } else {
    p_cut = cfg.G * cb.p_cb_prime * std::pow(cb.W_scaled, 3.0 - cfg.alpha) * sqrt_n *
            std::pow(std::log(nl), 2.0);
  }
  cb.transfer_term = std::pow(n, eps) * p_cut;
  cb.total = 4.0 * (cb.miso_term + cb.transfer_term);
  return cb;
}

RegimeClassification classify_regime(const NetworkConfig& cfg) {
  RegimeClassification rc;
  const double beta = cfg.l_beta ? *cfg.l_beta : 0.0;
  rc.s_exponent = short_range_exponent(cfg) - beta / 2.0;
  rc.s_vanishing = rc.s_exponent < -1e-12;
  if (cfg.alpha <= 3.0) {
    rc.scheme = "hc";
    rc.regime = rc.s_vanishing ? "hc-vanishing" : "hc-nonvanishing";
    rc.predicted_exponent = 2.0 - cfg.alpha / 2.0 + rc.s_exponent;
  } else if (rc.s_vanishing) {
    rc.scheme = "mh";
    rc.regime = "mh";
    rc.predicted_exponent = 0.5 + rc.s_exponent;
  } else {
    rc.scheme = "hybrid";
    rc.regime = "hybrid";
    rc.predicted_exponent = 0.5 + rc.s_exponent / (cfg.alpha - 2.0);
  }
  return rc;
}

namespace {

// Adaptive Simpson over [a, b] with divergence detection.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth, bool& infinite) {
  if (infinite) return whole;
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  if (std::isinf(flm) || std::isinf(frm)) {
    infinite = true;
    return whole;
  }
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, infinite) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, infinite);
}

double kl_integral(const std::function<double(double)>& p, const std::function<double(double)>& q,
                   double lo, double hi) {
  auto integrand = [&](double x) -> double {
    const double px = p(x);
    if (px <= 0.0) return 0.0;
    const double qx = q(x);
    if (qx <= 0.0) return std::numeric_limits<double>::infinity();
    return px * std::log(px / qx);
  };
  const double fa = integrand(lo), fb = integrand(hi);
  if (std::isinf(fa) || std::isinf(fb)) return std::numeric_limits<double>::infinity();
  const double m = 0.5 * (lo + hi);
  const double fm = integrand(m);
  if (std::isinf(fm)) return std::numeric_limits<double>::infinity();
  const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  bool infinite = false;
  const double v = adaptive_simpson(integrand, lo, hi, fa, fm, fb, whole, 1e-10, 42, infinite);
  return infinite ? std::numeric_limits<double>::infinity() : v;
}

}  // namespace

KlPair kl_square_identity(const std::function<double(double)>& f_z,
                          const std::function<double(double)>& f_n, double hi) {
  KlPair out;
  const double lo = 1e-9;
  out.kl_raw = kl_integral(f_z, f_n, lo, hi);
  auto sq = [](std::function<double(double)> f) {
    return [f = std::move(f)](double a) {
      return a <= 0.0 ? 0.0 : f(std::sqrt(a)) / (2.0 * std::sqrt(a));
    };
  };
  out.kl_squared = kl_integral(sq(f_z), sq(f_n), lo * lo, hi * hi);
  return out;
}

BoundComparison achievability_vs_bound(const std::vector<SchemeResult>& results,
                                       const CutsetBound& bound) {
  BoundComparison cmp;
  cmp.bound_total = bound.total;
  for (const auto& r : results) {
    cmp.throughputs.push_back(r.throughput);
    if (r.throughput > bound.total)
      throw BoundViolationError("scheme '" + r.scheme + "' exceeds the cutset bound: T=" +
                                std::to_string(r.throughput) +
                                " > " + std::to_string(bound.total));
    cmp.gap_factors.push_back(r.throughput > 0.0
                                  ? bound.total / r.throughput
                                  : std::numeric_limits<double>::infinity());
  }
  return cmp;
}

}  // namespace covertnet
