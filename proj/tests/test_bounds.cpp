#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "covertnet/bounds.hpp"
#include "covertnet/schemes.hpp"

using namespace covertnet;

TEST_CASE("necessary INR: closed form and limits") {
  CHECK(necessary_inr(0.0, 10.0) == 0.0);
  CHECK(necessary_inr(1.0, 2.0) == doctest::Approx(1.0));
  CHECK(necessary_inr(0.05, 1e12) < 1e-5);
  // Decreasing in l, increasing in delta.
  CHECK(necessary_inr(0.05, 100.0) > necessary_inr(0.05, 1000.0));
  CHECK(necessary_inr(0.10, 100.0) > necessary_inr(0.05, 100.0));
  CHECK_THROWS_AS(necessary_inr(0.05, 0.5), ConfigError);
}

TEST_CASE("converse cap: ring summation meets the necessary INR at the reference scale") {
  NetworkConfig cfg;
  cfg.kappa = 0.5;
  cfg.alpha = 3.0;
  cfg.delta = 0.05;
  cfg.l = 4096.0;
  const double n = 4096.0;
  const double p_cb = converse_power_cap(cfg, n);
  const double side = std::sqrt(2.0 * std::log(n) / n);
  const long i0 = std::lround(std::pow(n, 0.25));
  const long i1 = std::lround(std::sqrt(n / std::log(n)));
  double inr = 0.0;
  for (long i = i0; i <= i1; ++i)
    inr += cfg.G * p_cb / cfg.N0 * 16.0 * i * std::log(n) * std::pow(i * side, -cfg.alpha);
  CHECK(inr == doctest::Approx(necessary_inr(cfg.delta, cfg.l)).epsilon(0.01));
}

TEST_CASE("converse cap: zero budget and the 1/log n gap to the MH power") {
  NetworkConfig cfg;
  cfg.kappa = 0.5;
  cfg.alpha = 3.0;
  cfg.l_beta = 1.0;
  NetworkConfig zero = cfg;
  zero.delta = 1e-300;
  CHECK(converse_power_cap(zero, 4096.0) < 1e-140);

  // P_CB / P_MH should shrink like 1/log n over the sweep.
  std::vector<double> ratios;
  for (double n : {4096.0, 65536.0, 1048576.0}) {
    cfg.n = n;
    ratios.push_back(converse_power_cap(cfg, n) / covert_power_mh(cfg) * std::log(n));
  }
  CHECK(std::fabs(ratios[0] - ratios[2]) / ratios[0] < 0.25);
}

TEST_CASE("cutset bound: branch structure") {
  NetworkConfig cfg;
  cfg.kappa = 0.75;
  cfg.alpha = 4.0;
  cfg.delta = 0.05;
  cfg.l_beta = 3.0;  // shrink P'_CB below one
  const CutsetBound cb = cutset_bound(cfg, 16384.0);
  CHECK(cb.p_cb_prime < 1.0);
  CHECK(cb.branch == "transfer");
  CHECK(cb.miso_term == 0.0);
  CHECK(cb.W == doctest::Approx(1.0 / std::sqrt(16384.0)));
  CHECK(cb.total == doctest::Approx(4.0 * cb.transfer_term));

  NetworkConfig big = cfg;
  big.l = 1.0;
  big.l_beta.reset();
  const CutsetBound cb2 = cutset_bound(big, 16384.0);
  CHECK(cb2.p_cb_prime >= 1.0);
  CHECK(cb2.branch == "miso+transfer");
  CHECK(cb2.W_scaled ==
        doctest::Approx(std::pow(cb2.p_cb_prime, 1.0 / (big.alpha - 2.0))));
  CHECK(cb2.total == doctest::Approx(4.0 * (cb2.miso_term + cb2.transfer_term)));
  CHECK(cb2.assumes_equal_average_power);
  CHECK_THROWS_AS(cutset_bound(NetworkConfig{.alpha = 2.0}, 4096.0), std::exception);
}

TEST_CASE("cutset bound: alpha = 3 uses the cubic log branch") {
  NetworkConfig cfg;
  cfg.kappa = 0.5;
  cfg.alpha = 3.0;
  cfg.l_beta = 1.0;
  const double n = 4096.0;
  const CutsetBound cb = cutset_bound(cfg, n);
  const double expect = std::pow(n, cfg.converse_eps) * cfg.G * cb.p_cb_prime * std::sqrt(n) *
                        std::pow(std::log(n), 3.0);
  CHECK(cb.transfer_term == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("cutset bound grows with the power budget") {
  NetworkConfig lo;
  lo.kappa = 0.5;
  lo.alpha = 3.5;
  lo.l_beta = 1.0;
  lo.delta = 0.01;
  NetworkConfig hi = lo;
  hi.delta = 0.25;
  for (double n : {4096.0, 65536.0})
    CHECK(cutset_bound(hi, n).total > cutset_bound(lo, n).total);
}

TEST_CASE("regime classifier covers the four corners") {
  NetworkConfig cfg;
  cfg.kappa = 0.5;

  cfg.alpha = 2.5;
  cfg.l_beta = 2.0;
  auto rc = classify_regime(cfg);
  CHECK(rc.scheme == "hc");
  CHECK(rc.s_vanishing);
  CHECK(rc.predicted_exponent == doctest::Approx(2.0 - 1.25 + 0.125 - 1.0));

  cfg.alpha = 4.0;
  cfg.l_beta = 3.0;
  rc = classify_regime(cfg);
  CHECK(rc.scheme == "mh");
  CHECK(rc.s_vanishing);

  cfg.l_beta.reset();
  cfg.l = 1.0;
  rc = classify_regime(cfg);
  CHECK(rc.scheme == "hybrid");
  CHECK(!rc.s_vanishing);
  CHECK(rc.predicted_exponent == doctest::Approx(0.75));

  cfg.alpha = 2.5;
  rc = classify_regime(cfg);
  CHECK(rc.scheme == "hc");
  CHECK(!rc.s_vanishing);
}

TEST_CASE("KL squaring identity on matched and disjoint densities") {
  // Identical densities: both divergences vanish.
  auto rayleigh = [](double power) {
    return [power](double x) { return 2.0 * x / power * std::exp(-x * x / power); };
  };
  const auto same = kl_square_identity(rayleigh(1.0), rayleigh(1.0), 12.0);
  CHECK(std::fabs(same.kl_raw) < 1e-9);
  CHECK(std::fabs(same.kl_squared) < 1e-9);

  // Rayleigh magnitudes with powers I + N0 vs N0: closed form
  // I/N0 - log(1 + I/N0), invariant under squaring.
  for (double ratio : {0.1, 1.0}) {
    const double n0 = 1.0, i = ratio * n0;
    const auto kl = kl_square_identity(rayleigh(i + n0), rayleigh(n0), 16.0);
    const double closed = i / n0 - std::log1p(i / n0);
    CHECK(kl.kl_raw == doctest::Approx(closed).epsilon(1e-6));
    CHECK(std::fabs(kl.kl_raw - kl.kl_squared) < 1e-3);
  }

  // Disjoint supports diverge.
  auto bump = [](double lo, double hi) {
    return [lo, hi](double x) { return (x >= lo && x < hi) ? 1.0 / (hi - lo) : 0.0; };
  };
  const auto disjoint = kl_square_identity(bump(0.0, 1.0), bump(2.0, 3.0), 4.0);
  CHECK(std::isinf(disjoint.kl_raw));
  CHECK(std::isinf(disjoint.kl_squared));
}

TEST_CASE("achievability vs bound: ordering and the hard error") {
  CutsetBound cb;
  cb.total = 1.0;
  SchemeResult ok;
  ok.scheme = "mh";
  ok.throughput = 0.0;
  const auto cmp = achievability_vs_bound({ok}, cb);
  CHECK(cmp.gap_factors.size() == 1);

  SchemeResult bad;
  bad.scheme = "hc";
  bad.throughput = 2.0;
  CHECK_THROWS_AS(achievability_vs_bound({bad}, cb), BoundViolationError);
}

TEST_CASE("every scheme stays below the cutset bound on sampled instances") {
  NetworkConfig cfg;
  cfg.n = 8192;
  cfg.kappa = 0.5;
  cfg.l_beta = 1.0;
  cfg.seed = 1;
  for (double alpha : {2.5, 3.5}) {
    cfg.alpha = alpha;
    CounterRng rng(cfg.seed);
    const auto inst = generate_instance(cfg, rng);
    std::vector<SchemeResult> results;
    for (const char* s : {"mh", "hc", "hybrid"}) results.push_back(run_scheme(s, cfg, inst));
    const auto cb = cutset_bound(cfg, cfg.n);
    const auto cmp = achievability_vs_bound(results, cb);
    for (double gap : cmp.gap_factors) CHECK(gap > 1.0);
  }
}
