import math

import pytest

import pycovertnet as cn


def make_cfg(**kw):
    args = dict(n=4096.0, kappa=0.5, alpha=3.0, delta=0.05, l_beta=1.0, seed=7)
    args.update(kw)
    return cn.NetworkConfig(**args)


def test_instance_generation_is_deterministic():
    cfg = make_cfg()
    a = cn.generate_instance(cfg)
    b = cn.generate_instance(cfg)
    assert a.n_l == b.n_l
    assert a.n_w == b.n_w
    assert a.legit[:5] == b.legit[:5]
    assert abs(a.n_l - 4096) < 4 * math.sqrt(4096)


def test_schemes_run_and_stay_covert():
    cfg = make_cfg()
    inst = cn.generate_instance(cfg)
    for name in ("mh", "hc", "hybrid"):
        r = cn.run_scheme(name, cfg, inst)
        assert r["covert_pass"]
        assert r["worst_kl"] <= cfg.delta
        assert r["throughput"] >= 0.0
        assert 0.0 <= r["outage_frac"] <= 1.0


def test_throughput_below_cutset_bound():
    cfg = make_cfg(alpha=3.5)
    inst = cn.generate_instance(cfg)
    bound = cn.cutset_bound(cfg, cfg.n)
    for name in ("mh", "hc", "hybrid"):
        assert cn.run_scheme(name, cfg, inst)["throughput"] <= bound["total"]


def test_recursion_and_schedule():
    seq = cn.hc_exponent_recursion(-0.25, 1.25, 200)
    assert abs(seq[-1] - 0.75) < 1e-6
    slots = cn.build_mimo_schedule(64, 4096, 512.0)
    lo, hi = cn.schedule_window_counts(slots, 4096, 512.0)
    assert 7 <= lo and hi <= 9


def test_regime_classifier_corners():
    assert cn.classify_regime(make_cfg(alpha=2.5, l_beta=2.0))["scheme"] == "hc"
    assert cn.classify_regime(make_cfg(alpha=4.0, l_beta=3.0))["scheme"] == "mh"
    cfg = cn.NetworkConfig(n=4096.0, kappa=0.5, alpha=4.0, delta=0.05, l=1.0, seed=7)
    assert cn.classify_regime(cfg)["scheme"] == "hybrid"


def test_fit_exponent_recovers_power_law():
    ns = [1024.0, 4096.0, 16384.0]
    means = [2.0 * n**0.5 for n in ns]
    fit = cn.fit_exponent(ns, means, 0.5, 0.01)
    assert fit["pass"]
    assert abs(fit["exponent"] - 0.5) < 1e-9


def test_config_validation_raises():
    with pytest.raises(cn.ConfigError):
        cn.NetworkConfig(n=4096.0, kappa=1.5, alpha=3.0, delta=0.05, l=100.0)
