import math

import pytest

import sc_destim as sd


def test_graph():
    assert sd.lambda2(2, [(1, 2, 1.0)]) == pytest.approx(2.0)
    assert sd.lambda2(8, sd.paper_edges()) == pytest.approx(0.66775349883499498664, abs=1e-10)
    assert not sd.is_connected(4, [(1, 2, 1.0), (3, 4, 1.0)])
    with pytest.raises(ValueError):
        sd.lambda2(3, [(1, 1, 1.0)])


def test_channel():
    assert sd.laplace_cdf(1.0) == pytest.approx(1 - math.exp(-1) / 2)
    assert sd.fusion_g(1.0, 0.5, 1.0, 4) == pytest.approx(0.540150698535697, abs=1e-14)
    assert sd.channel_step(0.0, 0.25, 1.0, 1, 0.3) == (1, True, 1, 1)
    assert sd.trigger_probability(0.7, 0.0, 0.5, 100) == pytest.approx(1.0)


def test_theory():
    assert sd.predict_rate(0.875, 2.5) == ("sqrtlog_over", -0.75)
    gamma, _, _, h = sd.suggest_stepsizes([0.1, 0.4], 5.0)
    assert gamma == pytest.approx([0.9, 0.6])
    assert h == pytest.approx(0.8)


def test_config_roundtrip_and_validation():
    cfg = sd.preset("paper-sec7")
    passed, text = sd.validate(cfg)
    assert passed and "overall: PASS" in text
    p = sd.predict(cfg)
    assert p["rate_class"] == "poly_a"
    assert p["a"] == pytest.approx(0.015194995022625272, abs=1e-12)
    cfg["bogus"] = 1
    with pytest.raises(sd.ConfigError):
        sd.validate(cfg)


def test_run_is_deterministic():
    cfg = sd.preset("paper-sec7")
    cfg["experiment"]["runs"] = 2
    cfg["experiment"]["horizon"] = 2000
    a = sd.run_experiment(cfg, workers=1)
    b = sd.run_experiment(cfg, workers=2)
    assert a == b
    assert a["k"][-1] == 2000
    assert a["mse_mean"][-1] < a["mse_mean"][0]


def test_consensus_conserves_average():
    ring = [(i, i % 5 + 1, 1.0) for i in range(1, 6)]
    k, dev, mean = sd.run_consensus(5, ring, 2.0, 1.0, 1.0, [0, 1, 2, 3, 4], 10000, 1)
    assert k[0] == 0 and k[-1] == 10000
    assert all(abs(m - 2.0) < 1e-9 for m in mean)
    assert dev[-1] < dev[0]
