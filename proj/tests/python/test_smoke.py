import math

import pytest

import switchmix


def test_two_point_mix():
    theta = switchmix.mix_estimates([0.0, 1.0], [math.log(0.5)] * 2)
    assert theta == pytest.approx(0.38633185309867714, abs=1e-15)
    with pytest.raises(switchmix.InvalidInput):
        switchmix.mix_estimates([], [])


def test_mixture_run_and_bound():
    data, ends, _ = switchmix.generate(2, 64, noise=0.1, seed=7)
    assert ends == [32, 64]
    mix = switchmix.Mixture("log", "optimal", 64)
    estimates = mix.run(data)
    assert len(estimates) == 64
    assert all(-1.0 <= e <= 1.0 for e in estimates)
    assert mix.cumulative_loss <= mix.telescoped_loss_bound + 1e-9
    trace = mix.trace()
    assert trace[-1].t == 64
    assert mix.next_time == 65


def test_quad_horizon_and_exp_cap():
    mix = switchmix.Mixture("quad", "better", 2)
    mix.step(0.1)
    mix.step(0.2)
    with pytest.raises(switchmix.RunComplete):
        mix.step(0.3)
    with pytest.raises(switchmix.HorizonTooLarge):
        switchmix.Mixture("exp", "naive", 20)
    with pytest.raises(switchmix.SwitchmixError):
        switchmix.Mixture("log", "nope", 8)


def test_oracles():
    theta, loss = switchmix.best_fixed([1.0, 1.0, -1.0, -1.0])
    assert theta == 0.0 and loss == pytest.approx(4.0)
    ends, thetas, loss = switchmix.best_switching([-1.0, -1.0, -1.0, 1.0, 1.0], 2)
    assert ends == [3, 5] and thetas == [-1.0, 1.0] and loss == 0.0
    assert [s[1] for s in switchmix.dyadic_split(8)] == [1, 2, 4, 8]
    assert switchmix.mixture_regret_bound("log", "optimal", 1, 8) == pytest.approx(6 * math.log(4))


def test_execute_report():
    report = switchmix.execute({"scheme": "quad", "weighting": "optimal", "horizon": "64",
                                "segments": "2", "noise": "0.1", "seed": "7"})
    assert report["T"] == 64 and report["S"] == 2
    assert report["slack"] >= -1e-8
    with pytest.raises(switchmix.ConfigError):
        switchmix.execute({"colour": "blue"})


def test_criterion_runs():
    passed, detail = switchmix.run_criterion(1)
    assert passed, detail
    assert switchmix.criterion_count == 11
