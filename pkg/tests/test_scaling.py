import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surrogate_mix import scaling
from surrogate_mix.errors import BadWeight, InvalidConfig, TooFewPoints
from surrogate_mix.model import ExperimentPlan, GeneratorKind, PowerLawFit, ScalingLawModel
from surrogate_mix.sim import run_experiment

NS = np.unique(np.round(np.geomspace(10, 10_000, 16)).astype(int))


def table(A, B, beta, ns=NS, noise=0.0, rng=None):
    y = A + B * ns.astype(float) ** -beta
    if noise:
        y = y * (1 + noise * rng.standard_normal(len(ns)))
    return list(zip(ns.tolist(), y.tolist()))


def model(R, gap, Bo, Bs, beta_or=1.0, beta_su=1.0):
    return ScalingLawModel(R, gap, PowerLawFit(R, Bo, beta_or), PowerLawFit(R + gap, Bs, beta_su), beta_or)


def random_model(rng, beta=None):
    b = beta if beta is not None else rng.uniform(0.2, 2.0)
    return model(rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0.1, 10), rng.uniform(0.1, 10),
                 b, rng.uniform(0.2, 2.0) if beta is None else b)


# fit_power_law


def test_noiseless_round_trip():
    fit = scaling.fit_power_law(table(0.1, 1.0, 0.5))
    assert abs(fit.exponent - 0.5) <= 0.01
    assert abs(fit.asymptote - 0.1) <= 1e-3
    assert not fit.degenerate


def test_constant_losses_degenerate():
    fit = scaling.fit_power_law([(n, 0.3) for n in (10, 20, 40, 80)])
    assert fit.degenerate
    assert fit.asymptote == pytest.approx(0.3, abs=1e-15)
    assert fit.coefficient == 0.0 and fit.exponent == 1.0


def test_too_few_points():
    with pytest.raises(TooFewPoints):
        scaling.fit_power_law([(10, 1.0), (20, 0.5), (20, 0.6), (40, 0.3)])
    with pytest.raises(InvalidConfig):
        scaling.fit_power_law([(10, 1.0), (20, math.nan), (30, 0.6), (40, 0.3)])


@settings(max_examples=25)
@given(st.floats(0.01, 100.0))
def test_fit_scale_equivariant(c):
    pts = table(0.2, 3.0, 0.7, noise=0.02, rng=np.random.default_rng(3))
    f1 = scaling.fit_power_law(pts)
    f2 = scaling.fit_power_law([(n, c * y) for n, y in pts])
    assert f2.exponent == pytest.approx(f1.exponent, abs=1e-6)
    assert f2.asymptote == pytest.approx(c * f1.asymptote, rel=1e-5, abs=1e-9 * c)
    assert f2.coefficient == pytest.approx(c * f1.coefficient, rel=1e-5)


def _mean_losses(alpha, sizes, gap=0.25):
    # one source per table: alpha = 0 uses n, alpha = 1 uses m
    grid = {"n_grid": sizes, "m_grid": [1]} if alpha == 0 else {"n_grid": [1], "m_grid": sizes}
    plan = ExperimentPlan(alpha_grid=[float(alpha)], replicates=200, seed=7,
                          generator=GeneratorKind.GAUSSIAN_MEAN, params={"d": 50, "gap": gap}, **grid)
    return [((r.n if alpha == 0 else r.m), r.risk_mean) for r in run_experiment(plan)]


SIZES = [25, 50, 100, 200, 400, 800, 1600, 3200]


def test_simulated_mean_exponent_is_parametric():
    fit = scaling.fit_power_law(_mean_losses(0, SIZES))
    assert 0.9 <= fit.exponent <= 1.1


def test_simulated_mean_gap():
    m = scaling.build_model(_mean_losses(0, SIZES), _mean_losses(1, SIZES))
    assert abs(m.surrogate_gap - 0.25) <= 0.03


# build_model


def test_build_model_identical_and_shifted():
    pts = table(0.1, 1.0, 0.5)
    m = scaling.build_model(pts, pts)
    assert m.surrogate_gap == 0.0 and m.beta == m.original_fit.exponent
    fo = scaling.fit_power_law(table(0.10, 1.0, 0.5))
    fs = scaling.fit_power_law(table(0.25, 2.0, 0.8))
    m = scaling.build_model(table(0.10, 1.0, 0.5), table(0.25, 2.0, 0.8))
    assert m.surrogate_gap == fs.asymptote - fo.asymptote
    assert m.surrogate_gap == pytest.approx(0.15, abs=2e-3)
    assert not m.gap_clamped


def test_build_model_clamps_negative_gap():
    m = scaling.build_model(table(0.3, 1.0, 0.5), table(0.1, 1.0, 0.5))
    assert m.surrogate_gap == 0.0 and m.gap_clamped


# predict_mixture_risk


def test_endpoints_exact(rng):
    for _ in range(100):
        mod = random_model(rng)
        n, m = int(rng.integers(1, 10_000)), int(rng.integers(1, 10_000))
        fo, fs = mod.original_fit, mod.surrogate_fit
        assert scaling.predict_mixture_risk(mod, n, m, 0.0) == mod.bayes_risk + fo.coefficient * n ** -fo.exponent
        assert scaling.predict_mixture_risk(mod, n, m, 1.0) == (
            mod.bayes_risk + mod.surrogate_gap + fs.coefficient * m ** -fs.exponent)


def test_beta_one_is_additive(rng):
    for _ in range(50):
        mod = random_model(rng, beta=1.0)
        n, m, a = int(rng.integers(1, 1000)), int(rng.integers(1, 1000)), rng.uniform()
        expect = (mod.bayes_risk + a * a * mod.surrogate_gap + a * a * mod.surrogate_fit.coefficient / m
                  + (1 - a) ** 2 * mod.original_fit.coefficient / n)
        assert scaling.predict_mixture_risk(mod, n, m, a) == pytest.approx(expect, rel=1e-13)


def test_predict_continuous_at_endpoints(rng):
    mod = random_model(rng)
    for a, b in ((0.0, 1e-9), (1.0, 1 - 1e-9)):
        assert scaling.predict_mixture_risk(mod, 50, 70, b) == pytest.approx(
            scaling.predict_mixture_risk(mod, 50, 70, a), rel=1e-6)


def test_predict_bad_weight():
    mod = model(0.1, 0.2, 1.0, 1.0)
    with pytest.raises(BadWeight):
        scaling.predict_mixture_risk(mod, 10, 0, 0.5)
    with pytest.raises(BadWeight):
        scaling.predict_mixture_risk(mod, 0, 10, 0.5)
    assert scaling.predict_mixture_risk(mod, 10, 0, 0.0) == pytest.approx(0.2)


# optimal_alpha


def test_alpha_star_beta_one_closed_form(rng):
    for _ in range(100):
        mod = random_model(rng, beta=1.0)
        n, m = int(rng.integers(1, 5000)), int(rng.integers(1, 5000))
        r_or = mod.original_fit.coefficient / n
        r_su = mod.surrogate_gap + mod.surrogate_fit.coefficient / m
        a, _ = scaling.optimal_alpha(mod, n, m)
        assert abs(a - r_or / (r_or + r_su)) <= 1e-4


def test_alpha_star_dominates_endpoints_and_grid(rng):
    for _ in range(30):
        mod = random_model(rng)
        n, m = int(rng.integers(1, 5000)), int(rng.integers(1, 5000))
        a, r = scaling.optimal_alpha(mod, n, m)
        assert r <= min(scaling.predict_mixture_risk(mod, n, m, 0.0),
                        scaling.predict_mixture_risk(mod, n, m, 1.0))
        grid = np.linspace(0, 1, 10_001)
        vals = [scaling.predict_mixture_risk(mod, n, m, g) for g in grid]
        assert r <= min(vals) + 1e-12
        assert abs(grid[int(np.argmin(vals))] - a) <= 1e-4 + 1e-9


def test_huge_gap_drives_alpha_to_zero():
    a, _ = scaling.optimal_alpha(model(0.1, 1e12, 1.0, 1.0), 100, 100)
    assert a < 1e-9


def test_optimal_risk_monotone_in_n_and_m(rng):
    mod = random_model(rng)
    sizes = [1, 3, 10, 30, 100, 300, 1000, 3000]
    R = np.array([[scaling.optimal_alpha(mod, n, m)[1] for m in sizes] for n in sizes])
    assert np.all(np.diff(R, axis=0) <= 1e-12)
    assert np.all(np.diff(R, axis=1) <= 1e-12)


# required_surrogate


def test_required_surrogate_examples():
    mod = model(0.1, 0.05, 20.0, 20.0)
    n = 100
    r1 = scaling.optimal_alpha(mod, n, 1)[1]
    assert scaling.required_surrogate(mod, n, r1) == 1
    assert scaling.required_surrogate(mod, n, r1 + 1) == 1
    assert scaling.required_surrogate(mod, n, 0.05) is None
    r_inf = scaling.optimal_alpha(mod, n, math.inf)[1]
    assert scaling.required_surrogate(mod, n, r_inf - 1e-6) is None
    target = 0.5 * (r1 + r_inf)
    m = scaling.required_surrogate(mod, n, target)
    assert scaling.optimal_alpha(mod, n, m)[1] <= target < scaling.optimal_alpha(mod, n, m - 1)[1]


def test_required_surrogate_rejects_nonfinite():
    with pytest.raises(InvalidConfig):
        scaling.required_surrogate(model(0.1, 0.05, 1.0, 1.0), 10, math.nan)


# CSV


def test_loss_csv_round_trip(tmp_path):
    pts = [(10, 0.1 + 1e-17), (20, 1 / 3), (40, 2.5e-300), (80, 7.0)]
    p = tmp_path / "loss.csv"
    scaling.write_loss_csv(p, pts)
    assert scaling.read_loss_csv(p) == pts


def test_loss_csv_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("size,loss\n1,2\n")
    with pytest.raises(InvalidConfig):
        scaling.read_loss_csv(p)
    p.write_text("# comment\nn,loss\n1.5,2\n")
    with pytest.raises(InvalidConfig):
        scaling.read_loss_csv(p)
    p.write_text("n,loss\n# skipped\n3,0.5\n")
    assert scaling.read_loss_csv(p) == [(3, 0.5)]
