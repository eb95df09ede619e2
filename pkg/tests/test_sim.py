import math

import numpy as np
import pytest
from scipy.stats import norm

from surrogate_mix import estimators as est
from surrogate_mix import oracles as orc
from surrogate_mix.errors import ExperimentError, InvalidConfig, NotUnitNorm, TaskMismatch
from surrogate_mix.model import ExperimentPlan, GeneratorKind, SequenceModelSpec
from surrogate_mix.sim import (
    estimate_risk,
    format_results,
    gen_gaussian_mean,
    gen_gaussian_mixture,
    gen_hidim_linear,
    gen_sequence_obs,
    power_law_sequence,
    read_results,
    run_experiment,
    select_by_validation,
    stream,
    validation_loss,
    write_results,
)
from surrogate_mix.sim import harness

THETA = np.array([1.0, -2.0, 0.5])

# generators


def test_gaussian_mean_sigma_zero():
    ds = gen_gaussian_mean(3, 7, THETA, 0.0, 1)
    assert np.array_equal(ds.features, np.tile(THETA, (7, 1)))
    assert ds.responses is None


def test_gaussian_mean_lln():
    ds = gen_gaussian_mean(3, 1_000_000, THETA, 2.0, 5)
    assert np.all(np.abs(ds.features.mean(axis=0) - THETA) <= 4 * 2.0 / 1000)


@pytest.mark.parametrize("make", [
    lambda s: gen_gaussian_mean(3, 50, THETA, 1.0, s).features,
    lambda s: gen_gaussian_mixture(3, 50, THETA / np.linalg.norm(THETA), s).features,
    lambda s: gen_hidim_linear(3, 50, THETA, 1.0, s).responses,
])
def test_generators_deterministic(make):
    assert make(9).tobytes() == make(9).tobytes()
    assert make((9, 1, 2)).tobytes() == make(stream(9, 1, 2)).tobytes()
    assert make(9).tobytes() != make(10).tobytes()


def test_mixture_balance_and_mean():
    theta = np.array([0.6, 0.8])
    ds = gen_gaussian_mixture(2, 1_000_000, theta, 3)
    n = ds.count
    assert abs(np.mean(ds.responses == 1.0) - 0.5) <= 4 / math.sqrt(n) * 0.5
    xy = (ds.features * ds.responses[:, None]).mean(axis=0)
    assert np.all(np.abs(xy - theta) <= 4 / math.sqrt(n))


def test_mixture_requires_unit_norm():
    with pytest.raises(NotUnitNorm):
        gen_gaussian_mixture(2, 5, np.array([1.0, 1.0]), 0)


def test_hidim_linear_moments():
    ds = gen_hidim_linear(3, 400_000, THETA, 0.0, 4)
    assert np.array_equal(ds.responses, ds.features @ THETA)
    ds = gen_hidim_linear(3, 400_000, THETA, 1.5, 4)
    resid = ds.responses - ds.features @ THETA
    assert abs(resid.var() - 2.25) <= 4 * 2.25 * math.sqrt(2 / 400_000)
    assert np.all(np.abs(ds.features.mean(axis=0)) <= 4 / math.sqrt(400_000))


def _seq_spec(sigma=1.0, n=10, m=20):
    return SequenceModelSpec([1.0, 0.5, 0.2], [0.8, 0.6, 0.1], [1.0, 4.0, 9.0], sigma, 2 * sigma, n, m, 2.0, 1.0)


def test_sequence_obs():
    # sigma must be > 0 in a spec, so the noiseless identity is checked as exact
    # linearity in sigma on a shared stream
    th = np.array([1.0, 0.5, 0.2])
    y1, _ = gen_sequence_obs(_seq_spec(1.0), 1)
    y3, _ = gen_sequence_obs(_seq_spec(1e-3), 1)
    assert np.allclose(y3 - th, 1e-3 * (y1 - th), rtol=1e-9, atol=1e-15)
    a, b = gen_sequence_obs(_seq_spec(), 2)
    c, d = gen_sequence_obs(_seq_spec(), 2)
    assert a.tobytes() == c.tobytes() and b.tobytes() == d.tobytes()
    draws = np.array([gen_sequence_obs(_seq_spec(), (8, j))[0] for j in range(20_000)])
    se = 1 / math.sqrt(10) / math.sqrt(20_000)
    assert np.all(np.abs(draws.mean(axis=0) - [1.0, 0.5, 0.2]) <= 4 * se)


def test_power_law_sequence():
    th, ths, om = power_law_sequence(4, 1.0, 1.0, 0.1)
    k = np.arange(1, 5)
    assert np.allclose(om, k ** 2.0) and np.allclose(th, k ** -1.5)
    assert np.allclose(ths, th * (1 + 0.1 * np.array([-1, 1, -1, 1])))


# estimate_risk


def test_estimate_risk_exact_tasks():
    assert estimate_risk("mean", THETA, THETA) == (0.0, 0.0)
    assert estimate_risk("linear", THETA + [0, 1, 0], {"theta": THETA}) == (1.0, 0.0)
    with pytest.raises(TaskMismatch):
        estimate_risk("mean", THETA[:2], THETA)
    with pytest.raises(TaskMismatch):
        estimate_risk("cox", THETA, THETA)


def test_estimate_risk_bayes_anchor_and_sign_flip():
    theta = np.array([0.6, 0.8, 0.0])
    r, se = estimate_risk("classification", theta, theta, 1_000_000, 0)
    assert abs(r - norm.cdf(-1)) <= 3 * se
    r, se = estimate_risk("classification", -theta, theta, 1_000_000, 0)
    assert abs(r - norm.cdf(1)) <= 3 * se


def test_classification_law_matches_full_draws():
    # the score shortcut and explicit d-dimensional draws share a distribution
    theta = np.array([0.6, 0.8])
    th = np.array([1.0, -0.3])
    ds = gen_gaussian_mixture(2, 200_000, theta, 12)
    direct = np.mean(np.where(ds.features @ th >= 0, 1.0, -1.0) != ds.responses)
    r, se = estimate_risk("classification", th, theta, 200_000, 13)
    assert abs(direct - r) <= 4 * math.sqrt(2) * se


# select_by_validation


def test_select_singleton_grid():
    a, lam, th = select_by_validation(lambda a, lam: np.array([a, lam]), [0.3], [2.0], lambda t: 1.0)
    assert (a, lam) == (0.3, 2.0) and np.array_equal(th, [0.3, 2.0])


def test_select_tie_break():
    a, lam, _ = select_by_validation(lambda a, lam: 0, [0.5, 0.1, 0.9], [1.0, 4.0], lambda t: 0.0)
    assert (a, lam) == (0.1, 4.0)
    with pytest.raises(InvalidConfig):
        select_by_validation(lambda a, lam: 0, [], [1.0], lambda t: 0.0)


def _mean_replicate(j, seed=1, d=50, n=100, m=400, gap=0.25):
    th, ths = np.zeros(d), np.zeros(d)
    ths[0] = math.sqrt(gap)
    o = gen_gaussian_mean(d, n, th, 1.0, stream(seed, j, 0))
    s = gen_gaussian_mean(d, m, ths, 1.0, stream(seed, j, 1))
    v = gen_gaussian_mean(d, max(1000, n), th, 1.0, stream(seed, j, 2))
    return th, o, s, v


def test_select_finds_oracle_alpha():
    a_star = orc.mean_optimal_alpha(50, 100, 400, 0.25)[0]
    step = 0.2
    grid = sorted(set(np.linspace(0, 1, 6).tolist()) | {a_star})
    hits = 0
    for j in range(100):
        _, o, s, v = _mean_replicate(j)
        a, _, _ = select_by_validation(lambda a, lam: est.weighted_mean(o, s, a), grid, [0.0],
                                       lambda t: validation_loss("mean", v, t))
        hits += abs(a - a_star) <= step
    assert hits >= 90


def test_select_deterministic():
    def run():
        _, o, s, v = _mean_replicate(3)
        return select_by_validation(lambda a, lam: est.weighted_mean(o, s, a), np.linspace(0, 1, 11), [0.0],
                                    lambda t: validation_loss("mean", v, t))
    assert run()[0] == run()[0] and run()[2].tobytes() == run()[2].tobytes()


def test_weighted_beats_naive_pooling():
    grid = np.linspace(0, 1, 21)
    sel, naive = [], []
    for j in range(300):
        th, o, s, v = _mean_replicate(j, seed=4)
        _, _, t = select_by_validation(lambda a, lam: est.weighted_mean(o, s, a), grid, [0.0],
                                       lambda t: validation_loss("mean", v, t))
        sel.append(estimate_risk("mean", t, th)[0])
        naive.append(estimate_risk("mean", est.weighted_mean(o, s, 400 / 500), th)[0])
    diff = np.array(naive) - np.array(sel)
    assert diff.mean() > 3 * diff.std(ddof=1) / math.sqrt(len(diff))


def test_validation_losses():
    X = np.array([[1.0, 0.0], [0.0, 1.0]])
    from surrogate_mix.model import LabeledDataset
    v = LabeledDataset(X, np.array([1.0, -1.0]))
    assert validation_loss("mean", v, [0.0, 0.0]) == 1.0
    assert validation_loss("ridge", v, [1.0, -1.0]) == 0.0
    assert validation_loss("logistic", v, [-1.0, 1.0]) == 1.0
    with pytest.raises(TaskMismatch):
        validation_loss("hinge", v, [0.0, 0.0])


# run_experiment


def mean_plan(**kw):
    base = dict(n_grid=[100], m_grid=[400], alpha_grid=[0.3], replicates=50, seed=0,
                generator=GeneratorKind.GAUSSIAN_MEAN, params={"d": 50, "gap": 0.25})
    base.update(kw)
    return ExperimentPlan(**base)


def test_single_replicate_noiseless_is_exact():
    plan = mean_plan(replicates=1, params={"d": 5, "gap": 0.25, "sigma": 0.0, "sigma_s": 0.0})
    (row,) = run_experiment(plan)
    assert row.risk_mean == 0.3 ** 2 * 0.25 and row.risk_se == 0.0 and row.replicates == 1


def test_mean_cell_matches_oracle():
    (row,) = run_experiment(mean_plan(replicates=2000))
    assert abs(row.risk_mean - 0.27875) <= 3 * row.risk_se


def test_doubling_replicates_is_stable():
    (a,) = run_experiment(mean_plan(replicates=200))
    (b,) = run_experiment(mean_plan(replicates=400))
    assert abs(a.risk_mean - b.risk_mean) <= 3 * math.hypot(a.risk_se, b.risk_se)


def test_rows_sorted_and_skipped_cells():
    plan = mean_plan(n_grid=[200, 0, 100], m_grid=[20, 10], alpha_grid=[1.0, 0.0, 0.5], replicates=3)
    keys = [(r.n, r.m, r.alpha) for r in run_experiment(plan)]
    assert keys == sorted(keys) and len(keys) == 14
    assert (0, 10, 1.0) in keys and (0, 10, 0.5) not in keys
    plan = mean_plan(n_grid=[10], m_grid=[0, 10], alpha_grid=[0.0, 0.5], replicates=3)
    keys = [(r.n, r.m, r.alpha) for r in run_experiment(plan)]
    assert keys == [(10, 0, 0.0), (10, 10, 0.0), (10, 10, 0.5)]


def test_cell_streams_are_distinct():
    plan = mean_plan(n_grid=[100], m_grid=[400], alpha_grid=[0.0, 0.5], replicates=2)
    rows = run_experiment(plan)
    # alpha = 0 and alpha = 0.5 cells draw from different streams
    s = harness._setting(plan)
    r00 = harness._replicate(s, plan, 0, 100, 400, 0.0, 0)
    r01 = harness._replicate(s, plan, 0, 100, 400, 0.0, 1)
    r10 = harness._replicate(s, plan, 1, 100, 400, 0.0, 0)
    assert len({r00, r01, r10}) == 3
    assert rows[0].risk_mean == pytest.approx((r00 + r01) / 2, rel=1e-15)


def test_thread_count_does_not_change_output():
    plan = mean_plan(n_grid=[20, 40], alpha_grid=[0.0, 0.5], replicates=7)
    assert format_results(run_experiment(plan, threads=1)) == format_results(run_experiment(plan, threads=6))


def test_results_round_trip(tmp_path):
    rows = run_experiment(mean_plan(replicates=5))
    p = tmp_path / "r.csv"
    write_results(rows, p)
    assert p.read_text().splitlines()[0] == "n,m,alpha,risk_mean,risk_se,replicates"
    assert read_results(p) == rows


def test_other_generators_run():
    lin = ExperimentPlan([40], [40], [0.5], [0.1, 1.0], 3, 0, GeneratorKind.HIDIM_LINEAR,
                         {"d": 10, "r": 1.0, "r_s": 1.0, "gamma": 0.5})
    gmm = ExperimentPlan([40], [40], [0.5], [0.1], 3, 0, GeneratorKind.GAUSSIAN_MIXTURE,
                         {"d": 5, "gamma": 0.3}, test_size=1000)
    seq = ExperimentPlan([50], [50], [0.5], [0.0], 3, 0, GeneratorKind.SEQUENCE_MODEL,
                         {"dim": 30, "mu": 1.0, "rho_decay": 1.0, "shift_amplitude": 0.1,
                          "lambda_rule": "star"})
    for plan in (lin, gmm, seq):
        (row,) = run_experiment(plan)
        assert math.isfinite(row.risk_mean) and row.risk_mean >= 0


def test_plan_validation():
    with pytest.raises(InvalidConfig, match="bogus"):
        run_experiment(mean_plan(params={"d": 5, "bogus": 1}))
    with pytest.raises(InvalidConfig):
        run_experiment(mean_plan(params={"d": 5, "gap": 0.2, "gamma": 1.0}))


def test_failed_replicate_aborts(monkeypatch):
    def boom(*a, **k):
        raise FloatingPointError("bad draw")
    monkeypatch.setattr(harness, "_replicate", boom)
    with pytest.raises(ExperimentError, match="alpha=0.3"):
        run_experiment(mean_plan(replicates=2))
