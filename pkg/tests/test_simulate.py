import math

import pytest

from twistrank.ffpoly import FieldSpec, Poly, RandomStream, poly, sample_monic
from twistrank.markov import MarkovOp, point_mass, pr_distribution
from twistrank.places import CurveConfig
from twistrank.rng import TAG_INIT, draw_u01
from twistrank.simulate import (
    CounterDraws,
    FhatStats,
    SimConfig,
    StreamDraws,
    deviation_bound,
    fhat_census,
    frak_n,
    m_nq,
    omega_distribution,
    operator_mixture_prediction,
    rank_walk,
    run_experiment,
)

F11 = FieldSpec(11)


def P(*coeffs):
    return poly(F11, coeffs)


def small_config(curve, **kw):
    defaults = dict(
        curve=curve,
        n=8,
        samples=40,
        mu_star=point_mass(0, R=20),
        seed=3,
    )
    defaults.update(kw)
    return SimConfig(**defaults)


def strip_elapsed(report):
    d = report.to_dict()
    d.pop("elapsed_seconds")
    return d


# --------------------------------------------------------------------------
# thresholds
# --------------------------------------------------------------------------


def test_m_nq_and_frak_n_formulas():
    assert m_nq(30, 11) == math.log(30) + math.log(math.log(11))
    m = m_nq(30, 11)
    assert frak_n(30, 11) == 4.0 * m * m / math.log(11)
    for bad in ((1, 11), (30, 1)):
        with pytest.raises(ValueError):
            m_nq(*bad)


def test_deviation_bound_reports_honestly():
    out = deviation_bound(30, 11, rho=0.5, delta0=1 / 6)
    assert out["m"] == m_nq(30, 11)
    assert out["epsilon"] is not None
    assert not out["threshold_met"]  # e^(e^e) is out of reach of any table
    assert out["ratio_to_qn"] == 4.0 * max(
        out["branch_factor_count"], out["branch_markov"]
    )
    # below m = e the epsilon exponent is undefined and the bound is vacuous
    tiny = deviation_bound(2, 11, rho=0.5, delta0=1 / 6)
    assert tiny["epsilon"] is None
    assert tiny["branch_markov"] == math.inf
    for rho, d0 in ((0.0, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.0)):
        with pytest.raises(ValueError):
            deviation_bound(30, 11, rho, d0)


# --------------------------------------------------------------------------
# configuration objects
# --------------------------------------------------------------------------


def test_sim_config_validation(audit_curve):
    mu = point_mass(0, R=20)
    with pytest.raises(ValueError):
        SimConfig(audit_curve, 0, 10, mu)
    with pytest.raises(ValueError):
        SimConfig(audit_curve, 8, 0, mu)
    with pytest.raises(ValueError):
        SimConfig(audit_curve, 8, 10, mu, transition_mode="one_step")
    with pytest.raises(ValueError):
        SimConfig(audit_curve, 8, 10, mu, workers=0)
    with pytest.raises(ValueError):
        SimConfig(audit_curve, 8, 10, mu, engine="cuda")


def test_fhat_stats_validation():
    with pytest.raises(ValueError):
        FhatStats(w=2, w_prime=3, N=10, has_large_P0=False)


# --------------------------------------------------------------------------
# per-polynomial census
# --------------------------------------------------------------------------


def test_fhat_census_small_poly(audit_curve):
    f = P(1, 1) * P(1, 1) * P(1, 0, 1)  # (t+1)^2 (t^2+1)
    stats = fhat_census(f, audit_curve)
    assert stats == FhatStats(w=2, w_prime=0, N=4, has_large_P0=False)
    with pytest.raises(ValueError):
        fhat_census(Poly(F11, ()), audit_curve)


def test_fhat_census_degree_floor(audit_curve):
    # deg 1 is floored to n_eff = 2 where the threshold formula is defined
    stats = fhat_census(P(1, 1), audit_curve)
    assert stats == FhatStats(w=1, w_prime=0, N=1, has_large_P0=False)


def test_fhat_census_detects_large_factor(audit_curve):
    # degree 37 is past the cutoff frak_n(37, 11) = 33.56, so an irreducible
    # of that degree is its own large factor; this one is a transposition
    g = sample_monic(F11, 37, RandomStream(70))
    stats = fhat_census(g, audit_curve)
    assert stats == FhatStats(w=1, w_prime=1, N=37, has_large_P0=True)
    product = fhat_census(g * P(1, 1), audit_curve)
    assert product == FhatStats(w=2, w_prime=1, N=38, has_large_P0=True)


# --------------------------------------------------------------------------
# walks
# --------------------------------------------------------------------------


def test_rank_walk_requires_certified_curve():
    bad = CurveConfig(5, F11, (P(10), P(0), P(0)))  # x^3 - 1 has the root x = 1
    cfg = SimConfig(bad, 8, 10, point_mass(0, R=20))
    with pytest.raises(ValueError, match="certification"):
        rank_walk(P(1, 1), cfg, RandomStream(0))
    with pytest.raises(ValueError, match="certification"):
        run_experiment(cfg)


def test_rank_walk_deterministic_per_source(audit_curve):
    cfg = small_config(audit_curve)
    f = sample_monic(F11, 8, RandomStream(12))
    assert rank_walk(f, cfg, RandomStream(5)) == rank_walk(f, cfg, RandomStream(5))
    assert rank_walk(f, cfg, CounterDraws(3, 0)) == rank_walk(
        f, cfg, CounterDraws(3, 0)
    )


def test_stream_and_counter_draws_expose_same_interface():
    s = StreamDraws(RandomStream(9))
    c = CounterDraws(9, 4)
    for src in (s, c):
        u = src.init_u01()
        assert 0.0 <= u < 1.0
        assert 0.0 <= src.walk_u01(0) < 1.0
        assert 0 <= src.shuffle_int(0, 5) < 5
    assert c.init_u01() == draw_u01(9, 4, TAG_INIT, 0)


def test_shuffle_does_not_change_outcomes(audit_curve):
    # transitions depend only on how many P2 factors a sample has, so
    # factor order is irrelevant; the shuffle draws live under their own tag
    base = run_experiment(small_config(audit_curve, engine="scalar"))
    shuffled = run_experiment(
        small_config(audit_curve, engine="scalar", shuffle_factors=True)
    )
    assert base.rank_counts == shuffled.rank_counts
    assert base.p2_count_hist == shuffled.p2_count_hist
    assert base.class_factor_counts == shuffled.class_factor_counts


def test_batch_engine_rejects_shuffle(audit_curve):
    cfg = small_config(audit_curve, engine="batch", shuffle_factors=True)
    with pytest.raises(ValueError, match="shuffl"):
        run_experiment(cfg)
    # auto quietly falls back to the scalar walk instead
    auto = run_experiment(small_config(audit_curve, shuffle_factors=True))
    assert auto.engine == "scalar"


@pytest.mark.parametrize("mode", ["two_step", "d_table"])
def test_engines_agree_bit_for_bit(audit_curve, mode):
    scalar = run_experiment(
        small_config(audit_curve, engine="scalar", transition_mode=mode, samples=60)
    )
    batch = run_experiment(
        small_config(audit_curve, engine="batch", transition_mode=mode, samples=60)
    )
    assert batch.engine == "batch" and scalar.engine == "scalar"
    a, b = strip_elapsed(scalar), strip_elapsed(batch)
    a.pop("engine")
    b.pop("engine")
    assert a == b


def test_worker_split_is_invisible(audit_curve):
    one = run_experiment(small_config(audit_curve, engine="scalar", workers=1))
    two = run_experiment(small_config(audit_curve, engine="scalar", workers=2))
    a, b = strip_elapsed(one), strip_elapsed(two)
    a["config"].pop("workers")
    b["config"].pop("workers")
    assert a == b


def test_report_shape(audit_curve):
    report = run_experiment(small_config(audit_curve))
    d = report.to_dict()
    assert d["config"]["ell"] == 5 and d["config"]["q"] == 11
    assert sum(report.rank_counts.values()) == 40
    assert sum(report.p2_count_hist.values()) == 40
    assert sum(report.fhat["w_hist"].values()) == 40
    assert set(d["rank_counts"]) <= {str(r) for r in range(64)}
    assert d["fhat"]["frak_n"] == frak_n(8, 11)
    assert 0.0 <= report.empirical_parity <= 1.0
    assert report.tv_to_theory >= 0.0


def test_initial_rank_distribution_respects_mu(audit_curve):
    # with mu concentrated at rank 4 every sample starts there, and
    # two_step moves change the rank by 0 or +-2 per P2 factor
    mu = point_mass(4, R=20)
    cfg = small_config(audit_curve, mu_star=mu, samples=30)
    report = run_experiment(cfg)
    for rank, count in report.rank_counts.items():
        assert rank % 2 == 0
        assert count > 0


def test_operator_mixture_prediction(audit_curve):
    mu = pr_distribution(5, R=20)
    cfg = small_config(audit_curve, mu_star=mu)
    trivial = operator_mixture_prediction(cfg, {0: 17})
    assert trivial.probs == tuple(float(p) for p in mu.probs)
    mixed = operator_mixture_prediction(cfg, {0: 3, 1: 1})
    op = MarkovOp(5, (0.0, 0.0, 1.0), 20)
    stepped = op.apply_vector([float(p) for p in mu.probs])
    for got, a, b in zip(mixed.probs, mu.probs, stepped):
        assert math.isclose(got, 0.75 * float(a) + 0.25 * b, abs_tol=1e-15)


# --------------------------------------------------------------------------
# exact factor-count combinatorics
# --------------------------------------------------------------------------


def test_omega_distribution_small_cases():
    assert omega_distribution(11, 1) == {1: 11}
    # degree 2: 55 irreducibles + 11 squares have one factor; C(11,2) products
    assert omega_distribution(11, 2) == {1: 66, 2: 55}
    assert omega_distribution(11, 3) == {1: 451, 2: 715, 3: 165}


@pytest.mark.parametrize("q", [2, 3, 11])
def test_omega_distribution_total_mass(q):
    for n in range(1, 9):
        dist = omega_distribution(q, n)
        assert sum(dist.values()) == q**n
        assert all(w >= 1 for w in dist)


def test_omega_distribution_rejects_bad_input():
    with pytest.raises(ValueError):
        omega_distribution(11, 0)
    with pytest.raises(ValueError):
        omega_distribution(11, 65)
    with pytest.raises(ValueError):
        omega_distribution(6, 3)
    with pytest.raises(ValueError):
        omega_distribution(1, 3)
