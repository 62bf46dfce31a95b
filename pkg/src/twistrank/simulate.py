"""Monte Carlo rank walks over random twisting polynomials.

Each sampled monic f of degree n is factored; its DISTINCT irreducible
factors, in ascending (degree, coefficient) order, drive rank transitions:
P0 and ramified factors leave the rank alone, P2 factors apply one two-step
move of the birth-death operator (or one draw from the printed P2 table).

All randomness is counter-based: every uniform is a pure function of
(seed, sample index, purpose tag, draw index), so worker count and chunking
cannot change any result, and the vectorized engine reproduces the scalar
walk bit for bit.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import rng as rngmod
from .ffpoly import Poly, RandomStream, count_monic_irreducibles, factor
from .markov import (
    MarkovOp,
    RankDist,
    parity,
    parity_weighted_pr,
    tv_distance,
)
from .places import CurveConfig, PlaceClass, certify_s3, classify_place


# ---------------------------------------------------------------------------
# Thresholds
# ---------------------------------------------------------------------------


def m_nq(n: int, q: int) -> float:
    """log n + log log q (natural logs)."""
    if n < 2 or q < 2:
        raise ValueError("need n >= 2 and q >= 2")
    return math.log(n) + math.log(math.log(q))


def frak_n(n: int, q: int) -> float:
    """4 * m_nq^2 / log q: the large-factor degree threshold."""
    return 4.0 * m_nq(n, q) ** 2 / math.log(q)


def deviation_bound(n: int, q: int, rho: float, delta0: float) -> dict:
    """The large-n tail bound, reported as a ratio to q^n.

    4 * max(n^(-rho*ln(rho) - 1 + rho), 3 m^2 (1 - delta0)^((1-eps) rho m))
    with m = m_nq and eps = 1/log log m. The validity threshold m > e^(e^e)
    is astronomically far from any computable n, so the boolean is reported
    honestly rather than enforced.
    """
    if not (0.0 < rho < 1.0):
        raise ValueError("rho must lie in (0, 1)")
    if not (0.0 < delta0 < 1.0):
        raise ValueError("delta0 must lie in (0, 1)")
    m = m_nq(n, q)
    threshold = math.exp(math.exp(math.e))
    branch1 = n ** (-rho * math.log(rho) - 1.0 + rho)
    if m > math.e:
        eps = 1.0 / math.log(math.log(m))
        branch2 = 3.0 * m * m * (1.0 - delta0) ** ((1.0 - eps) * rho * m)
    else:
        eps = None
        branch2 = math.inf
    ratio = 4.0 * max(branch1, branch2)
    return {
        "m": m,
        "epsilon": eps,
        "threshold_met": m > threshold,
        "branch_factor_count": branch1,
        "branch_markov": branch2,
        "ratio_to_qn": ratio,
    }


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimConfig:
    curve: CurveConfig
    n: int
    samples: int
    mu_star: RankDist
    transition_mode: str = "two_step"
    seed: int = 0
    workers: int = 1
    shuffle_factors: bool = False
    engine: str = "auto"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("twist degree must be >= 1")
        if self.samples < 1:
            raise ValueError("need at least one sample")
        if self.transition_mode not in ("two_step", "d_table"):
            raise ValueError(f"unknown transition mode {self.transition_mode!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.engine not in ("auto", "batch", "scalar"):
            raise ValueError(f"unknown engine {self.engine!r}")


@dataclass(frozen=True)
class FhatStats:
    w: int
    w_prime: int
    N: int
    has_large_P0: bool

    def __post_init__(self):
        if self.w_prime > self.w:
            raise ValueError("w_prime cannot exceed w")


@lru_cache(maxsize=32)
def _certified(curve: CurveConfig) -> bool:
    return bool(certify_s3(curve))


@lru_cache(maxsize=1 << 20)
def _classify_cached(curve: CurveConfig, v: Poly) -> PlaceClass:
    return classify_place(curve, v)[1]


def fhat_census(f: Poly, curve: CurveConfig, rng: Optional[RandomStream] = None) -> FhatStats:
    """Factor-count statistics of one twisting polynomial.

    The degree threshold for "large" factors uses deg f (floored at 2, where
    the threshold formula is defined). N is the full degree with multiplicity,
    i.e. deg f for monic f.
    """
    if f.is_zero():
        raise ValueError("f must be nonzero")
    n_eff = max(f.degree, 2)
    cutoff = frak_n(n_eff, curve.field.q)
    fact = factor(f, rng)
    w = len(fact.factors)
    w_prime = 0
    has_large_p0 = False
    for g, _ in fact.factors:
        if g.degree > cutoff:
            w_prime += 1
            _, place_class = classify_place(curve, g)
            if place_class == PlaceClass.P0:
                has_large_p0 = True
    return FhatStats(w, w_prime, f.degree, has_large_p0)


# ---------------------------------------------------------------------------
# Draw sources: sequential stream or counter-based per-sample scheme
# ---------------------------------------------------------------------------


class StreamDraws:
    """Sequential draws from a RandomStream (order: init, then walk 0,1,...)."""

    def __init__(self, stream: RandomStream):
        self._stream = stream

    def init_u01(self) -> float:
        return (self._stream.next_u64() >> 11) * 2.0 ** -53

    def walk_u01(self, i: int) -> float:
        return (self._stream.next_u64() >> 11) * 2.0 ** -53

    def shuffle_int(self, i: int, n: int) -> int:
        return self._stream.randrange(n)


class CounterDraws:
    """Draws addressed by (seed, sample, tag, index); order-independent."""

    def __init__(self, seed: int, sample: int):
        self._seed = seed
        self._sample = sample

    def init_u01(self) -> float:
        return rngmod.draw_u01(self._seed, self._sample, rngmod.TAG_INIT, 0)

    def walk_u01(self, i: int) -> float:
        return rngmod.draw_u01(self._seed, self._sample, rngmod.TAG_WALK, i)

    def shuffle_int(self, i: int, n: int) -> int:
        return rngmod.draw_int(self._seed, self._sample, rngmod.TAG_SHUFFLE, i, n)


def _initial_rank(mu_star: RankDist, u: float) -> int:
    acc = 0.0
    for r, p in enumerate(mu_star.probs):
        acc += float(p)
        if u < acc:
            return r
    return mu_star.R


def _dtable_thresholds(ell: int, r: int) -> tuple[float, float]:
    lr = float(ell) ** (-r)
    l2r = float(ell) ** (-2 * r)
    d_down = 1.0 - (ell + 1) * lr + ell * l2r
    d_zero = (ell + 1) * (lr - l2r)
    return d_down, d_down + d_zero


def _p2_transition(ell: int, r: int, mode: str, draws: "CounterDraws",
                   k: int) -> int:
    if mode == "two_step":
        u1 = draws.walk_u01(2 * k)
        r1 = r + 1 if u1 < float(ell) ** (-r) else r - 1
        u2 = draws.walk_u01(2 * k + 1)
        return r1 + 1 if u2 < float(ell) ** (-r1) else r1 - 1
    t_down, t_zero = _dtable_thresholds(ell, r)
    u = draws.walk_u01(k)
    if u < t_down:
        return r - 2
    if u < t_zero:
        return r
    return r + 2


def rank_walk(f: Poly, config: SimConfig, rng) -> int:
    """Walk the rank through the distinct irreducible factors of one f.

    rng may be a RandomStream (sequential draws) or a CounterDraws instance
    (the addressing the batch engine replicates). The curve must certify.
    """
    if not _certified(config.curve):
        raise ValueError("curve failed S_3 certification")
    draws = StreamDraws(rng) if isinstance(rng, RandomStream) else rng
    ell = config.curve.ell
    rank = _initial_rank(config.mu_star, draws.init_u01())
    factors = list(factor(f).distinct())
    if config.shuffle_factors:
        for i in range(len(factors) - 1):
            j = i + draws.shuffle_int(i, len(factors) - i)
            factors[i], factors[j] = factors[j], factors[i]
    k = 0
    for g in factors:
        place_class = _classify_cached(config.curve, g)
        if place_class == PlaceClass.P2:
            rank = _p2_transition(ell, rank, config.transition_mode, draws, k)
            k += 1
    return rank


# ---------------------------------------------------------------------------
# Experiment orchestration
# ---------------------------------------------------------------------------


@dataclass
class SimReport:
    config_echo: dict
    empirical: RankDist
    empirical_parity: float
    tv_to_theory: float
    rank_counts: dict
    class_factor_counts: dict
    p2_count_hist: dict
    fhat: dict
    ramified_factor_samples: int
    elapsed_seconds: float
    engine: str

    def to_dict(self) -> dict:
        return {
            "config": self.config_echo,
            "empirical_probs": [float(p) for p in self.empirical.probs],
            "empirical_tail": float(self.empirical.tail),
            "empirical_parity": self.empirical_parity,
            "tv_to_theory": self.tv_to_theory,
            "rank_counts": {str(k): v for k, v in sorted(self.rank_counts.items())},
            "class_factor_counts": self.class_factor_counts,
            "p2_count_hist": {str(k): v for k, v in sorted(self.p2_count_hist.items())},
            "fhat": self.fhat,
            "ramified_factor_samples": self.ramified_factor_samples,
            "elapsed_seconds": self.elapsed_seconds,
            "engine": self.engine,
        }


def _scalar_chunk(config: SimConfig, lo: int, hi: int) -> dict:
    """Reference engine: per-sample Python walk over samples [lo, hi)."""
    q = config.curve.field.q
    spec = config.curve.field
    cutoff = frak_n(max(config.n, 2), q)
    rank_counts: dict[int, int] = {}
    class_counts = {"P0": 0, "P2": 0, "Ramified": 0}
    p2_hist: dict[int, int] = {}
    w_hist: dict[int, int] = {}
    wprime_hist: dict[int, int] = {}
    large_p0 = 0
    ramified_samples = 0
    for s in range(lo, hi):
        coeffs = [
            rngmod.draw_int(config.seed, s, rngmod.TAG_COEFF, j, q)
            for j in range(config.n)
        ]
        f = Poly(spec, tuple(coeffs) + (1,))
        draws = CounterDraws(config.seed, s)
        ell = config.curve.ell
        rank = _initial_rank(config.mu_star, draws.init_u01())
        factors = list(factor(f).distinct())
        if config.shuffle_factors:
            for i in range(len(factors) - 1):
                j = i + draws.shuffle_int(i, len(factors) - i)
                factors[i], factors[j] = factors[j], factors[i]
        k = 0
        saw_ramified = False
        saw_large_p0 = False
        w_prime = 0
        for g in factors:
            place_class = _classify_cached(config.curve, g)
            class_counts[place_class.value] += 1
            if place_class == PlaceClass.Ramified:
                saw_ramified = True
            if g.degree > cutoff:
                w_prime += 1
                if place_class == PlaceClass.P0:
                    saw_large_p0 = True
            if place_class == PlaceClass.P2:
                rank = _p2_transition(ell, rank, config.transition_mode, draws, k)
                k += 1
        rank_counts[rank] = rank_counts.get(rank, 0) + 1
        p2_hist[k] = p2_hist.get(k, 0) + 1
        w_hist[len(factors)] = w_hist.get(len(factors), 0) + 1
        wprime_hist[w_prime] = wprime_hist.get(w_prime, 0) + 1
        if saw_ramified:
            ramified_samples += 1
        if saw_large_p0:
            large_p0 += 1
    return {
        "rank_counts": rank_counts,
        "class_counts": class_counts,
        "p2_hist": p2_hist,
        "w_hist": w_hist,
        "wprime_hist": wprime_hist,
        "large_p0": large_p0,
        "ramified_samples": ramified_samples,
    }


def _batch_chunk(config: SimConfig, lo: int, hi: int) -> dict:
    from . import _batch

    return _batch.walk_chunk(config, lo, hi)


def _run_chunk(args) -> dict:
    config, lo, hi, use_batch = args
    if use_batch:
        return _batch_chunk(config, lo, hi)
    return _scalar_chunk(config, lo, hi)


def _merge(parts: Sequence[dict]) -> dict:
    out = parts[0]
    for part in parts[1:]:
        for key in ("rank_counts", "class_counts", "p2_hist", "w_hist", "wprime_hist"):
            for k, v in part[key].items():
                out[key][k] = out[key].get(k, 0) + v
        out["large_p0"] += part["large_p0"]
        out["ramified_samples"] += part["ramified_samples"]
    return out


def run_experiment(config: SimConfig) -> SimReport:
    """Sample, walk, and aggregate; deterministic given (config, seed).

    Workers split the sample range into contiguous chunks; since every draw
    is addressed by sample index, the merged report is identical for any
    worker count.
    """
    if not _certified(config.curve):
        raise ValueError("curve failed S_3 certification")
    t0 = time.monotonic()
    use_batch = config.engine == "batch" or (
        config.engine == "auto"
        and config.curve.field.e == 1
        and not config.shuffle_factors
    )
    if config.engine == "batch" and config.shuffle_factors:
        raise ValueError("the batch engine does not implement factor shuffling")

    bounds = np.linspace(0, config.samples, config.workers + 1).astype(int)
    tasks = [
        (config, int(bounds[i]), int(bounds[i + 1]), use_batch)
        for i in range(config.workers)
        if bounds[i] < bounds[i + 1]
    ]
    if config.workers == 1:
        parts = [_run_chunk(tasks[0])]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(_run_chunk, tasks))
    merged = _merge(parts)

    R = config.mu_star.R
    total = config.samples
    probs = [merged["rank_counts"].get(r, 0) / total for r in range(R + 1)]
    tail = sum(v for k, v in merged["rank_counts"].items() if k > R) / total
    empirical = RankDist(tuple(probs), tail, R)
    rho0 = float(parity(config.mu_star))
    theory = parity_weighted_pr(config.curve.ell, rho0, R)
    tv = tv_distance(empirical.as_floats(), theory.as_floats())
    tv += 0.5 * abs(tail - float(theory.tail))

    elapsed = time.monotonic() - t0
    return SimReport(
        config_echo={
            "ell": config.curve.ell,
            "q": config.curve.field.q,
            "n": config.n,
            "samples": config.samples,
            "transition_mode": config.transition_mode,
            "seed": config.seed,
            "workers": config.workers,
            "shuffle_factors": config.shuffle_factors,
            "mu_star_parity": rho0,
        },
        empirical=empirical,
        empirical_parity=float(parity(empirical)),
        tv_to_theory=tv,
        rank_counts=merged["rank_counts"],
        class_factor_counts=merged["class_counts"],
        p2_count_hist=merged["p2_hist"],
        fhat={
            "w_hist": merged["w_hist"],
            "w_prime_hist": merged["wprime_hist"],
            "has_large_P0_count": merged["large_p0"],
            "frak_n": frak_n(max(config.n, 2), config.curve.field.q),
        },
        ramified_factor_samples=merged["ramified_samples"],
        elapsed_seconds=elapsed,
        engine="batch" if use_batch else "scalar",
    )


def operator_mixture_prediction(config: SimConfig, p2_count_hist: dict) -> RankDist:
    """The exact law implied by a P2-factor-count histogram: mix powers of
    the two-step operator applied to mu_star. Used as the cross-module
    oracle for the two_step transition mode."""
    R = config.mu_star.R
    op = MarkovOp(config.curve.ell, (0.0, 0.0, 1.0), R)
    total = sum(p2_count_hist.values())
    acc = np.zeros(R + 1)
    tail = 0.0
    dist = config.mu_star
    powers: dict[int, RankDist] = {0: dist}
    max_k = max(p2_count_hist) if p2_count_hist else 0
    for k in range(1, max_k + 1):
        prev = powers[k - 1]
        probs = op.apply_vector([float(x) for x in prev.probs])
        powers[k] = RankDist(tuple(probs), prev.tail, R)
    for k, cnt in p2_count_hist.items():
        weight = cnt / total
        acc += weight * powers[k].as_floats()
        tail += weight * float(powers[k].tail)
    return RankDist(tuple(acc), tail, R)


# ---------------------------------------------------------------------------
# Exact factor-count combinatorics
# ---------------------------------------------------------------------------


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q and q % p:
        p += 1
    if p * p > q:
        return True  # q itself prime
    while q % p == 0:
        q //= p
    return q == 1


def omega_distribution(q: int, n: int) -> dict[int, int]:
    """Exact count of monic degree-n polynomials over F_q with each number
    of distinct irreducible factors, by dynamic programming over factor
    degrees. Sums to q^n."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    if n > 64:
        raise ValueError("exact DP capped at degree 64")
    if not _is_prime_power(q):
        raise ValueError(f"q = {q} is not a prime power")
    # table[d][w] = number of monic degree-d products with w distinct factors
    table = [[0] * (n + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for d in range(1, n + 1):
        c_d = count_monic_irreducibles(q, d)
        # contributions of degree-d irreducibles: choose k distinct ones and
        # multiplicities >= 1 summing with total degree d*(k + extra)
        new = [row[:] for row in table]
        for k in range(1, n // d + 1):
            choose = math.comb(c_d, k)
            if choose == 0:
                break
            for extra in range(0, n // d - k + 1):
                ways = choose * math.comb(k - 1 + extra, extra)
                deg_add = d * (k + extra)
                if deg_add > n:
                    break
                for d0 in range(0, n - deg_add + 1):
                    for w0 in range(0, n + 1 - k):
                        v = table[d0][w0]
                        if v:
                            new[d0 + deg_add][w0 + k] += v * ways
        table = new
    out = {w: table[n][w] for w in range(n + 1) if table[n][w]}
    return out
