"""Rank-state Markov operators, their stationary laws, and the j-step
transition table.

The single-step operator moves rank r down with probability 1 - l^-r and up
with probability l^-r (so state 0 always moves to 1). Mixtures
d0*I + d1*M + d2*M^2 act on distributions truncated to {0..R}.

Truncation policy: the default "parity_reflect" redirects the blocked up-move
at the top state downward, so every single step still changes the rank by
exactly 1 and mixtures with d1 = 0 conserve parity exactly, for every input
distribution, even in rational arithmetic. The "sticky" policy keeps the
blocked mass at the top state instead; it is stochastically indistinguishable
at the default R but conserves parity only approximately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

Number = Union[float, Fraction]

DEFAULT_R = 60


@dataclass(frozen=True)
class RankDist:
    """A distribution over rank states {0..R} plus explicit tail mass."""

    probs: tuple[Number, ...]
    tail: Number
    R: int

    def __post_init__(self):
        if len(self.probs) != self.R + 1:
            raise ValueError("probs must have length R + 1")
        if any(p < 0 for p in self.probs) or self.tail < 0:
            raise ValueError("negative mass")
        total = sum(self.probs) + self.tail
        if isinstance(total, Fraction):
            if total != 1:
                raise ValueError(f"mass {total} != 1")
        elif abs(total - 1.0) > 1e-9:
            raise ValueError(f"mass {total} != 1 beyond tolerance")

    def parity(self) -> Number:
        return sum(self.probs[1::2])

    def mean(self) -> float:
        return float(sum(r * p for r, p in enumerate(self.probs)))

    def as_floats(self) -> np.ndarray:
        return np.array([float(p) for p in self.probs])


def point_mass(r: int, R: int = DEFAULT_R, exact: bool = False) -> RankDist:
    if not (0 <= r <= R):
        raise ValueError("point mass outside the state space")
    one: Number = Fraction(1) if exact else 1.0
    zero: Number = Fraction(0) if exact else 0.0
    probs = tuple(one if s == r else zero for s in range(R + 1))
    return RankDist(probs, zero, R)


def parity(dist: RankDist) -> Number:
    """Total mass on odd states. Tail mass is excluded (reported separately)."""
    return dist.parity()


def tv_distance(a: Sequence[float], b: Sequence[float]) -> float:
    n = max(len(a), len(b))
    aa = list(a) + [0.0] * (n - len(a))
    bb = list(b) + [0.0] * (n - len(b))
    return 0.5 * sum(abs(float(x) - float(y)) for x, y in zip(aa, bb))


class TailToleranceError(ValueError):
    """Input tail mass too large for the configured truncation bound."""


@dataclass(frozen=True)
class MarkovOp:
    """d0*I + d1*M + d2*M^2 on states {0..R}, entries generated by rule."""

    ell: int
    delta: tuple[Number, Number, Number]
    R: int = DEFAULT_R
    policy: str = "parity_reflect"
    tail_tol: float = 1e-9

    def __post_init__(self):
        if self.ell < 2:
            raise ValueError("ell must be at least 2")
        if self.policy not in ("parity_reflect", "sticky"):
            raise ValueError(f"unknown truncation policy {self.policy!r}")
        total = self.delta[0] + self.delta[1] + self.delta[2]
        if isinstance(total, Fraction):
            ok = total == 1
        else:
            ok = abs(float(total) - 1.0) < 1e-12
        if not ok or any(d < 0 for d in self.delta):
            raise ValueError("mixture weights must be a probability vector")

    def up_prob(self, r: int, exact: bool) -> Number:
        if exact:
            return Fraction(1, self.ell ** r)
        return float(self.ell) ** (-r)

    def _step(self, probs: list) -> list:
        """One application of the single-step operator to a mass vector."""
        R = self.R
        zero = probs[0] * 0
        out = [zero] * (R + 1)
        exact = isinstance(probs[0], Fraction)
        for r, mass in enumerate(probs):
            if mass == 0:
                continue
            up = self.up_prob(r, exact)
            down = (1 - up) if r > 0 else zero
            if r > 0:
                out[r - 1] += mass * down
            if r < R:
                out[r + 1] += mass * up
            elif self.policy == "parity_reflect":
                out[r - 1] += mass * up
            else:  # sticky
                out[r] += mass * up
        return out

    def apply_vector(self, probs: Sequence[Number]) -> list:
        d0, d1, d2 = self.delta
        v0 = list(probs)
        v1 = self._step(v0)
        v2 = self._step(v1)
        return [d0 * a + d1 * b + d2 * c for a, b, c in zip(v0, v1, v2)]

    def dense(self) -> np.ndarray:
        """Dense float matrix (row-stochastic); rows index source states."""
        R = self.R
        basis = np.eye(R + 1)
        rows = [self.apply_vector([float(x) for x in basis[r]]) for r in range(R + 1)]
        return np.array(rows)


def superelliptic_operator(ell: int, R: int = DEFAULT_R, exact: bool = False,
                           policy: str = "parity_reflect") -> MarkovOp:
    """The governing mixture (5/6)*I + (1/6)*M^2 for an S_3 cubic layer."""
    if exact:
        delta = (Fraction(5, 6), Fraction(0), Fraction(1, 6))
    else:
        delta = (5.0 / 6.0, 0.0, 1.0 / 6.0)
    return MarkovOp(ell, delta, R, policy)


def apply(op: MarkovOp, dist: RankDist, steps: int = 1) -> RankDist:
    """steps-fold application. Mass in range is conserved exactly; the tail
    is carried through unchanged (the operator never creates tail mass)."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if dist.R != op.R:
        raise ValueError("distribution and operator truncation bounds differ")
    if float(dist.tail) > op.tail_tol:
        raise TailToleranceError(
            f"tail mass {float(dist.tail):.3g} exceeds {op.tail_tol:.3g}; raise R"
        )
    probs = list(dist.probs)
    for _ in range(steps):
        probs = op.apply_vector(probs)
    return RankDist(tuple(probs), dist.tail, dist.R)


# ---------------------------------------------------------------------------
# Stationary laws
# ---------------------------------------------------------------------------


def _class_coeff_terms(ell: int, R: int) -> list[float]:
    """T_r = prod_{j<=r} l/(l^j - 1) for r = 0..R, as floats."""
    terms = [1.0]
    for j in range(1, R + 1):
        terms.append(terms[-1] * ell / (ell ** j - 1))
    return terms


def _class_coeff_terms_exact(ell: int, R: int) -> list[Fraction]:
    terms = [Fraction(1)]
    for j in range(1, R + 1):
        terms.append(terms[-1] * Fraction(ell, ell ** j - 1))
    return terms


def pr_normalizer(ell: int) -> float:
    """prod_{j>=1} (1 + l^-j)^-1.

    This equals the mass the per-parity-class coefficients assign to rank 0,
    and the m = 1 density constant of the point-count bounds.
    """
    prod = 1.0
    j = 1
    while True:
        factor = 1.0 + float(ell) ** (-j)
        prod *= factor
        if factor - 1.0 < 1e-18:
            break
        j += 1
    return 1.0 / prod


def pr_class_coefficients(ell: int, R: int = DEFAULT_R) -> list[float]:
    """N * T_r: sums to exactly 1 over each parity class (even r, odd r).

    This is the coefficient printed in the limiting law; its total over all
    states is 2, so it is a probability on each parity class, not on the
    whole state space.
    """
    n = pr_normalizer(ell)
    return [n * t for t in _class_coeff_terms(ell, R)]


def pr_distribution(ell: int, R: int = DEFAULT_R) -> RankDist:
    """The stationary rank law with balanced parity: half the class
    coefficients. Sums to 1; its value at 0 is pr_normalizer(ell) / 2."""
    coeffs = pr_class_coefficients(ell, R)
    probs = [0.5 * c for c in coeffs]
    tail = _class_tail_bound(ell, R)
    return RankDist(tuple(probs), tail, R)


def _class_tail_bound(ell: int, R: int) -> float:
    """Upper bound on the mass beyond R (already below 1e-12 for R >= 12)."""
    n = pr_normalizer(ell)
    t_next = _class_coeff_terms(ell, R + 1)[-1]
    ratio = ell / (ell ** (R + 2) - 1)
    return n * t_next / (1.0 - ratio)


def parity_weighted_pr(ell: int, rho0: float, R: int = DEFAULT_R) -> RankDist:
    """(1/2 + (-1)^r (1/2 - rho0)) * N * T_r.

    The even-state weight is (1 - rho0) and the odd-state weight rho0, applied
    to the per-class coefficients; since each class sums to 1 the result has
    total mass exactly 1 with no further normalization. It is stationary for
    every mixture with d1 = 0, with parity rho0.
    """
    if not (0 <= rho0 <= 1):
        raise ValueError("rho0 must lie in [0, 1]")
    coeffs = pr_class_coefficients(ell, R)
    probs = [
        ((1.0 - rho0) if r % 2 == 0 else rho0) * c for r, c in enumerate(coeffs)
    ]
    tail = _class_tail_bound(ell, R)
    # mass check tolerance is handled by RankDist; renormalize the float dust
    s = sum(probs) + tail
    probs = [p / s for p in probs]
    return RankDist(tuple(probs), tail / s, R)


# ---------------------------------------------------------------------------
# Convergence-rate estimation
# ---------------------------------------------------------------------------


class GammaEstimationError(RuntimeError):
    pass


def _stationary_class_vectors(op: MarkovOp) -> list[np.ndarray]:
    """The invariant probability vectors of the truncated operator, one per
    non-communicating parity class when d1 = 0, a single one otherwise."""
    coeffs = np.array(pr_class_coefficients(op.ell, op.R))
    d1 = float(op.delta[1])
    if d1 == 0.0:
        even = coeffs.copy()
        even[1::2] = 0.0
        odd = coeffs.copy()
        odd[0::2] = 0.0
        return [even / even.sum(), odd / odd.sum()]
    full = coeffs / coeffs.sum()
    return [full]


def estimate_gamma(
    op: MarkovOp,
    R: Optional[int] = None,
    max_iter: int = 200000,
    tol: float = 1e-13,
) -> float:
    """Modulus of the subdominant eigenvalue of the truncated operator.

    Power iteration on the complement of the stationary law(s), cross-checked
    by fitting the decay rate of total-variation distance; the two estimates
    must agree within 1e-3. R overrides the operator's own truncation bound.
    """
    if R is not None and R != op.R:
        import dataclasses

        op = dataclasses.replace(op, R=R)
    if op.R < 20:
        raise ValueError("truncation bound too small for spectral estimation")
    d0, d1, d2 = (float(x) for x in op.delta)
    if d0 >= 1.0 - 1e-15:
        raise GammaEstimationError("identity mixture has no mixing rate")
    P = op.dense()
    stationary = _stationary_class_vectors(op)

    def project(v: np.ndarray) -> np.ndarray:
        out = v.copy()
        if len(stationary) == 2:
            out -= out[0::2].sum() * stationary[0]
            out -= out[1::2].sum() * stationary[1]
        else:
            out -= out.sum() * stationary[0]
        return out

    rng = np.random.default_rng(12345)
    v = project(rng.standard_normal(op.R + 1))
    v /= np.linalg.norm(v)
    gamma = 0.0
    for it in range(max_iter):
        w = project(v @ P)
        norm = np.linalg.norm(w)
        if norm < 1e-300:
            raise GammaEstimationError("iterate vanished; operator degenerate")
        new_gamma = norm
        v = w / norm
        if it > 10 and abs(new_gamma - gamma) < tol:
            gamma = new_gamma
            break
        gamma = new_gamma
    else:
        raise GammaEstimationError("power iteration did not converge")

    gamma_fit = _fit_tv_rate(op, P, stationary)
    if abs(gamma_fit - gamma) > 1e-3:
        raise GammaEstimationError(
            f"method disagreement: power {gamma:.6f} vs TV fit {gamma_fit:.6f}"
        )
    return float(gamma)


def _fit_tv_rate(op: MarkovOp, P: np.ndarray, stationary: list[np.ndarray]) -> float:
    """Geometric decay rate of TV(mu P^n, stationary) from a point start."""
    r0 = 2
    mu = np.zeros(op.R + 1)
    mu[r0] = 1.0
    if len(stationary) == 2:
        target = stationary[r0 % 2]
    else:
        target = stationary[0]
    tvs = []
    for _ in range(400):
        mu = mu @ P
        tvs.append(0.5 * np.abs(mu - target).sum())
    ratios = [
        tvs[i + 1] / tvs[i]
        for i in range(len(tvs) - 1)
        if 1e-11 < tvs[i + 1] < 1e-2
    ]
    if not ratios:
        raise GammaEstimationError("no usable TV decay window")
    return float(np.median(ratios))


# ---------------------------------------------------------------------------
# Asymptotic exponent
# ---------------------------------------------------------------------------


def alpha_exponent(gamma: float, delta0: float, convention: str = "positive") -> float:
    """sup over rho in (0,1) of the min of the three rate terms.

    positive convention: min(rho*ln(rho) + 1 - rho, rho*ln(1/gamma),
    -rho*ln(1 - delta0)). The "literal" convention keeps the middle term as
    rho*ln(gamma) (negative for gamma < 1), which drives the sup to 0 at
    rho -> 0; it is exposed for comparison only.
    """
    if not (0.0 < gamma < 1.0):
        raise ValueError("gamma must lie in (0, 1)")
    if not (0.0 < delta0 < 1.0):
        raise ValueError("delta0 must lie in (0, 1)")
    if convention not in ("positive", "literal"):
        raise ValueError(f"unknown convention {convention!r}")

    if convention == "positive":
        mid = math.log(1.0 / gamma)
    else:
        mid = math.log(gamma)
    third = -math.log(1.0 - delta0)

    def objective(rho: float) -> float:
        return min(rho * math.log(rho) + 1.0 - rho, rho * mid, rho * third)

    lo, hi = 1e-12, 1.0 - 1e-12
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = objective(c), objective(d)
    for _ in range(300):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = objective(d)
        if b - a < 1e-14:
            break
    return max(objective((a + b) / 2.0), 0.0)


# ---------------------------------------------------------------------------
# The printed per-place transition table and its two-step comparison
# ---------------------------------------------------------------------------


def dtable(ell: int, r: int, place_class: str) -> dict[int, Fraction]:
    """Exact rank-change law {j: probability} for one place of the given class
    acting at rank r, as printed. P0 is a point mass at 0."""
    if r < 0:
        raise ValueError("rank must be >= 0")
    if place_class == "P0":
        return {0: Fraction(1)}
    lr = Fraction(1, ell ** r)
    l2r = Fraction(1, ell ** (2 * r))
    if place_class == "P1":
        return {-1: 1 - lr, +1: lr}
    if place_class == "P2":
        return {
            -2: 1 - (ell + 1) * lr + ell * l2r,
            0: (ell + 1) * (lr - l2r),
            +2: l2r,
        }
    raise ValueError(f"unknown place class {place_class!r}")


def two_step_law(ell: int, r: int) -> dict[int, Fraction]:
    """Exact law of two consecutive single steps started at rank r
    (never truncated; valid for every r >= 0)."""
    if r < 0:
        raise ValueError("rank must be >= 0")
    up0 = Fraction(1, ell ** r)
    down0 = 1 - up0
    out: dict[int, Fraction] = {}

    def add(j: int, p: Fraction) -> None:
        if p:
            out[j] = out.get(j, Fraction(0)) + p

    if down0:
        up1 = Fraction(1, ell ** (r - 1))
        add(-2, down0 * (1 - up1))
        add(0, down0 * up1)
    up1 = Fraction(1, ell ** (r + 1))
    add(0, up0 * (1 - up1))
    add(+2, up0 * up1)
    for j in (-2, 0, +2):
        out.setdefault(j, Fraction(0))
    return out


def compare_dtable_vs_two_step(ell: int, r_max: int) -> list[dict]:
    """Cellwise exact differences (printed P2 row minus the two-step law)."""
    if r_max < 2:
        raise ValueError("r_max must be >= 2")
    rows = []
    for r in range(r_max + 1):
        printed = dtable(ell, r, "P2")
        composed = two_step_law(ell, r)
        diff = {j: printed[j] - composed[j] for j in (-2, 0, +2)}
        rows.append(
            {
                "r": r,
                "printed": printed,
                "two_step": composed,
                "diff": diff,
                "printed_sum": sum(printed.values()),
                "two_step_sum": sum(composed.values()),
            }
        )
    return rows
