"""Frobenius classification of places for a cubic layer y^ell = F(x).

A place is a monic irreducible v in F_q[t]. Away from the discriminant the
splitting pattern of F modulo v determines a conjugacy class in S_3, which in
turn determines how a place moves the rank walk: transpositions and 3-cycles
have order prime to ell (class P0), the identity gives class P2, and order-ell
elements cannot occur in S_3 once ell >= 5, so P1 is empty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .ffpoly import (
    FieldSpec,
    Poly,
    RandomStream,
    _is_prime,
    count_monic_irreducibles,
    discriminant_cubic,
    enumerate_monic,
    factor,
    raw_add,
    raw_divmod,
    raw_mul,
    raw_powmod,
)

S3_ORDER = 6

FROB_CLASS_SIZES = {"Identity": 1, "Transposition": 3, "ThreeCycle": 2}

# Densities of the unramified conjugacy classes (|C| / |G|) and of the
# induced place classes (P0, P1, P2).
FROB_DENSITIES = {
    "Identity": Fraction(1, 6),
    "Transposition": Fraction(1, 2),
    "ThreeCycle": Fraction(1, 3),
}
PLACE_DENSITIES = {"P0": Fraction(5, 6), "P1": Fraction(0), "P2": Fraction(1, 6)}


class FrobClass(Enum):
    Identity = "Identity"
    Transposition = "Transposition"
    ThreeCycle = "ThreeCycle"
    Ramified = "Ramified"


class PlaceClass(Enum):
    P0 = "P0"
    P1 = "P1"
    P2 = "P2"
    Ramified = "Ramified"


FROB_TO_PLACE = {
    FrobClass.Identity: PlaceClass.P2,
    FrobClass.Transposition: PlaceClass.P0,
    FrobClass.ThreeCycle: PlaceClass.P0,
    FrobClass.Ramified: PlaceClass.Ramified,
}


def default_genus_bound(disc: Poly) -> int:
    """Upper bound on the genus of the degree-6 splitting-field cover.

    Riemann-Hurwitz over the rational function field with tame ramification:
    2g - 2 <= 6*(-2) + 6*(number of ramified places counted by degree), with
    one extra slot for the place at infinity.
    """
    return max(0, 1 - 6 + 3 * (disc.degree + 1))


@dataclass(frozen=True)
class CurveConfig:
    """The cubic layer x^3 + a2(t)x^2 + a1(t)x + a0(t) over F_q, with ell.

    coeffs = (a0, a1, a2), matching the constructor order of the discriminant
    helper. genus_L_bound defaults to a tame Riemann-Hurwitz bound.
    """

    ell: int
    field: FieldSpec
    coeffs: tuple[Poly, Poly, Poly]
    genus_L_bound: Optional[int] = None

    def __post_init__(self):
        if self.ell < 5 or not _is_prime(self.ell):
            raise ValueError("ell must be a prime >= 5")
        if self.field.p == self.ell:
            raise ValueError("characteristic must differ from ell")
        if self.field.q % self.ell != 1:
            raise ValueError(f"q = {self.field.q} is not 1 mod ell = {self.ell}")
        if len(self.coeffs) != 3:
            raise ValueError("coeffs must be (a0, a1, a2)")
        for c in self.coeffs:
            if c.field != self.field:
                raise ValueError("coefficient field mismatch")
        if self.disc.is_zero():
            raise ValueError("inseparable cubic: discriminant vanishes")
        if self.genus_L_bound is None:
            object.__setattr__(self, "genus_L_bound", default_genus_bound(self.disc))

    @cached_property
    def disc(self) -> Poly:
        return discriminant_cubic(self.coeffs)

    def fbar_coeffs(self, v: Poly) -> tuple[tuple[int, ...], ...]:
        """(a0, a1, a2) reduced modulo the place v, as raw tuples."""
        return tuple(raw_divmod(self.field, a.coeffs, v.coeffs)[1] for a in self.coeffs)


# ---------------------------------------------------------------------------
# S_3 certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class S3Certificate:
    certified: bool
    reason: Optional[str]
    root_candidates_checked: int
    disc_factor_multiplicities: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.certified


def _monic_divisors(factored, spec: FieldSpec) -> list[Poly]:
    """All monic divisors of a factored polynomial (including 1)."""
    divisors = [Poly(spec, (1,))]
    for g, mult in factored.factors:
        grown = []
        for d in divisors:
            acc = d
            for _ in range(mult):
                acc = acc * g
                grown.append(acc)
        divisors.extend(grown)
    return divisors


def _cubic_value(curve: CurveConfig, x: Poly) -> Poly:
    a0, a1, a2 = curve.coeffs
    return ((x + a2) * x + a1) * x + a0


def certify_s3(curve: CurveConfig) -> S3Certificate:
    """Certify that the cubic generates a full S_3 extension of F_q(t).

    Checks (a) no root in F_q[t]: a monic root would divide the constant
    coefficient, so all unit multiples of monic divisors of a0 are tested;
    (b) the discriminant is not a square: some irreducible factor with odd
    multiplicity, or a non-square leading coefficient.
    """
    spec = curve.field
    a0 = curve.coeffs[0]
    if curve.disc.is_zero():
        raise ValueError("inseparable cubic")
    if a0.is_zero():
        return S3Certificate(False, "root x = 0 (constant coefficient vanishes)", 1, ())

    checked = 0
    for d in _monic_divisors(factor(a0), spec):
        for u in range(1, spec.q):
            candidate = d.scale(u)
            checked += 1
            if _cubic_value(curve, candidate).is_zero():
                return S3Certificate(
                    False, f"root x = {candidate} in F_q[t]", checked, ()
                )

    disc_fact = factor(curve.disc)
    mults = tuple(m for _, m in disc_fact.factors)
    if all(m % 2 == 0 for m in mults):
        lead = curve.disc.leading()
        if spec.pow(lead, (spec.q - 1) // 2) == 1:
            return S3Certificate(
                False, "discriminant is a square in F_q[t]", checked, mults
            )
    return S3Certificate(True, None, checked, mults)


# ---------------------------------------------------------------------------
# Per-place classification
# ---------------------------------------------------------------------------


def _chi2_mod(curve: CurveConfig, value: tuple[int, ...], v: Poly) -> int:
    """Quadratic character of a nonzero residue in F_q[t]/(v): +1 or -1."""
    spec = curve.field
    exponent = (spec.q ** v.degree - 1) // 2
    r = raw_powmod(spec, value, exponent, v.coeffs)
    if r == (1,):
        return 1
    return -1


def _frobenius_fixes_cubic(curve: CurveConfig, v: Poly) -> bool:
    """Whether x^(q^deg v) == x in the residue ring R[x]/(Fbar), R = F_q[t]/(v).

    True exactly when the cubic splits completely in the residue field (given
    a square discriminant the alternative is an irreducible cubic).
    """
    spec = curve.field
    vc = v.coeffs
    a0b, a1b, a2b = curve.fbar_coeffs(v)
    # x^3 = s2*x^2 + s1*x + s0 in the quotient
    s = [
        tuple(spec.neg(c) for c in a0b),
        tuple(spec.neg(c) for c in a1b),
        tuple(spec.neg(c) for c in a2b),
    ]

    def redmod(a: tuple[int, ...]) -> tuple[int, ...]:
        return raw_divmod(spec, a, vc)[1]

    def mul(A, B):
        # product of two cubic residues, coefficients in R
        prod = [() for _ in range(5)]
        for i in range(3):
            if not A[i]:
                continue
            for j in range(3):
                if not B[j]:
                    continue
                prod[i + j] = raw_add(spec, prod[i + j], raw_mul(spec, A[i], B[j]))
        for k in (4, 3):
            c = prod[k]
            if c:
                prod[k] = ()
                for j in range(3):
                    if s[j]:
                        prod[k - 3 + j] = raw_add(
                            spec, prod[k - 3 + j], raw_mul(spec, c, s[j])
                        )
        return tuple(redmod(c) for c in prod[:3])

    x = ((), (1,), ())
    acc = ((1,), (), ())
    n = spec.q ** v.degree
    base = x
    while n:
        if n & 1:
            acc = mul(acc, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return acc == x


def classify_place(
    curve: CurveConfig, v: Poly, rng: Optional[RandomStream] = None
) -> tuple[FrobClass, PlaceClass]:
    """Classify one place by the splitting pattern of the cubic modulo v.

    The pattern is read off invariants rather than a full factorization: the
    quadratic character of the discriminant separates transpositions, and the
    Frobenius fixed-point test separates the identity from 3-cycles. The rng
    argument is accepted for interface parity; the result never depends on it.
    """
    if not v.is_monic() or v.degree < 1:
        raise ValueError("place must be a monic irreducible")
    spec = curve.field
    disc_res = raw_divmod(spec, curve.disc.coeffs, v.coeffs)[1]
    if not disc_res:
        return (FrobClass.Ramified, PlaceClass.Ramified)
    if _chi2_mod(curve, disc_res, v) == -1:
        return (FrobClass.Transposition, PlaceClass.P0)
    if _frobenius_fixes_cubic(curve, v):
        return (FrobClass.Identity, PlaceClass.P2)
    return (FrobClass.ThreeCycle, PlaceClass.P0)


# ---------------------------------------------------------------------------
# Exhaustive census
# ---------------------------------------------------------------------------


@dataclass
class DensityCensus:
    q: int
    ell: int
    max_degree: int
    per_degree: dict[int, dict[str, int]]

    def degree_total(self, d: int) -> int:
        return sum(self.per_degree[d].values())

    def cumulative_counts(self, up_to: Optional[int] = None) -> dict[str, int]:
        D = up_to if up_to is not None else self.max_degree
        out = {tag.value: 0 for tag in FrobClass}
        for d in range(1, D + 1):
            for tag, n in self.per_degree[d].items():
                out[tag] += n
        return out

    def cumulative_densities(self, up_to: Optional[int] = None) -> dict[str, float]:
        """Empirical class frequencies among unramified places of degree <= D."""
        counts = self.cumulative_counts(up_to)
        unram = sum(n for tag, n in counts.items() if tag != "Ramified")
        if unram == 0:
            raise ValueError("no unramified places counted")
        return {
            tag: counts[tag] / unram
            for tag in ("Identity", "Transposition", "ThreeCycle")
        }

    def place_class_densities(self, up_to: Optional[int] = None) -> dict[str, float]:
        frob = self.cumulative_densities(up_to)
        return {
            "P0": frob["Transposition"] + frob["ThreeCycle"],
            "P1": 0.0,
            "P2": frob["Identity"],
        }


def density_census(curve: CurveConfig, D: int, engine: str = "auto") -> DensityCensus:
    """Classify every monic irreducible of degree <= D.

    engine="batch" uses the vectorized classifier (base fields only),
    "scalar" the per-place loop; "auto" picks batch when available. Both
    produce identical counts; the scalar path is the reference.
    """
    if D < 1:
        raise ValueError("need max degree >= 1")
    if engine not in ("auto", "batch", "scalar"):
        raise ValueError(f"unknown engine {engine!r}")
    use_batch = engine == "batch" or (engine == "auto" and curve.field.e == 1)
    per_degree: dict[int, dict[str, int]] = {}
    if use_batch:
        from . import _batch

        for d in range(1, D + 1):
            per_degree[d] = _batch.classify_degree_counts(curve, d)
    else:
        for d in range(1, D + 1):
            counts = {tag.value: 0 for tag in FrobClass}
            for v in enumerate_monic(curve.field, d, filter="irreducible"):
                frob, _ = classify_place(curve, v)
                counts[frob.value] += 1
            per_degree[d] = counts
    census = DensityCensus(curve.field.q, curve.ell, D, per_degree)
    for d in range(1, D + 1):
        expected = count_monic_irreducibles(curve.field.q, d)
        if census.degree_total(d) != expected:
            raise AssertionError(
                f"census lost places at degree {d}: {census.degree_total(d)} != {expected}"
            )
    return census


# ---------------------------------------------------------------------------
# The 2-dimensional S_3 representation
# ---------------------------------------------------------------------------

# Images of the six permutations acting on the divisor differences
# (second minus first, third minus first); entries mod ell.
S3_MATRICES = {
    (1, 2, 3): ((1, 0), (0, 1)),
    (2, 1, 3): ((-1, -1), (0, 1)),
    (3, 2, 1): ((1, 0), (-1, -1)),
    (1, 3, 2): ((0, 1), (1, 0)),
    (2, 3, 1): ((-1, -1), (1, 0)),
    (3, 1, 2): ((0, 1), (-1, -1)),
}


def _mat_mul(A, B, ell: int):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(2)) % ell for j in range(2))
        for i in range(2)
    )


def _perm_compose(sigma, tau):
    """Apply tau first, then sigma; permutations as images of (1, 2, 3)."""
    return tuple(sigma[tau[i] - 1] for i in range(3))


def _fixed_space_dim(A, ell: int) -> int:
    """Dimension of ker(A - I) over F_ell for a 2x2 matrix."""
    a = (A[0][0] - 1) % ell
    b = A[0][1] % ell
    c = A[1][0] % ell
    d = (A[1][1] - 1) % ell
    det = (a * d - b * c) % ell
    if det != 0:
        return 0
    if a == b == c == d == 0:
        return 2
    return 1


def s3_representation_checks(ell: int) -> dict:
    """Exact checks on the 2-dimensional representation mod ell.

    Verifies the six matrices multiply like the permutations they are labeled
    with, that no line in F_ell^2 is stable under all of them, that only
    scalars commute with everything, and tabulates fixed-space dimensions.
    """
    if ell in (2, 3) or not _is_prime(ell) or ell < 5:
        raise ValueError("ell must be a prime >= 5")
    mats = {
        perm: tuple(tuple(x % ell for x in row) for row in M)
        for perm, M in S3_MATRICES.items()
    }

    homomorphism = all(
        _mat_mul(mats[s], mats[t], ell) == mats[_perm_compose(s, t)]
        for s in mats
        for t in mats
    )
    distinct = len(set(mats.values())) == 6

    # lines through the origin: spanned by (1, m) for each m, and (0, 1)
    lines = [(1, m) for m in range(ell)] + [(0, 1)]

    def moves_line(vec) -> bool:
        x, y = vec
        for M in mats.values():
            ix = (M[0][0] * x + M[0][1] * y) % ell
            iy = (M[1][0] * x + M[1][1] * y) % ell
            # invariant iff image is proportional to (x, y)
            if (ix * y - iy * x) % ell != 0:
                return True
        return False

    no_invariant_line = all(moves_line(v) for v in lines)

    scalars = {((c, 0), (0, c)) for c in range(1, ell)}
    centralizer = []
    gens = [mats[(2, 1, 3)], mats[(2, 3, 1)]]
    for a in range(ell):
        for b in range(ell):
            for c in range(ell):
                for d in range(ell):
                    M = ((a, b), (c, d))
                    if all(
                        _mat_mul(M, g, ell) == _mat_mul(g, M, ell) for g in gens
                    ):
                        centralizer.append(M)
    nonzero_centralizer = {M for M in centralizer if M != ((0, 0), (0, 0))}
    centralizer_is_scalar = nonzero_centralizer == scalars

    fixed_dims = {perm: _fixed_space_dim(M, ell) for perm, M in mats.items()}

    return {
        "ell": ell,
        "is_group_isomorphic_to_s3": homomorphism and distinct,
        "no_invariant_line": no_invariant_line,
        "centralizer_is_scalar": centralizer_is_scalar,
        "fixed_space_dims": fixed_dims,
        "passed": homomorphism
        and distinct
        and no_invariant_line
        and centralizer_is_scalar,
    }


# ---------------------------------------------------------------------------
# Effective equidistribution bounds
# ---------------------------------------------------------------------------


def chebotarev_bound(
    G_order: int, C_size: int, g_L: int, g_K: int, q: int, n: int
) -> float:
    """Deviation bound for the count of degree-n places with Frobenius in C.

    (2|C| / (n|G|)) * ((|G| + g_L) q^{n/2} + |G|(2 g_K + 1) q^{n/4} + |G| + g_L),
    rounded up one ulp so the float is a true upper bound.
    """
    if min(G_order, C_size, q, n) < 1 or g_L < 0 or g_K < 0:
        raise ValueError("all sizes must be positive (genera nonnegative)")
    if C_size > G_order:
        raise ValueError("conjugacy class cannot exceed the group")
    root = math.sqrt(q) ** n
    quarter = q ** (n / 4.0)
    val = (2.0 * C_size / (n * G_order)) * (
        (G_order + g_L) * root + G_order * (2 * g_K + 1) * quarter + (G_order + g_L)
    )
    return math.nextafter(val, math.inf)


def chebotarev_ratio_bound(
    G_order: int,
    S_size: int,
    Sprime_size: int,
    g_L: int,
    g_K: int,
    q: int,
    n: int,
) -> dict:
    """Deviation of the class-ratio count from |S|/|S'| at degree n.

    Valid once q^{n/2} - q^{n/4} exceeds twice the genus term; also evaluates
    the simplified power-saving form with its own n-threshold.
    """
    if min(G_order, S_size, Sprime_size, q, n) < 1 or g_L < 0 or g_K < 0:
        raise ValueError("sizes must be positive (genera nonnegative)")
    c = G_order + g_L + 2 * g_K
    gap = math.sqrt(q) ** n - q ** (n / 4.0)
    condition_met = gap > 2 * c
    ratio = S_size / Sprime_size
    bound = 4.0 * ratio * c / (gap - 2 * c) if condition_met else math.inf
    n_threshold = 2.0 * (math.log(8.0) + math.log(c)) / math.log(q)
    simplified = 16.0 * ratio * c / math.sqrt(q) ** n
    return {
        "condition_met": condition_met,
        "bound": bound,
        "simplified_bound": simplified,
        "simplified_valid": n >= n_threshold,
        "n_threshold": n_threshold,
    }


def chebotarev_audit(
    curve: CurveConfig, D: int, census: Optional[DensityCensus] = None
) -> dict:
    """Compare the census against the main term and bound at every degree <= D.

    The base field is rational (g_K = 0); g_L comes from the curve config.
    """
    if census is None:
        census = density_census(curve, D)
    q = curve.field.q
    g_L = curve.genus_L_bound
    rows = []
    violations = 0
    for n in range(1, D + 1):
        for tag, c_size in FROB_CLASS_SIZES.items():
            observed = census.per_degree[n][tag]
            main = (c_size / S3_ORDER) * q ** n / n
            bound = chebotarev_bound(S3_ORDER, c_size, g_L, 0, q, n)
            deviation = abs(observed - main)
            within = deviation < bound
            violations += 0 if within else 1
            rows.append(
                {
                    "degree": n,
                    "class": tag,
                    "observed": observed,
                    "main_term": main,
                    "deviation": deviation,
                    "bound": bound,
                    "within_bound": within,
                }
            )
    cumulative = census.cumulative_densities(D)
    return {
        "q": q,
        "g_L": g_L,
        "g_K": 0,
        "max_degree": D,
        "rows": rows,
        "violations": violations,
        "all_within_bound": violations == 0,
        "cumulative_densities": cumulative,
        "theoretical_densities": {k: float(v) for k, v in FROB_DENSITIES.items()},
    }
