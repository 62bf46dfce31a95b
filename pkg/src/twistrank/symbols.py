"""ell-th power residue symbols on F_q[t] and their joint distribution.

The group mu_ell of ell-th roots of unity sits inside F_q whenever
q = 1 mod ell. Symbols are stored as discrete logs with respect to a fixed
generator, so multiplicativity and the product cells of the census are plain
integer arithmetic mod ell.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .ffpoly import (
    FieldSpec,
    Poly,
    RandomStream,
    _is_prime,
    _prime_divisors,
    enumerate_monic,
    factor,
    is_irreducible,
    raw_divmod,
    raw_gcd,
    raw_powmod,
)


@dataclass(frozen=True)
class MuEll:
    """The order-ell subgroup of F_q^*, with its discrete-log table."""

    ell: int
    field: FieldSpec
    generator: int
    elements: tuple[int, ...]
    dlog: dict

    def power(self, k: int) -> int:
        return self.elements[k % self.ell]


@dataclass(frozen=True)
class SymbolValue:
    """A residue symbol as the exponent of the chosen generator."""

    exponent: int
    ell: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % self.ell)

    def __mul__(self, other: "SymbolValue") -> "SymbolValue":
        if self.ell != other.ell:
            raise ValueError("symbols from different groups")
        return SymbolValue(self.exponent + other.exponent, self.ell)

    def is_trivial(self) -> bool:
        return self.exponent == 0


def _multiplicative_order_is(spec: FieldSpec, g: int, n: int) -> bool:
    """Whether g has multiplicative order exactly n in F_q^*."""
    if spec.pow(g, n) != 1:
        return False
    return all(spec.pow(g, n // r) != 1 for r in _prime_divisors(n))


def smallest_primitive_root(spec: FieldSpec) -> int:
    """The least canonical representative generating F_q^*."""
    n = spec.q - 1
    for g in range(2, spec.q):
        if _multiplicative_order_is(spec, g, n):
            return g
    raise AssertionError("no primitive root found; field arithmetic is broken")


def build_mu(spec: FieldSpec, ell: int) -> MuEll:
    """mu_ell inside F_q, generated by g0^((q-1)/ell) for the smallest
    primitive root g0. The order is re-verified by brute force."""
    if ell < 5 or not _is_prime(ell):
        raise ValueError("ell must be a prime >= 5")
    if (spec.q - 1) % ell != 0:
        raise ValueError(f"ell = {ell} does not divide q - 1 = {spec.q - 1}")
    g0 = smallest_primitive_root(spec)
    gen = spec.pow(g0, (spec.q - 1) // ell)
    elements = [1]
    for _ in range(ell - 1):
        elements.append(spec.mul(elements[-1], gen))
    if spec.mul(elements[-1], gen) != 1 or len(set(elements)) != ell:
        raise AssertionError("generator does not have order ell")
    dlog = {v: k for k, v in enumerate(elements)}
    return MuEll(ell, spec, gen, tuple(elements), dlog)


def symbol(a: Poly, pi: Poly, mu: MuEll) -> SymbolValue:
    """The ell-th power residue symbol of a modulo the place pi.

    Computed as a^((q^deg pi - 1)/ell) in the residue field; the result lands
    in mu_ell subset F_q and comes back as its discrete log. Trivial exactly
    when a is an ell-th power residue.
    """
    spec = a.field
    if spec != mu.field:
        raise ValueError("field mismatch")
    if pi.degree < 1 or not pi.is_monic():
        raise ValueError("modulus must be a monic place")
    res = raw_divmod(spec, a.coeffs, pi.coeffs)[1]
    if not res:
        raise ZeroDivisionError("symbol undefined: a = 0 mod pi")
    exponent = (spec.q ** pi.degree - 1) // mu.ell
    r = raw_powmod(spec, res, exponent, pi.coeffs)
    if len(r) != 1 or r[0] not in mu.dlog:
        raise AssertionError("symbol left mu_ell; pi is likely not irreducible")
    return SymbolValue(mu.dlog[r[0]], mu.ell)


def jacobi_symbol(
    a: Poly, g: Poly, mu: MuEll, rng: Optional[RandomStream] = None
) -> SymbolValue:
    """Multiplicative extension of the symbol to arbitrary nonzero moduli:
    the exponents over the factorization of g add, weighted by multiplicity.
    Units contribute nothing."""
    if g.is_zero():
        raise ValueError("zero modulus")
    spec = a.field
    if raw_gcd(spec, a.coeffs, g.coeffs) not in ((), (1,)):
        raise ValueError("a and g share a factor; symbol undefined")
    total = 0
    for pi, mult in factor(g, rng).factors:
        total += mult * symbol(a, pi, mu).exponent
    return SymbolValue(total, mu.ell)


@dataclass
class CensusTable:
    """Joint symbol-vector counts over places of one degree."""

    ell: int
    degree: int
    moduli: tuple[Poly, ...]
    class_filter: Optional[str]
    total: int
    counts: dict

    @property
    def omega(self) -> int:
        return len(self.moduli)

    @property
    def uniform(self) -> float:
        return self.total / self.ell ** self.omega

    def deviation(self, cell: tuple[int, ...]) -> float:
        return self.counts[cell] - self.uniform

    def max_abs_deviation(self) -> float:
        return max(abs(self.deviation(c)) for c in self.counts)

    def max_relative_deviation(self) -> float:
        if self.total == 0:
            raise ValueError("empty census")
        return self.max_abs_deviation() / self.uniform

    def rows(self) -> list[dict]:
        out = []
        for cell in sorted(self.counts):
            out.append(
                {
                    "cell": ",".join(str(e) for e in cell) if cell else "()",
                    "count": self.counts[cell],
                    "deviation": self.deviation(cell),
                }
            )
        return out


def equidistribution_census(
    h: Sequence[Poly],
    i: int,
    mu: MuEll,
    class_filter=None,
    curve=None,
) -> CensusTable:
    """Count places v of degree i by their joint symbol vector modulo the h_j.

    Every cell of (Z/ell)^omega appears, zero counts included. Places equal to
    one of the moduli are excluded (the symbol is undefined there); when a
    class filter is given, places are first classified via the curve.
    """
    if i < 1:
        raise ValueError("degree must be >= 1")
    keys = set()
    for hj in h:
        if not is_irreducible(hj) or not hj.is_monic():
            raise ValueError(f"modulus {hj} is not a monic irreducible")
        if hj.coeffs in keys:
            raise ValueError("moduli must be pairwise distinct")
        keys.add(hj.coeffs)
    if class_filter is not None and curve is None:
        raise ValueError("class filtering requires a curve")
    if curve is not None and h and h[0].field != curve.field:
        raise ValueError("field mismatch between moduli and curve")

    from .places import classify_place

    spec = mu.field
    ell = mu.ell
    omega = len(h)
    counts = {cell: 0 for cell in itertools.product(range(ell), repeat=omega)}
    total = 0
    wanted = getattr(class_filter, "value", class_filter)
    for v in enumerate_monic(spec, i, filter="irreducible"):
        if v.coeffs in keys:
            continue
        if wanted is not None:
            _, place_class = classify_place(curve, v)
            if place_class.value != wanted:
                continue
        cell = tuple(symbol(v, hj, mu).exponent for hj in h)
        counts[cell] += 1
        total += 1
    return CensusTable(ell, i, tuple(h), wanted, total, counts)
