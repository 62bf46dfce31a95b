"""Exact arithmetic in F_q and F_q[t].

Field elements are canonical integers in [0, q): for prime fields the residue
itself, for extension fields the base-p digit packing of the coefficient vector
of the residue polynomial. Polynomials over F_q are immutable coefficient
tuples, low degree first, with no stored trailing zeros. The zero polynomial
has degree -1 (sentinel).

Everything here is pure and exact; no floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

DEG_ZERO = -1

# Default cap on q^d work for exhaustive enumeration.
ENUM_BUDGET = 2 ** 24


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A finite field F_q with q = p^e.

    For e > 1 a monic irreducible modulus of degree e over F_p must be given
    as a low-first coefficient tuple (its leading 1 included). Elements are
    integers in [0, q) packing residue coefficients base p.
    """

    p: int
    e: int = 1
    modulus: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.p in (2, 3):
            raise ValueError("characteristic 2 and 3 are not supported")
        if self.e < 1:
            raise ValueError("extension exponent must be >= 1")
        if self.e == 1:
            if self.modulus is not None:
                raise ValueError("modulus only applies to extension fields")
        else:
            m = self.modulus
            if m is None or len(m) != self.e + 1 or m[-1] != 1:
                raise ValueError("extension field needs a monic modulus of degree e")

    @property
    def q(self) -> int:
        return self.p ** self.e

    # ---- element arithmetic -------------------------------------------------

    def _unpack(self, a: int) -> list[int]:
        p = self.p
        digits = []
        for _ in range(self.e):
            a, r = divmod(a, p)
            digits.append(r)
        return digits

    def _pack(self, digits: Sequence[int]) -> int:
        v = 0
        for d in reversed(digits):
            v = v * self.p + d
        return v

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        da, db = self._unpack(a), self._unpack(b)
        return self._pack([(x + y) % self.p for x, y in zip(da, db)])

    def sub(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a - b) % self.p
        da, db = self._unpack(a), self._unpack(b)
        return self._pack([(x - y) % self.p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        return self.sub(0, a)

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        da, db = self._unpack(a), self._unpack(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        # reduce by the monic modulus
        m = self.modulus
        for k in range(len(prod) - 1, self.e - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                for j in range(self.e):
                    prod[k - self.e + j] = (prod[k - self.e + j] - c * m[j]) % self.p
        return self._pack(prod[: self.e])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if self.e == 1:
            return pow(a, n, self.p)
        acc = 1
        base = a
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc


def field_arith(spec: FieldSpec, a: int, b: int, op: str) -> int:
    """Dispatch a single field operation by name (add, sub, mul, div)."""
    for x in (a, b):
        if not (0 <= x < spec.q):
            raise ValueError(f"{x} is not a canonical element of F_{spec.q}")
    if op == "add":
        return spec.add(a, b)
    if op == "sub":
        return spec.sub(a, b)
    if op == "mul":
        return spec.mul(a, b)
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return spec.div(a, b)
    raise ValueError(f"unknown field op {op!r}")


# ---------------------------------------------------------------------------
# Polynomials over F_q, as coefficient tuples (low degree first).
# ---------------------------------------------------------------------------


def _trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True)
class Poly:
    """Element of F_q[t]. coeffs[i] is the t^i coefficient; () is zero."""

    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))
        q = self.field.q
        if any(not (0 <= c < q) for c in self.coeffs):
            raise ValueError("coefficients must be canonical residues")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def leading(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    # Arithmetic. These delegate to the tuple-level helpers below so that hot
    # loops can bypass object construction.

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly(self.field, raw_add(self.field, self.coeffs, other.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly(self.field, raw_sub(self.field, self.coeffs, other.coeffs))

    def __neg__(self) -> "Poly":
        return Poly(self.field, tuple(self.field.neg(c) for c in self.coeffs))

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly(self.field, raw_mul(self.field, self.coeffs, other.coeffs))

    def __mod__(self, other: "Poly") -> "Poly":
        self._check(other)
        _, r = raw_divmod(self.field, self.coeffs, other.coeffs)
        return Poly(self.field, r)

    def __floordiv__(self, other: "Poly") -> "Poly":
        self._check(other)
        q, _ = raw_divmod(self.field, self.coeffs, other.coeffs)
        return Poly(self.field, q)

    def scale(self, c: int) -> "Poly":
        f = self.field
        return Poly(f, tuple(f.mul(c, x) for x in self.coeffs))

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        if lead == 1:
            return self
        return self.scale(self.field.inv(lead))

    def evaluate(self, x: int) -> int:
        f = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def derivative(self) -> "Poly":
        f = self.field
        d = []
        for i, c in enumerate(self.coeffs[1:], start=1):
            k = i % f.p
            d.append(f.mul(k, c) if k else 0)
        return Poly(f, tuple(d))

    def _check(self, other: "Poly") -> None:
        if self.field != other.field:
            raise ValueError("polynomials over different fields")

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("t" if c == 1 else f"{c}*t")
            else:
                parts.append(f"t^{i}" if c == 1 else f"{c}*t^{i}")
        return " + ".join(reversed(parts))


def poly(spec: FieldSpec, coeffs: Sequence[int]) -> Poly:
    """Build a Poly, reducing arbitrary integer coefficients into the field."""
    if spec.e == 1:
        return Poly(spec, tuple(c % spec.p for c in coeffs))
    return Poly(spec, tuple(c % spec.q for c in coeffs))


def zero(spec: FieldSpec) -> Poly:
    return Poly(spec, ())


def one(spec: FieldSpec) -> Poly:
    return Poly(spec, (1,))


def t_poly(spec: FieldSpec) -> Poly:
    return Poly(spec, (0, 1))


def constant(spec: FieldSpec, c: int) -> Poly:
    return poly(spec, (c,))


# ---- tuple-level kernels ---------------------------------------------------


def raw_add(f: FieldSpec, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = f.add(out[i], c)
    return _trim(out)


def raw_sub(f: FieldSpec, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = list(a) + [0] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = f.sub(out[i], c)
    return _trim(out)


def raw_mul(f: FieldSpec, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    if f.e == 1:
        p = f.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return _trim([c % p for c in out])
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = f.add(out[i + j], f.mul(x, y))
    return _trim(out)


def raw_divmod(
    f: FieldSpec, a: tuple[int, ...], b: tuple[int, ...]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    inv_lead = f.inv(b[-1])
    rem = list(a)
    qlen = len(a) - len(b) + 1
    quot = [0] * qlen
    for k in range(qlen - 1, -1, -1):
        c = rem[k + len(b) - 1]
        if c:
            factor = f.mul(c, inv_lead)
            quot[k] = factor
            for j in range(len(b)):
                rem[k + j] = f.sub(rem[k + j], f.mul(factor, b[j]))
    return _trim(quot), _trim(rem)


def raw_gcd(f: FieldSpec, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    while b:
        _, r = raw_divmod(f, a, b)
        a, b = b, r
    if a:
        inv_lead = f.inv(a[-1])
        if a[-1] != 1:
            a = _trim([f.mul(c, inv_lead) for c in a])
    return a


def raw_powmod(
    f: FieldSpec, base: tuple[int, ...], n: int, mod: tuple[int, ...]
) -> tuple[int, ...]:
    if not mod:
        raise ZeroDivisionError("zero modulus")
    _, base = raw_divmod(f, base, mod)
    acc: tuple[int, ...] = (1,)
    if len(mod) == 1:
        return ()
    while n:
        if n & 1:
            _, acc = raw_divmod(f, raw_mul(f, acc, base), mod)
        n >>= 1
        if n:
            _, base = raw_divmod(f, raw_mul(f, base, base), mod)
    return acc


def poly_gcd(a: Poly, b: Poly) -> Poly:
    a._check(b)
    return Poly(a.field, raw_gcd(a.field, a.coeffs, b.coeffs))


def poly_powmod(base: Poly, n: int, mod: Poly) -> Poly:
    base._check(mod)
    if mod.is_zero():
        raise ZeroDivisionError("zero modulus")
    return Poly(base.field, raw_powmod(base.field, base.coeffs, n, mod.coeffs))


def poly_arith(f: Poly, g: Poly, op: str, exponent: Optional[int] = None) -> Poly:
    """Named dispatch over ring operations; powmod takes f^exponent mod g."""
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "mod":
        if g.is_zero():
            raise ZeroDivisionError("zero modulus")
        return f % g
    if op == "gcd":
        return poly_gcd(f, g)
    if op == "powmod":
        if exponent is None:
            raise ValueError("powmod needs an exponent")
        return poly_powmod(f, exponent, g)
    raise ValueError(f"unknown poly op {op!r}")


# ---------------------------------------------------------------------------
# Irreducibility, factorization
# ---------------------------------------------------------------------------


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: Poly) -> bool:
    """Deterministic irreducibility test over F_q.

    Uses the classical criterion: t^(q^n) == t mod f, and for every prime
    divisor r of n, gcd(t^(q^(n/r)) - t, f) = 1.
    """
    n = f.degree
    if n < 1:
        raise ValueError("irreducibility is defined for degree >= 1")
    if n == 1:
        return True
    spec = f.field
    q = spec.q
    mod = f.coeffs
    x = (0, 1)
    h = raw_powmod(spec, x, q ** n, mod)
    if _trim(raw_sub(spec, h, x)):
        return False
    for r in _prime_divisors(n):
        h = raw_powmod(spec, x, q ** (n // r), mod)
        g = raw_gcd(spec, raw_sub(spec, h, x), mod)
        if len(g) != 1:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """unit * prod(factor^multiplicity); factors monic irreducible, distinct."""

    unit: int
    factors: tuple[tuple[Poly, int], ...]

    def rebuild(self, spec: FieldSpec) -> Poly:
        acc = constant(spec, self.unit)
        for g, m in self.factors:
            for _ in range(m):
                acc = acc * g
        return acc

    def distinct(self) -> tuple[Poly, ...]:
        return tuple(g for g, _ in self.factors)


class RandomStream:
    """Tiny deterministic uniform source used where algorithms randomize.

    Wraps a splitmix64 counter; results depend only on the seed and the number
    of draws, never on wall clock or process state.
    """

    def __init__(self, seed: int = 0):
        self._state = seed & 0xFFFFFFFFFFFFFFFF
        self._i = 0

    def next_u64(self) -> int:
        from .rng import splitmix64

        self._i += 1
        return splitmix64(self._state + 0x9E3779B97F4A7C15 * self._i)

    def randrange(self, n: int) -> int:
        # 53-bit draw; bias is < 2^-40 for any n used here.
        return (self.next_u64() >> 11) % n


def _random_poly(spec: FieldSpec, deg_bound: int, rng: RandomStream) -> tuple[int, ...]:
    return _trim([rng.randrange(spec.q) for _ in range(deg_bound)])


def _squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Return [(g_i, m_i)] with f/lead = prod g_i^m_i, g_i squarefree... actually
    each g_i monic irreducible-free-of-repeats is not required here: returns
    (squarefree polynomial, multiplicity) pairs with distinct multiplicities
    handled by recursion on p-th powers in characteristic p.
    """
    spec = f.field
    p = spec.p
    out: list[tuple[Poly, int]] = []

    def rec(g: Poly, mult: int) -> None:
        # g monic nonconstant
        d = g.derivative()
        if d.is_zero():
            # g = h(t^p): take p-th root coefficientwise and recurse
            root_coeffs = []
            for i in range(0, g.degree + 1, p):
                c = g.coeffs[i] if i < len(g.coeffs) else 0
                # p-th root in F_q: x -> x^(p^(e-1))
                root_coeffs.append(spec.pow(c, p ** (spec.e - 1)))
            rec(Poly(spec, tuple(root_coeffs)), mult * p)
            return
        u = poly_gcd(g, d)
        v = g // u  # product of distinct factors with multiplicity not divisible by p
        k = 1
        while v.degree > 0:
            # factors of multiplicity exactly k in g sit in v / gcd(u, v)
            w = poly_gcd(u, v)
            piece = v // w
            if piece.degree > 0:
                out.append((piece.monic(), mult * k))
            v = w
            u = u // w
            k += 1
        if u.degree > 0:
            # leftover: every factor multiplicity divisible by p
            rec(u.monic(), mult)

    g = f.monic()
    if g.degree > 0:
        rec(g, 1)
    return out


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """On squarefree monic input: [(product of degree-d factors, d)]."""
    spec = f.field
    q = spec.q
    out = []
    work = f.coeffs
    h = (0, 1)
    d = 0
    while len(work) - 1 >= 2 * (d + 1):
        d += 1
        h = raw_powmod(spec, h, q, work)
        g = raw_gcd(spec, raw_sub(spec, h, (0, 1)), work)
        if len(g) > 1:
            out.append((Poly(spec, g), d))
            work_q, rem = raw_divmod(spec, work, g)
            assert not rem
            work = work_q
            _, h = raw_divmod(spec, h, work)
    if len(work) > 1:
        out.append((Poly(spec, work), len(work) - 1))
    return out


def _equal_degree_split(f: Poly, d: int, rng: RandomStream) -> list[Poly]:
    """Cantor-Zassenhaus on a squarefree product of degree-d irreducibles (odd q)."""
    spec = f.field
    if f.degree == d:
        return [f]
    exponent = (spec.q ** d - 1) // 2
    while True:
        a = _random_poly(spec, f.degree, rng)
        if len(a) <= 1:
            continue
        g = raw_gcd(spec, a, f.coeffs)
        if len(g) > 1:
            h = Poly(spec, g)
        else:
            b = raw_powmod(spec, a, exponent, f.coeffs)
            g = raw_gcd(spec, raw_sub(spec, b, (1,)), f.coeffs)
            if len(g) <= 1 or len(g) == len(f.coeffs):
                continue
            h = Poly(spec, g)
        rest = f // h
        return _equal_degree_split(h, d, rng) + _equal_degree_split(rest, d, rng)


def factor(f: Poly, rng: Optional[RandomStream] = None) -> Factorization:
    """Full factorization into monic irreducibles.

    The stream only steers equal-degree splitting; the returned factorization
    is unique (sorted by degree, then packed coefficient value).
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if rng is None:
        rng = RandomStream(0xC0FFEE)
    spec = f.field
    unit = f.leading()
    found: dict[tuple[int, ...], int] = {}
    for sq, mult in _squarefree_decomposition(f):
        for prod, d in _distinct_degree(sq):
            if prod.degree == d:
                pieces = [prod]
            elif d == 1:
                pieces = [
                    Poly(spec, (spec.neg(c), 1))
                    for c in range(spec.q)
                    if prod.evaluate(c) == 0
                ]
            else:
                pieces = _equal_degree_split(prod, d, rng)
            for piece in pieces:
                key = piece.coeffs
                found[key] = found.get(key, 0) + mult
    items = sorted(found.items(), key=lambda kv: (len(kv[0]), kv[0][::-1]))
    return Factorization(unit, tuple((Poly(spec, k), m) for k, m in items))


# ---------------------------------------------------------------------------
# Counting, enumeration, sampling
# ---------------------------------------------------------------------------


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    m = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            m = -m
        d += 1
    if n > 1:
        m = -m
    return m


def count_monic_irreducibles(q: int, d: int) -> int:
    """Exact number of monic irreducibles of degree d over F_q (necklace count)."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(e) * q ** (d // e)
    assert total % d == 0
    return total // d


class EnumerationBudgetExceeded(Exception):
    """q^d exceeds the configured exhaustive-enumeration budget; sample instead."""


def index_to_monic(spec: FieldSpec, d: int, idx: int) -> Poly:
    """The idx-th monic degree-d polynomial in lexicographic order.

    Lexicographic means by coefficient vector from the top: the t^(d-1)
    coefficient is the most significant digit of idx base q.
    """
    q = spec.q
    digits = []
    for _ in range(d):
        idx, r = divmod(idx, q)
        digits.append(r)
    return Poly(spec, tuple(digits) + (1,))


def monic_to_index(f: Poly) -> int:
    q = f.field.q
    idx = 0
    for c in reversed(f.coeffs[:-1]):
        idx = idx * q + c
    return idx


def enumerate_monic(
    spec: FieldSpec, d: int, filter: str = "all", budget: int = ENUM_BUDGET
) -> Iterator[Poly]:
    """Yield monic degree-d polynomials in lexicographic order.

    filter="irreducible" keeps only irreducibles. Raises
    EnumerationBudgetExceeded when q^d > budget.
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    if filter not in ("all", "irreducible"):
        raise ValueError(f"unknown filter {filter!r}")
    q = spec.q
    if q ** d > budget:
        raise EnumerationBudgetExceeded(f"q^d = {q ** d} exceeds budget {budget}")
    for idx in range(q ** d):
        f = index_to_monic(spec, d, idx)
        if filter == "irreducible" and not is_irreducible(f):
            continue
        yield f


def sample_monic(spec: FieldSpec, n: int, rng: RandomStream) -> Poly:
    """Uniform monic polynomial of degree n, driven by the given stream."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    coeffs = [rng.randrange(spec.q) for _ in range(n)]
    return Poly(spec, tuple(coeffs) + (1,))


# ---------------------------------------------------------------------------
# Cubic discriminant
# ---------------------------------------------------------------------------


def discriminant_cubic(coeffs: Sequence[Poly]) -> Poly:
    """Discriminant of the monic cubic x^3 + a2*x^2 + a1*x + a0.

    coeffs = (a0, a1, a2), each a Poly over the same field. The closed form is
    18*a2*a1*a0 - 4*a2^3*a0 + a2^2*a1^2 - 4*a1^3 - 27*a0^2; cross-checked in
    tests against the resultant of the cubic and its x-derivative.
    """
    if len(coeffs) != 3:
        raise ValueError("need exactly the three lower coefficients (a0, a1, a2)")
    a0, a1, a2 = coeffs
    spec = a0.field
    c = lambda k: constant(spec, k)
    term1 = c(18) * a2 * a1 * a0
    term2 = c(4) * a2 * a2 * a2 * a0
    term3 = a2 * a2 * a1 * a1
    term4 = c(4) * a1 * a1 * a1
    term5 = c(27) * a0 * a0
    return term1 - term2 + term3 - term4 - term5


def resultant_cubic_derivative(coeffs: Sequence[Poly]) -> Poly:
    """Resultant of x^3 + a2 x^2 + a1 x + a0 and its derivative, up to sign.

    disc = -Res(F, F') for a monic cubic. Computed via the Sylvester matrix
    determinant with Poly entries (5x5, expanded by minors). Used as the
    independent cross-check for discriminant_cubic.
    """
    a0, a1, a2 = coeffs
    spec = a0.field
    c = lambda k: constant(spec, k)
    z = zero(spec)
    # rows: F twice, F' three times; columns are descending powers of x (deg 4..0)
    rows = [
        [c(1), a2, a1, a0, z],
        [z, c(1), a2, a1, a0],
        [c(3), c(2) * a2, a1, z, z],
        [z, c(3), c(2) * a2, a1, z],
        [z, z, c(3), c(2) * a2, a1],
    ]

    def det(m: list[list[Poly]]) -> Poly:
        if len(m) == 1:
            return m[0][0]
        acc = zero(spec)
        for j, entry in enumerate(m[0]):
            if entry.is_zero():
                continue
            minor = [row[:j] + row[j + 1 :] for row in m[1:]]
            term = entry * det(minor)
            acc = acc + term if j % 2 == 0 else acc - term
        return acc

    return det(rows)


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient (0 outside the triangle)."""
    if k < 0 or k > n or n < 0:
        return 0
    return math.comb(n, k)


def exact_fraction(n: int, d: int) -> Fraction:
    return Fraction(n, d)
