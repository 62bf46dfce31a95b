"""Vectorized engines for the place census and the Monte Carlo walk.

Every routine here is a performance twin of a scalar path elsewhere in the
package and must agree with it bit for bit: the census matches the per-place
classifier, and walk_chunk matches the reference walker because both consume
the same counter-addressed draws and the same classifications.

Randomness and bookkeeping stay in numpy; the polynomial arithmetic runs in
the compiled per-row kernels of _kernels. Two mathematical shortcuts keep
large degrees affordable, both equivalent to the definitions used by the
scalar classifier:

* the quadratic character of an element of F_q[t]/(v) equals the Legendre
  symbol of its norm, and the norm of (g mod v) is the resultant Res(v, g),
  computable by a short Euclidean chain instead of a (q^d - 1)/2 power;

* for a cubic with square discriminant, "splits completely" is decided by a
  cube test on a root of the Cardano resolvent z^2 + 27*q_c*z - 27*p_c^3,
  carried out in F_q[t]/(v)[z] without extracting square roots.

Arrays hold coefficients low-first, reduced mod p, dtype int64. Base fields
only (e == 1).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from . import rng as rngmod
from ._kernels import classify_block_kernel, factor_block_kernel
from .ffpoly import (
    ENUM_BUDGET,
    EnumerationBudgetExceeded,
    Poly,
    count_monic_irreducibles,
)
from .places import CurveConfig, classify_place

_BLOCK = 16384

_RAMIFIED, _IDENTITY, _TRANSPOSITION, _THREECYCLE = 0, 1, 2, 3
_CODE_NAMES = ("Ramified", "Identity", "Transposition", "ThreeCycle")
_NAME_TO_CODE = {name: code for code, name in enumerate(_CODE_NAMES)}


# ---------------------------------------------------------------------------
# Cached tables
# ---------------------------------------------------------------------------


@lru_cache(maxsize=16)
def _inv_table(p: int) -> np.ndarray:
    """Multiplicative inverses mod p, indexed by residue (index 0 unused)."""
    return np.array([0] + [pow(i, p - 2, p) for i in range(1, p)], dtype=np.int64)


@lru_cache(maxsize=16)
def _square_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.uint8)
    table[(np.arange(p, dtype=np.int64) ** 2) % p] = 1
    return table


def _bit_rows(exponents: list[int]) -> tuple[np.ndarray, np.ndarray]:
    """Bit rows (leading bit stripped, most significant first) per exponent."""
    strings = ["" if e <= 0 else bin(e)[3:] for e in exponents]
    width = max((len(s) for s in strings), default=0)
    bits = np.zeros((len(exponents), max(width, 1)), np.uint8)
    lens = np.zeros(len(exponents), np.int64)
    for i, s in enumerate(strings):
        lens[i] = len(s)
        for k, ch in enumerate(s):
            bits[i, k] = ch == "1"
    return bits, lens


@lru_cache(maxsize=64)
def _edf_bit_tables(q: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Bits of (q^d - 1)/2 for every splitting degree d <= n."""
    return _bit_rows([(q ** d - 1) // 2 for d in range(n + 1)])


@lru_cache(maxsize=64)
def _cube_bit_tables(q: int, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Bits of (q^d - 1)/3 or (q^d + 1)/3 per degree, with q^d mod 3."""
    e3mod = np.zeros(n + 1, np.int64)
    exps = [0] * (n + 1)
    for d in range(1, n + 1):
        Q = q ** d
        e3mod[d] = Q % 3
        exps[d] = (Q - 1) // 3 if Q % 3 == 1 else (Q + 1) // 3
    bits, lens = _bit_rows(exps)
    return bits, lens, e3mod


@lru_cache(maxsize=64)
def _max_distinct_factors(q: int, n: int) -> int:
    """Largest possible number of distinct monic irreducible factors of a
    degree-n polynomial over F_q (greedy by ascending degree)."""
    total = 0
    count = 0
    d = 1
    while total + d <= n:
        for _ in range(count_monic_irreducibles(q, d)):
            if total + d > n:
                break
            total += d
            count += 1
        d += 1
    return count


@lru_cache(maxsize=8)
def _curve_arrays(curve: CurveConfig) -> tuple:
    """Kernel-ready coefficient arrays and scalars for one curve."""
    p = curve.field.p

    def arr(poly: Poly) -> tuple[np.ndarray, int]:
        if poly.is_zero():
            return np.zeros(1, np.int64), -1
        return np.array(poly.coeffs, np.int64), poly.degree

    disc, ddisc = arr(curve.disc)
    a0, da0 = arr(curve.coeffs[0])
    a1, da1 = arr(curve.coeffs[1])
    a2, da2 = arr(curve.coeffs[2])
    inv3 = pow(3, p - 2, p)
    inv27 = pow(27, p - 2, p)
    return disc, ddisc, a0, da0, a1, da1, a2, da2, inv3, inv27


# ---------------------------------------------------------------------------
# Place classification
# ---------------------------------------------------------------------------


def classify_rows(curve: CurveConfig, V: np.ndarray, d: int) -> np.ndarray:
    """Frobenius class codes for monic irreducible rows of degree d.

    Ramified = 0, Identity = 1, Transposition = 2, ThreeCycle = 3; the
    numbering is private to this module.
    """
    spec = curve.field
    if spec.e != 1:
        raise ValueError("vectorized classifier needs a prime base field")
    p = spec.p
    B = V.shape[0]
    codes = np.full(B, -1, np.int8)
    if B == 0:
        return codes
    disc, ddisc, a0, da0, a1, da1, a2, da2, inv3, inv27 = _curve_arrays(curve)
    ebits3, elen3, e3mod = _cube_bit_tables(spec.q, d)
    rows = np.ascontiguousarray(V[:, : d + 1].astype(np.int64))
    dv = np.full(B, d, np.int64)
    classify_block_kernel(
        rows, dv, disc, ddisc, a0, da0, a1, da1, a2, da2,
        p, _inv_table(p), _square_table(p), inv3, inv27,
        ebits3, elen3, e3mod, codes,
    )
    fallback = np.flatnonzero(codes == -2)
    for i in fallback:
        # depressed cubic x^3 + Q: the resolvent trick needs the linear term
        v = Poly(spec, tuple(int(c) for c in rows[i]))
        frob, _ = classify_place(curve, v)
        codes[i] = _NAME_TO_CODE[frob.value]
    if (codes < 0).any():
        raise AssertionError("classifier left rows untouched")
    return codes


@lru_cache(maxsize=8)
def _linear_codes(curve: CurveConfig) -> np.ndarray:
    """Class codes of the q degree-1 places, indexed by the root c of x - c."""
    spec = curve.field
    out = np.empty(spec.q, np.int8)
    for c in range(spec.q):
        v = Poly(spec, ((-c) % spec.p, 1))
        frob, _ = classify_place(curve, v)
        out[c] = _NAME_TO_CODE[frob.value]
    return out


# ---------------------------------------------------------------------------
# Irreducible sieve (census enumeration)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _irreducible_rows(q: int, d: int) -> np.ndarray:
    """Coefficient rows (low-first, monic) of every irreducible of degree d,
    in ascending packed order. Treat the cached array as read-only."""
    if q ** d > ENUM_BUDGET:
        raise EnumerationBudgetExceeded(f"q^d = {q ** d} exceeds {ENUM_BUDGET}")
    total = q ** d
    idx = np.arange(total, dtype=np.int64)
    digits = np.empty((total, d + 1), np.int64)
    for i in range(d):
        digits[:, i] = (idx // q ** i) % q
    digits[:, d] = 1
    composite = np.zeros(total, dtype=bool)
    powers = np.array([q ** i for i in range(d)], dtype=np.int64)
    for du in range(1, d // 2 + 1):
        U = _irreducible_rows(q, du)
        wd = d - du
        m = q ** wd
        cof_idx = np.arange(m, dtype=np.int64)
        cof = np.empty((m, wd + 1), np.int64)
        for i in range(wd):
            cof[:, i] = (cof_idx // q ** i) % q
        cof[:, wd] = 1
        prod = np.empty((m, d + 1), np.int64)
        for u in U:
            prod[:] = 0
            for i in range(du + 1):
                c = int(u[i])
                if c:
                    prod[:, i : i + wd + 1] += c * cof
            prod %= q
            composite[prod[:, :d] @ powers] = True
    rows = digits[~composite]
    expected = count_monic_irreducibles(q, d)
    if rows.shape[0] != expected:
        raise AssertionError(
            f"sieve found {rows.shape[0]} irreducibles of degree {d}, expected {expected}"
        )
    return rows


def classify_degree_counts(curve: CurveConfig, d: int) -> dict[str, int]:
    """Census of Frobenius classes over all places of one degree."""
    rows = _irreducible_rows(curve.field.q, d)
    codes = classify_rows(curve, rows, d)
    counts = np.bincount(codes, minlength=4)
    return {name: int(counts[code]) for code, name in enumerate(_CODE_NAMES)}


# ---------------------------------------------------------------------------
# Batched factorization into distinct irreducible factors
# ---------------------------------------------------------------------------


def _factor_block(
    spec, F: np.ndarray, n: int, row_base: int = 0
) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """Distinct irreducible factors of every row of F (monic, degree n).

    Returns {degree: (row_indices, coeff_rows)}. Multiplicities are consumed
    but not reported. row_base anchors the equal-degree splitter's seeds to
    global sample indices, so results never depend on block boundaries.
    """
    p = spec.p
    q = spec.q
    B = F.shape[0]
    if B and not (F[:, n] == 1).all():
        raise ValueError("rows must be monic of degree n")
    ebits2, elen2 = _edf_bit_tables(q, n)
    seeds = row_base + np.arange(B, dtype=np.int64)
    hard_cap = B * _max_distinct_factors(q, n)
    cap = min(6 * B + 64, hard_cap)
    while True:
        out_row = np.empty(cap, np.int64)
        out_deg = np.empty(cap, np.int64)
        out_pool = np.zeros((cap, n + 1), np.int64)
        err = np.zeros(2, np.int64)
        K = factor_block_kernel(
            np.ascontiguousarray(F), n, p, q, seeds, _inv_table(p),
            ebits2, elen2, out_row, out_deg, out_pool, err,
        )
        if err[0] == 0:
            break
        if err[0] == 1 and cap < hard_cap:
            cap = hard_cap
            continue
        raise AssertionError(
            f"factor kernel failed with code {int(err[0])} on row {int(err[1])}"
        )
    found: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    degs = out_deg[:K]
    for d in np.unique(degs):
        mask = degs == d
        found[int(d)] = (out_row[:K][mask], out_pool[:K][mask][:, : int(d) + 1])
    return found


# ---------------------------------------------------------------------------
# The vectorized walk
# ---------------------------------------------------------------------------


def _pack_rows(digits: np.ndarray, q: int) -> list[np.ndarray]:
    """Pack digit rows (base q, low-first) into one or more uint64 limbs,
    most significant limb first, for sorting and deduplication."""
    per_limb = max(1, int(63 / math.log2(q)))
    d = digits.shape[1]
    limbs = []
    for start in range(0, d, per_limb):
        end = min(start + per_limb, d)
        acc = np.zeros(digits.shape[0], np.uint64)
        for i in range(end - 1, start - 1, -1):
            acc = acc * np.uint64(q) + digits[:, i].astype(np.uint64)
        limbs.append(acc)
    return limbs[::-1] or [np.zeros(digits.shape[0], np.uint64)]


def _classified_factors(curve: CurveConfig, found: dict) -> tuple[np.ndarray, ...]:
    """Flatten the factor dictionary to (row, degree, code) arrays, with each
    distinct factor classified once per block."""
    q = curve.field.q
    p = curve.field.p
    lin = _linear_codes(curve)
    rows_all, degs_all, codes_all = [], [], []
    for d, (rows, coeffs) in sorted(found.items()):
        if d == 1:
            roots = (p - coeffs[:, 0]) % p
            codes = lin[roots]
        else:
            limbs = _pack_rows(coeffs[:, :d], q)
            order = np.lexsort(limbs[::-1])
            diff = np.zeros(max(order.size - 1, 0), dtype=bool)
            for limb in limbs:
                ls = limb[order]
                diff |= ls[1:] != ls[:-1]
            first = np.concatenate(([True], diff))
            group = np.cumsum(first) - 1
            uniq_rows = coeffs[order[first]]
            codes_u = classify_rows(curve, uniq_rows, d)
            codes = np.empty(order.size, np.int8)
            codes[order] = codes_u[group]
        rows_all.append(rows)
        degs_all.append(np.full(rows.size, d, np.int64))
        codes_all.append(codes.astype(np.int8))
    return (
        np.concatenate(rows_all),
        np.concatenate(degs_all),
        np.concatenate(codes_all),
    )


def _bincount_dict(values: np.ndarray, into: dict):
    uniq, counts = np.unique(values, return_counts=True)
    for v, c in zip(uniq, counts):
        into[int(v)] = into.get(int(v), 0) + int(c)


def walk_chunk(config, lo: int, hi: int) -> dict:
    """Vectorized twin of the scalar sample loop over samples [lo, hi)."""
    from .simulate import _dtable_thresholds, frak_n

    curve = config.curve
    spec = curve.field
    if spec.e != 1:
        raise ValueError("batch engine requires a prime base field")
    p = spec.p
    q = spec.q
    n = config.n
    seed = config.seed
    ell = curve.ell
    mu = config.mu_star
    R = mu.R
    cum = np.cumsum(np.array([float(x) for x in mu.probs], np.float64))
    cutoff = frak_n(max(n, 2), q)
    two_step = config.transition_mode == "two_step"

    rank_counts: dict[int, int] = {}
    class_counts = {"P0": 0, "P2": 0, "Ramified": 0}
    p2_hist: dict[int, int] = {}
    w_hist: dict[int, int] = {}
    wp_hist: dict[int, int] = {}
    large_p0 = 0
    ram_samples = 0

    for blo in range(lo, hi, _BLOCK):
        bhi = min(blo + _BLOCK, hi)
        samp = np.arange(blo, bhi, dtype=np.uint64)
        B = bhi - blo
        F = np.empty((B, n + 1), np.int64)
        for j in range(n):
            F[:, j] = rngmod.draw_int_np(seed, samp, rngmod.TAG_COEFF, j, q)
        F[:, n] = 1
        found = _factor_block(spec, F, n, row_base=blo)
        frow, fdeg, fcode = _classified_factors(curve, found)

        p2_per_row = np.bincount(frow[fcode == _IDENTITY], minlength=B)
        u0 = rngmod.draw_u01_np(seed, samp, rngmod.TAG_INIT, 0)
        rank = np.minimum(np.searchsorted(cum, u0, side="right"), R).astype(np.int64)
        maxk = int(p2_per_row.max()) if B else 0
        rmax = R + 2 * maxk + 2
        pow_tab = np.array([float(ell) ** (-r) for r in range(rmax + 1)])
        if not two_step:
            th = [_dtable_thresholds(ell, r) for r in range(rmax + 1)]
            td_tab = np.array([t[0] for t in th])
            tz_tab = np.array([t[1] for t in th])
        for k in range(maxk):
            act = np.flatnonzero(p2_per_row > k)
            sa = samp[act]
            if two_step:
                u1 = rngmod.draw_u01_np(seed, sa, rngmod.TAG_WALK, 2 * k)
                rank[act] += np.where(u1 < pow_tab[rank[act]], 1, -1)
                u2 = rngmod.draw_u01_np(seed, sa, rngmod.TAG_WALK, 2 * k + 1)
                rank[act] += np.where(u2 < pow_tab[rank[act]], 1, -1)
            else:
                u = rngmod.draw_u01_np(seed, sa, rngmod.TAG_WALK, k)
                r_ = rank[act]
                rank[act] += np.where(u < td_tab[r_], -2, np.where(u < tz_tab[r_], 0, 2))

        _bincount_dict(rank, rank_counts)
        class_counts["P2"] += int((fcode == _IDENTITY).sum())
        class_counts["P0"] += int(((fcode == _TRANSPOSITION) | (fcode == _THREECYCLE)).sum())
        class_counts["Ramified"] += int((fcode == _RAMIFIED).sum())
        _bincount_dict(p2_per_row, p2_hist)
        _bincount_dict(np.bincount(frow, minlength=B), w_hist)
        wp_mask = fdeg > cutoff
        _bincount_dict(np.bincount(frow[wp_mask], minlength=B), wp_hist)
        large_p0 += int(
            (np.bincount(frow[wp_mask & (fcode != _IDENTITY) & (fcode != _RAMIFIED)],
                         minlength=B) > 0).sum()
        )
        ram_samples += int((np.bincount(frow[fcode == _RAMIFIED], minlength=B) > 0).sum())

    return {
        "rank_counts": rank_counts,
        "class_counts": class_counts,
        "p2_hist": p2_hist,
        "w_hist": w_hist,
        "wprime_hist": wp_hist,
        "large_p0": large_p0,
        "ramified_samples": ram_samples,
    }
