"""Compiled per-row kernels behind the batch engine.

The factorizer and the place classifier spend their time in polynomial
arithmetic over F_p at degrees around 30. Vectorizing that across rows
with numpy drowns in per-step dispatch overhead, so the row loops live
here as numba kernels: plain int64 arithmetic, identical operation for
operation to the scalar definitions, which keeps the batch engine an
exact twin of the reference path.

Conventions: polynomials are low-first int64 buffers with an explicit
degree (-1 for the zero polynomial). Moduli are monic. Exponents such as
(q^d - 1)/2 or (q^d -+ 1)/3 exceed int64 for large d, so callers pass
them as bit rows (leading bit stripped, most significant first) built
with Python integers.

The equal-degree splitter draws its random elements from a per-row LCG
seeded by the global sample index, so draw order never depends on block
or worker boundaries. The factor set itself is independent of the draws.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_LCG_MUL = 6364136223846793005
_LCG_ADD = 1442695040888963407


@njit(cache=True)
def _deg(a, upto):
    d = upto
    while d >= 0 and a[d] == 0:
        d -= 1
    return d


@njit(cache=True)
def _horner(a, da, c, p):
    acc = np.int64(0)
    for k in range(da, -1, -1):
        acc = (acc * c + a[k]) % p
    return acc


@njit(cache=True)
def _mul_into(a, da, b, db, p, out):
    """out = a * b mod p; returns the degree. out must hold da + db + 1."""
    if da < 0 or db < 0:
        return -1
    for k in range(da + db + 1):
        out[k] = 0
    for i in range(da + 1):
        ai = a[i]
        if ai:
            for j in range(db + 1):
                out[i + j] += ai * b[j]
    for k in range(da + db + 1):
        out[k] %= p
    return _deg(out, da + db)


@njit(cache=True)
def _rem_monic(a, da, m, dm, p):
    """a mod m in place for monic m; returns the remainder degree."""
    for k in range(da, dm - 1, -1):
        c = a[k]
        if c:
            off = k - dm
            for i in range(dm):
                a[off + i] = (a[off + i] - c * m[i]) % p
            a[k] = 0
    return _deg(a, min(da, dm - 1))


@njit(cache=True)
def _divmod_monic(a, da, m, dm, p, quo):
    """Quotient into quo, remainder into a, for monic m.

    Returns the remainder degree; the quotient degree is da - dm.
    """
    qd = da - dm
    for k in range(qd + 1):
        quo[k] = 0
    for s in range(qd, -1, -1):
        c = a[s + dm]
        if c:
            quo[s] = c
            for i in range(dm):
                a[s + i] = (a[s + i] - c * m[i]) % p
            a[s + dm] = 0
    return _deg(a, dm - 1)


@njit(cache=True)
def _gcd_monic(a, da, b, db, p, inv_table, out):
    """Monic gcd of a and b into out; returns its degree. Destroys a, b.

    Entries above the declared degrees may be stale; every access here is
    bounded by the tracked degrees, and the swap step re-zeroes the upper
    range of the new remainder buffer.
    """
    while db >= 1:
        inv_lc = inv_table[b[db]]
        for s in range(da - db, -1, -1):
            c = a[s + db] * inv_lc % p
            if c:
                for i in range(db + 1):
                    a[s + i] = (a[s + i] - c * b[i]) % p
        ra = _deg(a, db - 1)
        for i in range(db + 1):
            tmpv = a[i] if i <= ra else 0
            a[i] = b[i]
            b[i] = tmpv
        da = db
        db = ra
        for i in range(db + 1, da + 1):
            b[i] = 0
    if db == 0:
        a[0] = b[0]
        da = 0
    if da < 0:
        return -1
    inv_lc = inv_table[a[da]]
    for i in range(da + 1):
        out[i] = a[i] * inv_lc % p
    return da


@njit(cache=True)
def _powbits_mod(base, db, bits, nbits, m, dm, p, acc, tmp):
    """base**e mod m for monic m; e arrives as its bit row (leading bit
    stripped, most significant first). Result in acc; returns the degree."""
    dacc = db
    for i in range(db + 1):
        acc[i] = base[i]
    for i in range(db + 1, dm):
        acc[i] = 0
    for k in range(nbits):
        dacc = _mul_into(acc, dacc, acc, dacc, p, tmp)
        dacc = _rem_monic(tmp, dacc, m, dm, p)
        for i in range(dacc + 1):
            acc[i] = tmp[i]
        for i in range(dacc + 1, dm):
            acc[i] = 0
        if bits[k]:
            dacc = _mul_into(acc, dacc, base, db, p, tmp)
            dacc = _rem_monic(tmp, dacc, m, dm, p)
            for i in range(dacc + 1):
                acc[i] = tmp[i]
            for i in range(dacc + 1, dm):
                acc[i] = 0
    return dacc


@njit(cache=True)
def _pow_smallexp_mod(base, db, e, m, dm, p, acc, tmp):
    """base**e mod m for an exponent that fits int64 (the Frobenius q-step)."""
    nbits = 0
    ec = e
    while ec > 1:
        ec >>= 1
        nbits += 1
    dacc = db
    for i in range(db + 1):
        acc[i] = base[i]
    for i in range(db + 1, dm):
        acc[i] = 0
    for k in range(nbits - 1, -1, -1):
        dacc = _mul_into(acc, dacc, acc, dacc, p, tmp)
        dacc = _rem_monic(tmp, dacc, m, dm, p)
        for i in range(dacc + 1):
            acc[i] = tmp[i]
        for i in range(dacc + 1, dm):
            acc[i] = 0
        if (e >> k) & 1:
            dacc = _mul_into(acc, dacc, base, db, p, tmp)
            dacc = _rem_monic(tmp, dacc, m, dm, p)
            for i in range(dacc + 1):
                acc[i] = tmp[i]
            for i in range(dacc + 1, dm):
                acc[i] = 0
    return dacc


# ---------------------------------------------------------------------------
# Factorization into distinct irreducible factors
# ---------------------------------------------------------------------------


@njit(cache=True)
def factor_block_kernel(F, n, p, q, row_seeds, inv_table, ebits2, elen2,
                        out_row, out_deg, out_pool, err):
    """Distinct monic irreducible factors of every (monic, degree-n) row.

    Writes (local row, degree, coefficients) triples to the output arrays
    and returns how many were written. On failure err[0] is set (1 capacity
    overflow, 2 inexact division, 3 splitting budget exhausted) with the
    local row in err[1], and the caller decides what to do.
    """
    B = F.shape[0]
    W = n + 1
    cap = out_row.shape[0]
    K = 0

    work = np.empty(W, np.int64)
    h = np.empty(W, np.int64)
    hx = np.empty(W, np.int64)
    gwork = np.empty(W, np.int64)
    g = np.empty(W, np.int64)
    quo = np.empty(W, np.int64)
    tmp = np.empty(2 * W + 2, np.int64)
    acc = np.empty(2 * W + 2, np.int64)
    u = np.empty(W, np.int64)
    wminus = np.empty(W, np.int64)
    seg = np.empty(W, np.int64)
    stack = np.empty((n + 2, W), np.int64)
    sdeg = np.empty(n + 2, np.int64)

    for b in range(B):
        for i in range(W):
            work[i] = F[b, i]
        wdeg = n
        state = _lcg_next(row_seeds[b])

        # linear factors by root scan, divided out to full multiplicity
        for c in range(q):
            if wdeg < 1:
                break
            if _horner(work, wdeg, c, p) != 0:
                continue
            if K >= cap:
                err[0] = 1
                err[1] = b
                return K
            out_row[K] = b
            out_deg[K] = 1
            out_pool[K, 0] = (p - c) % p
            out_pool[K, 1] = 1
            K += 1
            while wdeg >= 1 and _horner(work, wdeg, c, p) == 0:
                carry = work[wdeg]
                for k in range(wdeg - 1, -1, -1):
                    lower = work[k]
                    work[k] = carry
                    carry = (lower + c * carry) % p
                work[wdeg] = 0
                wdeg -= 1

        if wdeg <= 0:
            continue

        # distinct-degree chain: h tracks x^(q^d) mod work
        for i in range(W):
            h[i] = 0
        h[1] = 1
        hdeg = 1
        d = 0
        while wdeg > 0:
            d += 1
            if 2 * d > wdeg:
                # what remains is a single irreducible factor
                if K >= cap:
                    err[0] = 1
                    err[1] = b
                    return K
                out_row[K] = b
                out_deg[K] = wdeg
                for i in range(wdeg + 1):
                    out_pool[K, i] = work[i]
                K += 1
                break
            hdeg = _pow_smallexp_mod(h, hdeg, q, work, wdeg, p, acc, tmp)
            for i in range(hdeg + 1):
                h[i] = acc[i]
            for i in range(hdeg + 1, W):
                h[i] = 0
            if d == 1:
                continue  # no linear factors survive the root scan

            for i in range(W):
                hx[i] = h[i] if i <= hdeg else 0
                gwork[i] = work[i]
            hx[1] = (hx[1] - 1) % p
            hxdeg = _deg(hx, max(hdeg, 1))
            gd = _gcd_monic(hx, hxdeg, gwork, wdeg, p, inv_table, g)
            if gd == -1:
                # h == x mod work: everything left has degree dividing d
                for i in range(wdeg + 1):
                    g[i] = work[i]
                gd = wdeg
            if gd <= 0:
                continue
            if gd % d != 0:
                err[0] = 2
                err[1] = b
                return K
            K0 = K
            if gd == d:
                if K >= cap:
                    err[0] = 1
                    err[1] = b
                    return K
                out_row[K] = b
                out_deg[K] = d
                for i in range(d + 1):
                    out_pool[K, i] = g[i]
                K += 1
            else:
                # equal-degree splitting of g into gd // d factors
                for i in range(gd + 1):
                    stack[0, i] = g[i]
                sdeg[0] = gd
                sp = 1
                while sp > 0:
                    sp -= 1
                    segd = sdeg[sp]
                    for i in range(segd + 1):
                        seg[i] = stack[sp, i]
                    if segd == d:
                        if K >= cap:
                            err[0] = 1
                            err[1] = b
                            return K
                        out_row[K] = b
                        out_deg[K] = d
                        for i in range(d + 1):
                            out_pool[K, i] = seg[i]
                        K += 1
                        continue
                    tries = 0
                    while True:
                        tries += 1
                        if tries > 10000:
                            err[0] = 3
                            err[1] = b
                            return K
                        for i in range(segd):
                            state = _lcg_next(state)
                            u[i] = state % p
                        ud = _deg(u, segd - 1)
                        if ud < 1:
                            continue
                        wd = _powbits_mod(u, ud, ebits2[d], elen2[d],
                                          seg, segd, p, wminus, tmp)
                        wminus[0] = (wminus[0] - 1) % p
                        wd = _deg(wminus, max(wd, 0))
                        if wd < 0:
                            continue
                        for i in range(segd + 1):
                            gwork[i] = seg[i]
                        cd = _gcd_monic(wminus, wd, gwork, segd, p,
                                        inv_table, g)
                        if cd <= 0 or cd >= segd:
                            continue
                        for i in range(cd + 1):
                            stack[sp, i] = g[i]
                        sdeg[sp] = cd
                        sp += 1
                        for i in range(segd + 1):
                            acc[i] = seg[i]
                        rdeg = _divmod_monic(acc, segd, g, cd, p, quo)
                        if rdeg >= 0:
                            err[0] = 2
                            err[1] = b
                            return K
                        for i in range(segd - cd + 1):
                            stack[sp, i] = quo[i]
                        sdeg[sp] = segd - cd
                        sp += 1
                        break
            # peel every recorded degree-d factor to full multiplicity
            for kk in range(K0, K):
                first = True
                while wdeg >= d:
                    for i in range(wdeg + 1):
                        acc[i] = work[i]
                    rdeg = _divmod_monic(acc, wdeg, out_pool[kk], d, p, quo)
                    if rdeg >= 0:
                        if first:
                            err[0] = 2
                            err[1] = b
                            return K
                        break
                    wdeg -= d
                    for i in range(wdeg + 1):
                        work[i] = quo[i]
                    for i in range(wdeg + 1, W):
                        work[i] = 0
                    first = False
            if wdeg > 0:
                hdeg = _rem_monic(h, hdeg, work, wdeg, p)
    return K


# ---------------------------------------------------------------------------
# Place classification
# ---------------------------------------------------------------------------


@njit(cache=True)
def _resultant_with(v, d, a, da, p, inv_table, xb, yb):
    """Res(v, a) mod p for monic degree-d v; a must be reduced mod v."""
    if da < 0:
        return np.int64(0)
    for i in range(d + 1):
        xb[i] = v[i]
    dx = d
    for i in range(da + 1):
        yb[i] = a[i]
    dy = da
    res = np.int64(1)
    while dy >= 1:
        lc = yb[dy]
        inv_lc = inv_table[lc]
        for s in range(dx - dy, -1, -1):
            c = xb[s + dy] * inv_lc % p
            if c:
                for i in range(dy + 1):
                    xb[s + i] = (xb[s + i] - c * yb[i]) % p
        rd = _deg(xb, dy - 1)
        e = dx - rd
        base = lc
        pw = np.int64(1)
        while e > 0:
            if e & 1:
                pw = pw * base % p
            base = base * base % p
            e >>= 1
        res = res * pw % p
        if (dx * dy) & 1:
            res = (p - res) % p
        for i in range(dy + 1):
            tmpv = xb[i] if i <= rd else 0
            xb[i] = yb[i]
            yb[i] = tmpv
        dx = dy
        dy = rd
        for i in range(dy + 1, dx + 1):
            yb[i] = 0
    if dy < 0:
        return np.int64(0)
    e = dx
    base = yb[0]
    pw = np.int64(1)
    while e > 0:
        if e & 1:
            pw = pw * base % p
        base = base * base % p
        e >>= 1
    return res * pw % p


@njit(cache=True)
def _ringmul(a, da, b, db, v, d, p, tmp):
    """(a * b) mod v written back into a; returns the degree."""
    dd = _mul_into(a, da, b, db, p, tmp)
    dd = _rem_monic(tmp, dd, v, d, p)
    for i in range(dd + 1):
        a[i] = tmp[i]
    for i in range(dd + 1, d):
        a[i] = 0
    return dd


@njit(cache=True)
def _reduce_fixed(a, da, v, d, p, out, tmp):
    """Residue of a fixed polynomial modulo monic v, into out (width >= d)."""
    for i in range(d):
        out[i] = 0
    if da < 0:
        return -1
    if da < d:
        for i in range(da + 1):
            out[i] = a[i]
        return _deg(out, da)
    for i in range(da + 1):
        tmp[i] = a[i]
    dd = _rem_monic(tmp, da, v, d, p)
    for i in range(dd + 1):
        out[i] = tmp[i]
    return dd


@njit(cache=True)
def classify_block_kernel(V, dv, disc, ddisc, a0, da0, a1, da1, a2, da2,
                          p, inv_table, qr, inv3, inv27,
                          ebits3, elen3, e3mod, codes):
    """Frobenius class codes per monic irreducible row.

    0 ramified, 1 identity, 2 transposition, 3 three-cycle; -2 marks rows
    whose depressed cubic loses its linear term, left to the caller.
    """
    K = V.shape[0]
    Wmax = V.shape[1]
    tmpw = 4 * Wmax + 4
    if ddisc + 2 > tmpw:
        tmpw = ddisc + 2
    if da0 + 2 > tmpw:
        tmpw = da0 + 2
    if da1 + 2 > tmpw:
        tmpw = da1 + 2
    if da2 + 2 > tmpw:
        tmpw = da2 + 2
    xb = np.empty(Wmax + 1, np.int64)
    yb = np.empty(Wmax + 1, np.int64)
    tmp = np.empty(tmpw, np.int64)
    dres = np.empty(Wmax, np.int64)
    r0 = np.empty(Wmax, np.int64)
    r1 = np.empty(Wmax, np.int64)
    r2 = np.empty(Wmax, np.int64)
    pp = np.empty(Wmax, np.int64)
    qc = np.empty(Wmax, np.int64)
    s0 = np.empty(Wmax, np.int64)
    s1 = np.empty(Wmax, np.int64)
    wa = np.empty(Wmax, np.int64)
    wb = np.empty(Wmax, np.int64)
    na = np.empty(Wmax, np.int64)
    sq_a = np.empty(Wmax, np.int64)
    sq_b = np.empty(Wmax, np.int64)
    sq_ab = np.empty(Wmax, np.int64)

    for r in range(K):
        d = dv[r]
        v = V[r]

        # ramified places: the discriminant vanishes at v
        dd = _reduce_fixed(disc, ddisc, v, d, p, dres, tmp)
        if dd < 0:
            codes[r] = 0
            continue

        # quadratic character of the discriminant via its norm
        res = _resultant_with(v, d, dres, dd, p, inv_table, xb, yb)
        if qr[res] == 0:
            codes[r] = 2
            continue

        # depressed cubic x^3 + P x + Q modulo v
        dr0 = _reduce_fixed(a0, da0, v, d, p, r0, tmp)
        dr1 = _reduce_fixed(a1, da1, v, d, p, r1, tmp)
        dr2 = _reduce_fixed(a2, da2, v, d, p, r2, tmp)
        for i in range(d):
            sq_a[i] = r2[i] if i <= dr2 else 0
        dsq = _ringmul(sq_a, dr2, r2, dr2, v, d, p, tmp)
        hi = dr1 if dr1 > dsq else dsq
        for i in range(d):
            pp[i] = 0
        for i in range(hi + 1):
            c1 = r1[i] if i <= dr1 else 0
            c2 = sq_a[i] if i <= dsq else 0
            pp[i] = (c1 - inv3 * c2) % p
        dp_ = _deg(pp, hi)
        if dp_ < 0:
            codes[r] = -2
            continue
        for i in range(d):
            sq_b[i] = r1[i] if i <= dr1 else 0
        d12 = _ringmul(sq_b, dr1, r2, dr2, v, d, p, tmp)
        for i in range(d):
            sq_ab[i] = sq_a[i] if i <= dsq else 0
        d222 = _ringmul(sq_ab, dsq, r2, dr2, v, d, p, tmp)
        hi = dr0
        if d12 > hi:
            hi = d12
        if d222 > hi:
            hi = d222
        for i in range(d):
            qc[i] = 0
        for i in range(hi + 1):
            c0 = r0[i] if i <= dr0 else 0
            c1 = sq_b[i] if i <= d12 else 0
            c2 = sq_ab[i] if i <= d222 else 0
            qc[i] = (c0 - inv3 * c1 + 2 * inv27 * c2) % p
        dq = _deg(qc, hi)

        # cube test in T = F[z]/(z^2 + 27 Q z - 27 P^3): z^2 = s0 + s1 z
        for i in range(d):
            s0[i] = pp[i] if i <= dp_ else 0
        ds0 = _ringmul(s0, dp_, pp, dp_, v, d, p, tmp)
        ds0 = _ringmul(s0, ds0, pp, dp_, v, d, p, tmp)
        for i in range(ds0 + 1):
            s0[i] = 27 * s0[i] % p
        for i in range(d):
            s1[i] = (-27) * qc[i] % p if i <= dq else 0
        ds1 = dq

        for i in range(d):
            wa[i] = 0
            wb[i] = 0
        wb[0] = 1
        dwa = -1
        dwb = 0
        nb = elen3[d]
        for k in range(nb):
            # square: wa' = wa^2 + wb^2 s0, wb' = 2 wa wb + wb^2 s1
            for i in range(d):
                sq_a[i] = wa[i]
                sq_b[i] = wb[i]
                sq_ab[i] = wa[i]
            da_ = _ringmul(sq_a, dwa, wa, dwa, v, d, p, tmp)
            db_ = _ringmul(sq_b, dwb, wb, dwb, v, d, p, tmp)
            dab = _ringmul(sq_ab, dwa, wb, dwb, v, d, p, tmp)
            for i in range(d):
                na[i] = sq_b[i] if i <= db_ else 0
            dna = _ringmul(na, db_, s0, ds0, v, d, p, tmp)
            for i in range(d):
                av = sq_a[i] if i <= da_ else 0
                bv = na[i] if i <= dna else 0
                wa[i] = (av + bv) % p
            dwa = _deg(wa, d - 1)
            for i in range(d):
                na[i] = sq_b[i] if i <= db_ else 0
            dna = _ringmul(na, db_, s1, ds1, v, d, p, tmp)
            for i in range(d):
                av = sq_ab[i] if i <= dab else 0
                bv = na[i] if i <= dna else 0
                wb[i] = (2 * av + bv) % p
            dwb = _deg(wb, d - 1)
            if ebits3[d, k]:
                # times z: wa' = wb s0, wb' = wa + wb s1
                for i in range(d):
                    sq_a[i] = wb[i]
                    sq_b[i] = wb[i]
                da_ = _ringmul(sq_a, dwb, s0, ds0, v, d, p, tmp)
                db_ = _ringmul(sq_b, dwb, s1, ds1, v, d, p, tmp)
                for i in range(d):
                    av = wa[i]
                    bv = sq_b[i] if i <= db_ else 0
                    wb[i] = (av + bv) % p
                dwb = _deg(wb, d - 1)
                for i in range(d):
                    wa[i] = sq_a[i] if i <= da_ else 0
                dwa = da_

        if e3mod[d] == 1:
            # split ring: the class of z is a cube iff z^((Q-1)/3) == 1
            is_id = dwb < 0 and dwa == 0 and wa[0] == 1
        else:
            # field: z is a cube iff z^((Q+1)/3) lies in the base
            is_id = dwb < 0
        codes[r] = 1 if is_id else 3
    return 0


@njit(cache=True)
def _lcg_next(state):
    return state * _LCG_MUL + _LCG_ADD
