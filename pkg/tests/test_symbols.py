import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistrank.ffpoly import FieldSpec, Poly, enumerate_monic, poly
from twistrank.places import PlaceClass
from twistrank.symbols import (
    SymbolValue,
    build_mu,
    equidistribution_census,
    jacobi_symbol,
    smallest_primitive_root,
    symbol,
)

F11 = FieldSpec(11)
MU = build_mu(F11, 5)


def P(*coeffs):
    return poly(F11, coeffs)


def test_primitive_root_of_f11():
    g = smallest_primitive_root(F11)
    assert g == 2
    assert sorted(pow(2, k, 11) for k in range(10)) == list(range(1, 11))


def test_build_mu_group_structure():
    assert MU.ell == 5
    assert len(set(MU.elements)) == 5
    assert MU.elements[0] == 1
    for k in range(5):
        assert MU.power(k) == MU.elements[k]
        assert MU.dlog[MU.elements[k]] == k
    # closed under multiplication
    for a in MU.elements:
        for b in MU.elements:
            assert F11.mul(a, b) in MU.elements


def test_build_mu_rejects_bad_ell():
    with pytest.raises(ValueError):
        build_mu(F11, 4)
    with pytest.raises(ValueError):
        build_mu(F11, 7)  # 7 does not divide 10


def test_symbol_value_semantics():
    a = SymbolValue(3, 5)
    b = SymbolValue(4, 5)
    assert (a * b).exponent == 2
    assert SymbolValue(5, 5).is_trivial()
    with pytest.raises(ValueError):
        a * SymbolValue(0, 7)


def fifth_powers_mod(pi: Poly) -> set:
    """All nonzero fifth powers in F_11[t]/(pi), as residue tuples."""
    spec = pi.field
    d = pi.degree
    out = set()
    for idx in range(spec.q ** d):
        coeffs = []
        v = idx
        for _ in range(d):
            v, r = divmod(v, spec.q)
            coeffs.append(r)
        x = Poly(spec, tuple(coeffs))
        if x.is_zero():
            continue
        acc = Poly(spec, (1,))
        for _ in range(5):
            acc = (acc * x) % pi
        out.add(acc.coeffs)
    return out


@pytest.mark.parametrize("d", [1, 2])
def test_symbol_trivial_iff_fifth_power(d):
    for pi in enumerate_monic(F11, d, filter="irreducible"):
        powers = fifth_powers_mod(pi)
        for idx in range(F11.q ** d):
            coeffs = []
            v = idx
            for _ in range(d):
                v, r = divmod(v, F11.q)
                coeffs.append(r)
            a = Poly(F11, tuple(coeffs))
            if a.is_zero():
                with pytest.raises(ZeroDivisionError):
                    symbol(a, pi, MU)
                continue
            assert symbol(a, pi, MU).is_trivial() == (a.coeffs in powers)


def test_symbol_rejects_bad_modulus():
    with pytest.raises(ValueError):
        symbol(P(1), P(2, 2), MU)  # not monic
    with pytest.raises(ValueError):
        symbol(P(1), P(7), MU)  # constant


def nonzero_polys(max_deg):
    return (
        st.lists(st.integers(0, 10), min_size=1, max_size=max_deg + 1)
        .map(lambda cs: Poly(F11, tuple(cs)))
        .filter(lambda f: not f.is_zero())
    )


@given(nonzero_polys(3), nonzero_polys(3))
@settings(deadline=None, max_examples=60)
def test_symbol_multiplicative_in_numerator(a, b):
    pi = P(4, 2, 1)  # irreducible: roots would satisfy x^2+2x+4 = 0
    if (a % pi).is_zero() or (b % pi).is_zero():
        return
    lhs = symbol(a * b, pi, MU)
    rhs = symbol(a, pi, MU) * symbol(b, pi, MU)
    assert lhs.exponent == rhs.exponent


def test_jacobi_matches_symbol_on_irreducible():
    a = P(3, 1, 2)
    pi = P(1, 0, 1)
    assert jacobi_symbol(a, pi, MU).exponent == symbol(a, pi, MU).exponent


def test_jacobi_adds_over_modulus_factorization():
    a = P(2, 5)
    g1, g2 = P(1, 1), P(1, 0, 1)
    g = g1 * g1 * g2
    want = (2 * symbol(a, g1, MU).exponent + symbol(a, g2, MU).exponent) % 5
    assert jacobi_symbol(a, g, MU).exponent == want


def test_jacobi_rejects_shared_factor():
    g = P(1, 1)
    with pytest.raises(ValueError):
        jacobi_symbol(g * P(3, 1), g, MU)
    with pytest.raises(ValueError):
        jacobi_symbol(P(1), Poly(F11, ()), MU)


def test_jacobi_unit_modulus_is_trivial():
    assert jacobi_symbol(P(0, 1), P(4), MU).is_trivial()


def test_census_covers_every_place_once():
    h = [P(1, 1)]
    table = equidistribution_census(h, 2, MU)
    # 55 monic irreducible quadratics, none equal to the modulus
    assert table.total == 55
    assert sum(table.counts.values()) == 55
    assert set(table.counts) == {(k,) for k in range(5)}
    assert table.omega == 1
    assert table.uniform == 11.0
    assert table.max_abs_deviation() == max(
        abs(c - 11) for c in table.counts.values()
    )
    rows = table.rows()
    assert len(rows) == 5 and all({"cell", "count", "deviation"} <= set(r) for r in rows)


def test_census_excludes_the_modulus_itself():
    pi = P(7, 1)
    table = equidistribution_census([pi], 1, MU)
    assert table.total == 10


def test_census_with_class_filter(audit_curve):
    h = [P(1, 1)]
    full = equidistribution_census(h, 2, MU)
    p0 = equidistribution_census(h, 2, MU, class_filter=PlaceClass.P0, curve=audit_curve)
    p2 = equidistribution_census(h, 2, MU, class_filter=PlaceClass.P2, curve=audit_curve)
    assert p0.total + p2.total == full.total  # no quadratic place ramifies here
    assert p0.class_filter == "P0"


def test_census_rejects_bad_moduli():
    with pytest.raises(ValueError):
        equidistribution_census([P(1, 2, 1)], 2, MU)  # (t+1)^2 reducible
    with pytest.raises(ValueError):
        equidistribution_census([P(1, 1), P(1, 1)], 2, MU)
    with pytest.raises(ValueError):
        equidistribution_census([P(1, 1)], 2, MU, class_filter=PlaceClass.P0)


def test_joint_census_cell_count():
    table = equidistribution_census([P(1, 1), P(3, 1)], 2, MU)
    assert set(table.counts) == set(itertools.product(range(5), repeat=2))
    assert table.total == 55
