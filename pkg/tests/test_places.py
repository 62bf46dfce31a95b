import math
from fractions import Fraction

import pytest

from twistrank.ffpoly import FieldSpec, Poly, count_monic_irreducibles, poly
from twistrank.places import (
    FROB_DENSITIES,
    FROB_TO_PLACE,
    PLACE_DENSITIES,
    CurveConfig,
    FrobClass,
    PlaceClass,
    certify_s3,
    chebotarev_audit,
    chebotarev_bound,
    chebotarev_ratio_bound,
    classify_place,
    default_genus_bound,
    density_census,
    s3_representation_checks,
)

F11 = FieldSpec(11)


def P(*coeffs):
    return poly(F11, coeffs)


def curve(a0, a1, a2, ell=5, **kw):
    return CurveConfig(ell, F11, (a0, a1, a2), **kw)


# --------------------------------------------------------------------------
# curve construction
# --------------------------------------------------------------------------


def test_density_tables_are_exact():
    assert sum(FROB_DENSITIES.values()) == 1
    assert PLACE_DENSITIES["P0"] == Fraction(5, 6)
    assert PLACE_DENSITIES["P1"] == 0
    assert PLACE_DENSITIES["P2"] == Fraction(1, 6)
    assert FROB_TO_PLACE[FrobClass.Identity] is PlaceClass.P2
    assert FROB_TO_PLACE[FrobClass.Transposition] is PlaceClass.P0
    assert FROB_TO_PLACE[FrobClass.ThreeCycle] is PlaceClass.P0


def test_curve_rejects_bad_ell():
    with pytest.raises(ValueError, match="prime"):
        curve(P(0, 1), P(0, 1), P(0), ell=4)
    with pytest.raises(ValueError, match="characteristic"):
        CurveConfig(11, F11, (P(0, 1), P(0, 1), P(0)))


def test_curve_rejects_incompatible_field():
    f13 = FieldSpec(13)
    with pytest.raises(ValueError, match="not 1 mod ell"):
        CurveConfig(5, f13, tuple(poly(f13, c) for c in ((0, 1), (0, 1), (0,))))


def test_curve_rejects_wrong_shape_and_field_mix():
    with pytest.raises(ValueError, match="a0, a1, a2"):
        CurveConfig(5, F11, (P(0, 1), P(0, 1)))
    f31 = FieldSpec(31)
    with pytest.raises(ValueError, match="field mismatch"):
        CurveConfig(5, F11, (P(0, 1), P(0, 1), poly(f31, (0,))))


def test_curve_rejects_vanishing_discriminant():
    with pytest.raises(ValueError, match="discriminant"):
        curve(P(0), P(0), P(0))  # x^3


def test_genus_bound_default_and_override(audit_curve):
    # disc = 7t^3 + 6t^2 has degree 3
    assert audit_curve.disc == P(0, 0, 6, 7)
    assert default_genus_bound(audit_curve.disc) == 7
    assert audit_curve.genus_L_bound == 7
    c = curve(P(0, 1), P(0, 1), P(0), genus_L_bound=12)
    assert c.genus_L_bound == 12


def test_fbar_reduces_coefficients(audit_curve):
    a0b, a1b, a2b = audit_curve.fbar_coeffs(P(8, 1))  # t = -8 = 3
    assert a0b == (3,) and a1b == (3,) and a2b == ()


# --------------------------------------------------------------------------
# S_3 certification
# --------------------------------------------------------------------------


def test_certify_audit_curve(audit_curve):
    cert = certify_s3(audit_curve)
    assert cert
    assert cert.reason is None
    # divisors of a0 = t are {1, t}, each in 10 unit multiples
    assert cert.root_candidates_checked == 20
    assert cert.disc_factor_multiplicities == (2, 1)


def test_certify_rejects_zero_constant_term():
    c = curve(P(0), P(0, 0, 0, 1), P(0))  # x^3 + t^3 x = x(x^2 + t^3)
    cert = certify_s3(c)
    assert not cert
    assert "root x = 0" in cert.reason
    assert cert.root_candidates_checked == 1


def test_certify_finds_polynomial_root():
    # x^3 - t^3 = (x - t)(x^2 + tx + t^2)
    c = curve(P(0, 0, 0, 10), P(0), P(0))
    cert = certify_s3(c)
    assert not cert
    assert "root x = t" in cert.reason


def test_certify_rejects_square_discriminant():
    # x^3 - 3x + 1 is rootless mod 11 but its discriminant 81 = 4 is a square
    cert = certify_s3(curve(P(1), P(8), P(0)))
    assert not cert
    assert "square" in cert.reason
    assert cert.root_candidates_checked == 10


# --------------------------------------------------------------------------
# classification of individual places
# --------------------------------------------------------------------------


def test_classify_rejects_bad_place(audit_curve):
    with pytest.raises(ValueError):
        classify_place(audit_curve, P(3, 2))  # not monic
    with pytest.raises(ValueError):
        classify_place(audit_curve, P(4))  # constant


@pytest.mark.parametrize(
    "v_coeffs, frob",
    [
        ((0, 1), FrobClass.Ramified),  # t divides the discriminant
        ((4, 1), FrobClass.Ramified),  # so does t + 4
        ((10, 1), FrobClass.Transposition),  # t = 1: x^3+x+1 = (x-2)(irr quad)
        ((8, 1), FrobClass.Identity),  # t = 3: x^3+3x+3 splits completely
        ((7, 1), FrobClass.ThreeCycle),  # t = 4: x^3+4x+4 is irreducible
    ],
)
def test_classify_degree_one_by_hand(audit_curve, v_coeffs, frob):
    got_frob, got_place = classify_place(audit_curve, P(*v_coeffs))
    assert got_frob is frob
    assert got_place is FROB_TO_PLACE[frob]


def test_classify_ignores_rng_argument(audit_curve):
    from twistrank.ffpoly import RandomStream

    v = P(10, 1)
    assert classify_place(audit_curve, v, RandomStream(7)) == classify_place(
        audit_curve, v
    )


# --------------------------------------------------------------------------
# census
# --------------------------------------------------------------------------


def test_census_engines_agree(audit_curve):
    scalar = density_census(audit_curve, 2, engine="scalar")
    batch = density_census(audit_curve, 2, engine="batch")
    assert scalar.per_degree == batch.per_degree


def test_census_totals_and_densities(audit_curve):
    census = density_census(audit_curve, 3)
    for d in (1, 2, 3):
        assert census.degree_total(d) == count_monic_irreducibles(11, d)
    dens = census.cumulative_densities()
    assert math.isclose(sum(dens.values()), 1.0)
    pc = census.place_class_densities()
    assert pc["P1"] == 0.0
    assert math.isclose(pc["P0"] + pc["P2"], 1.0)
    assert pc["P2"] == dens["Identity"]
    # only t and t+4 ramify at any degree
    counts = census.cumulative_counts()
    assert counts["Ramified"] == 2


def test_census_rejects_bad_arguments(audit_curve):
    with pytest.raises(ValueError):
        density_census(audit_curve, 0)
    with pytest.raises(ValueError):
        density_census(audit_curve, 2, engine="gpu")


# --------------------------------------------------------------------------
# the 2-dimensional representation
# --------------------------------------------------------------------------


@pytest.mark.parametrize("ell", [5, 7])
def test_s3_representation_passes(ell):
    report = s3_representation_checks(ell)
    assert report["passed"]
    assert report["is_group_isomorphic_to_s3"]
    assert report["no_invariant_line"]
    assert report["centralizer_is_scalar"]


def test_s3_fixed_space_dimensions():
    dims = s3_representation_checks(5)["fixed_space_dims"]
    assert dims[(1, 2, 3)] == 2
    for transposition in ((2, 1, 3), (3, 2, 1), (1, 3, 2)):
        assert dims[transposition] == 1
    for cycle in ((2, 3, 1), (3, 1, 2)):
        assert dims[cycle] == 0


def test_s3_checks_reject_small_ell():
    for bad in (2, 3, 4, 9):
        with pytest.raises(ValueError):
            s3_representation_checks(bad)


# --------------------------------------------------------------------------
# effective bounds
# --------------------------------------------------------------------------


def test_chebotarev_bound_formula():
    got = chebotarev_bound(6, 3, 7, 0, 11, 4)
    root = math.sqrt(11) ** 4
    want = (2 * 3 / (4 * 6)) * ((6 + 7) * root + 6 * 1 * 11.0 + (6 + 7))
    assert got == math.nextafter(want, math.inf)
    # looser genus, looser bound
    assert chebotarev_bound(6, 3, 20, 0, 11, 4) > got


def test_chebotarev_bound_rejects_nonsense():
    with pytest.raises(ValueError):
        chebotarev_bound(6, 7, 0, 0, 11, 1)  # |C| > |G|
    with pytest.raises(ValueError):
        chebotarev_bound(6, 1, -1, 0, 11, 1)
    with pytest.raises(ValueError):
        chebotarev_bound(0, 1, 0, 0, 11, 1)


def test_chebotarev_ratio_bound_shapes():
    out = chebotarev_ratio_bound(6, 5, 1, 7, 0, 11, 12)
    assert out["condition_met"]
    assert 0 < out["bound"] < math.inf
    assert out["simplified_valid"] == (12 >= out["n_threshold"])
    cramped = chebotarev_ratio_bound(6, 5, 1, 10**6, 0, 11, 1)
    assert not cramped["condition_met"]
    assert cramped["bound"] == math.inf


def test_chebotarev_audit_structure(audit_curve):
    report = chebotarev_audit(audit_curve, 2)
    assert report["g_K"] == 0 and report["g_L"] == 7
    assert len(report["rows"]) == 6  # 3 classes x 2 degrees
    for row in report["rows"]:
        assert row["within_bound"]
        assert row["deviation"] < row["bound"]
    assert report["all_within_bound"]
    assert report["violations"] == 0
    assert report["theoretical_densities"]["Transposition"] == 0.5


def test_chebotarev_audit_accepts_precomputed_census(audit_curve):
    census = density_census(audit_curve, 2)
    again = chebotarev_audit(audit_curve, 2, census=census)
    assert again["rows"] == chebotarev_audit(audit_curve, 2)["rows"]
