import json

import pytest

from twistrank.ffpoly import FieldSpec, Poly
from twistrank.places import CurveConfig


@pytest.fixture(scope="session")
def f11():
    return FieldSpec(11)


@pytest.fixture(scope="session")
def audit_curve(f11):
    """x^3 + t*x + t over F_11 with ell = 5; certifies, ramified at two places."""
    t = Poly(f11, (0, 1))
    return CurveConfig(5, f11, (t, t, Poly(f11, ())))


@pytest.fixture(scope="session")
def skew_curve(f11):
    """A second certified curve with a2 != 0, so the depressed-cubic change
    of variables is actually exercised."""
    t = Poly(f11, (0, 1))
    return CurveConfig(5, f11, (t, Poly(f11, (3,)), t + Poly(f11, (1,))))


@pytest.fixture
def curve_file(tmp_path):
    """Write a curve description to disk; returns a factory(path_name, fmt)."""

    def make(name="curve.json", fmt="json", **overrides):
        data = {
            "ell": 5,
            "field": {"p": 11},
            "coeffs": [[0, 1], [0, 1], []],
        }
        data.update(overrides)
        path = tmp_path / name
        if fmt == "json":
            path.write_text(json.dumps(data))
        else:
            coeff_rows = ", ".join(str(list(c)) for c in data["coeffs"])
            lines = [
                f"ell = {data['ell']}",
                f"coeffs = [{coeff_rows}]",
                "",
                "[field]",
                f"p = {data['field']['p']}",
            ]
            if "e" in data["field"]:
                lines.append(f"e = {data['field']['e']}")
            path.write_text("\n".join(lines) + "\n")
        return path

    return make
