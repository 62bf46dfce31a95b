"""Command line front end.

Every subcommand prints a JSON payload (or CSV rows with --format csv),
and records a manifest file containing the exact argv, the package version
and a sha256 digest of the canonical output. ``--replay <manifest>``
re-executes the recorded run and verifies the digest, which is the
reproducibility contract: same argv, same bytes.

Exit codes: 0 on success, 1 when a verified claim fails (a table cell
mismatch, a bound violation, a failed inequality), 2 on configuration
errors (bad flags, bad curve file, uncertified curve, missing --seed).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .constants import E, P, S, moment_bound, table1, verify_claims
from .ffpoly import FieldSpec, Poly
from .markov import (
    DEFAULT_R,
    compare_dtable_vs_two_step,
    parity_weighted_pr,
    point_mass,
    pr_distribution,
    pr_normalizer,
)
from .places import (
    CurveConfig,
    certify_s3,
    chebotarev_audit,
    density_census,
    s3_representation_checks,
)
from .simulate import SimConfig, omega_distribution, run_experiment


class ConfigError(ValueError):
    """User-facing configuration problem; maps to exit code 2."""


def _version() -> str:
    from . import __version__

    return __version__


# ---------------------------------------------------------------------------
# Curve files
# ---------------------------------------------------------------------------


def _load_curve(path: str) -> CurveConfig:
    """Read a curve description from a JSON or TOML file.

    Expected keys: ell, field {p, e, modulus?}, coeffs [a0, a1, a2] where
    each a_i is a low-first list of t-coefficients, and optionally
    genus_L_bound. Coefficients are reduced into canonical residues.
    """
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"curve file not found: {path}")
    raw = p.read_bytes()
    data = None
    errors = []
    order = [".json", ".toml"] if p.suffix.lower() != ".toml" else [".toml", ".json"]
    for kind in order:
        try:
            if kind == ".json":
                data = json.loads(raw.decode("utf-8"))
            else:
                try:
                    import tomllib
                except ModuleNotFoundError:  # python 3.10
                    import tomli as tomllib
                data = tomllib.loads(raw.decode("utf-8"))
            break
        except Exception as exc:  # try the other syntax before giving up
            errors.append(f"{kind[1:]}: {exc}")
    if data is None:
        raise ConfigError(f"could not parse {path} ({'; '.join(errors)})")
    try:
        fld = data["field"]
        modulus = fld.get("modulus")
        spec = FieldSpec(
            int(fld["p"]),
            int(fld.get("e", 1)),
            tuple(int(c) for c in modulus) if modulus is not None else None,
        )
        coeff_lists = data["coeffs"]
        if len(coeff_lists) != 3:
            raise KeyError("coeffs must list exactly [a0, a1, a2]")
        polys = tuple(
            Poly(spec, tuple(int(c) % spec.q for c in lows)) for lows in coeff_lists
        )
        bound = data.get("genus_L_bound")
        return CurveConfig(
            int(data["ell"]),
            spec,
            polys,
            int(bound) if bound is not None else None,
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad curve file {path}: {exc}") from exc


def _checked_curve(path: str) -> tuple[CurveConfig, list[str]]:
    """Load a curve and insist on the certified Galois image.

    Returns the curve together with the warnings that every curve-based
    command echoes: conditions the downstream theory assumes but that a
    desk-scale run cannot itself confirm.
    """
    curve = _load_curve(path)
    cert = certify_s3(curve)
    if not cert:
        raise ConfigError(f"curve not certified: {cert.reason}")
    warnings = [
        "statements proved for q large are probed here at desk scale, "
        f"q = {curve.field.q}",
        f"genus bound g_L = {curve.genus_L_bound} caps the error term; "
        "a sharper curve-specific genus tightens every bound",
    ]
    return curve, warnings


# ---------------------------------------------------------------------------
# Output plumbing
# ---------------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {
            (k if isinstance(k, str) else str(k)): _jsonable(v)
            for k, v in obj.items()
        }
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item) and not isinstance(obj, (int, float)):
        return obj.item()
    return obj


def _scrub(obj):
    """Drop wall-clock fields so digests only cover deterministic content."""
    if isinstance(obj, dict):
        return {k: _scrub(v) for k, v in obj.items() if k != "elapsed_seconds"}
    if isinstance(obj, list):
        return [_scrub(v) for v in obj]
    return obj


def _digest(payload: dict) -> str:
    canon = json.dumps(_scrub(payload), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


@dataclass
class RunManifest:
    command: str
    argv: list
    version: str
    created: str
    digest: str
    exit_code: int
    output_path: Optional[str]


def _emit(payload: dict, rows, args) -> None:
    if args.format == "csv":
        if not rows:
            raise ConfigError(f"{args.command} has no tabular form for --format csv")
        buf = io.StringIO()
        fields = list(rows[0].keys())
        writer = csv.DictWriter(buf, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _jsonable(v) for k, v in row.items()})
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _manifest_path(args) -> Path:
    if args.manifest:
        return Path(args.manifest)
    if args.out:
        return Path(str(args.out) + ".manifest.json")
    return Path(f"twistrank-{args.command}.manifest.json")


def _write_manifest(args, argv: list, payload: dict, code: int) -> None:
    manifest = RunManifest(
        command=args.command,
        argv=list(argv),
        version=_version(),
        created=datetime.now(timezone.utc).isoformat(),
        digest=_digest(payload),
        exit_code=code,
        output_path=str(args.out) if args.out else None,
    )
    path = _manifest_path(args)
    path.write_text(json.dumps(asdict(manifest), indent=2) + "\n", encoding="utf-8")


def _warn(messages) -> None:
    for msg in messages:
        print(f"warning: {msg}", file=sys.stderr)


# ---------------------------------------------------------------------------
# Subcommands: each returns (payload, csv_rows, exit_code)
# ---------------------------------------------------------------------------


def _cmd_table1(args):
    report = table1()
    payload = {
        "rows": report.rows(),
        "all_match": report.all_match,
        "mismatches": [list(m) for m in report.mismatches],
        "tolerance": 5e-5,
    }
    return payload, report.rows(), 0 if report.all_match else 1


def _cmd_constants(args):
    mb = moment_bound(args.ell, args.p, args.m, args.mode)
    payload = {
        "ell": args.ell,
        "p": args.p,
        "m": args.m,
        "mode": args.mode,
        "S": S(args.ell, args.p),
        "E": E(args.ell, args.p, args.m, args.mode),
        "P": P(args.ell, args.m, args.rho),
        "moment_bound": mb,
    }
    row = dict(payload)
    row.update({f"bound_{k}": v for k, v in row.pop("moment_bound").items()})
    return payload, [row], 0


def _cmd_stationary(args):
    base = pr_distribution(args.ell, args.R)
    dist = base if args.rho0 is None else parity_weighted_pr(args.ell, args.rho0, args.R)
    probs = [float(x) for x in dist.probs]
    payload = {
        "ell": args.ell,
        "R": args.R,
        "rho0": args.rho0,
        "normalizer": pr_normalizer(args.ell),
        "parity": float(dist.parity()),
        "tail": float(dist.tail),
        "probs": probs,
    }
    rows = [{"rank": r, "probability": p} for r, p in enumerate(probs)]
    return payload, rows, 0


def _cmd_simulate(args):
    if args.seed is None:
        raise ConfigError("simulate requires an explicit --seed for reproducibility")
    curve, warnings = _checked_curve(args.curve)
    if args.mu == "stationary":
        mu_star = parity_weighted_pr(curve.ell, args.rho0, DEFAULT_R)
        warnings.append(
            f"initial law: stationary parity mix with rho0 = {args.rho0}"
        )
    else:
        mu_star = point_mass(args.init_rank, DEFAULT_R)
        warnings.append(f"initial law: point mass at rank {args.init_rank}")
    config = SimConfig(
        curve=curve,
        n=args.degree,
        samples=args.samples,
        mu_star=mu_star,
        transition_mode=args.mode,
        seed=args.seed,
        workers=args.workers,
        shuffle_factors=args.shuffle_factors,
        engine=args.engine,
    )
    _warn(warnings)
    report = run_experiment(config)
    payload = _jsonable(report.to_dict())
    payload["warnings"] = warnings
    rows = [
        {"rank": r, "count": c, "empirical": float(c) / args.samples}
        for r, c in sorted((int(k), v) for k, v in report.rank_counts.items())
    ]
    return payload, rows, 0


def _cmd_classify(args):
    curve, warnings = _checked_curve(args.curve)
    _warn(warnings)
    census = density_census(curve, args.degree, engine=args.engine)
    per_degree = {str(d): census.per_degree[d] for d in sorted(census.per_degree)}
    payload = {
        "q": census.q,
        "ell": census.ell,
        "max_degree": census.max_degree,
        "per_degree": per_degree,
        "cumulative_counts": census.cumulative_counts(),
        "cumulative_densities": census.cumulative_densities(),
        "place_class_densities": census.place_class_densities(),
        "warnings": warnings,
    }
    rows = []
    for d in sorted(census.per_degree):
        row = {"degree": d}
        row.update(census.per_degree[d])
        row["total"] = census.degree_total(d)
        rows.append(row)
    return payload, rows, 0


def _cmd_chebotarev(args):
    curve, warnings = _checked_curve(args.curve)
    _warn(warnings)
    audit = chebotarev_audit(curve, args.degree)
    payload = _jsonable(audit)
    payload["warnings"] = warnings
    return payload, audit["rows"], 0 if audit["all_within_bound"] else 1


def _cmd_omega_dist(args):
    counts = omega_distribution(args.q, args.degree)
    total = sum(counts.values())
    expected = args.q ** args.degree
    payload = {
        "q": args.q,
        "n": args.degree,
        "counts": {str(k): v for k, v in sorted(counts.items())},
        "total": total,
        "matches_monic_count": total == expected,
    }
    rows = [{"distinct_factors": k, "count": v} for k, v in sorted(counts.items())]
    return payload, rows, 0 if total == expected else 1


def _cmd_claims(args):
    report = verify_claims(args.ell, args.p, args.kmax)
    payload = {
        "ell": report.ell,
        "p": report.p,
        "rows": _jsonable(report.rows),
        "all_passed": report.all_passed,
    }
    return payload, _jsonable(report.rows), 0 if report.all_passed else 1


def _cmd_s3_check(args):
    checks = s3_representation_checks(args.ell)
    payload = _jsonable(checks)
    rows = [
        {"check": k, "value": _jsonable(v)}
        for k, v in checks.items()
        if k != "fixed_space_dims"
    ]
    for perm, dim in checks["fixed_space_dims"].items():
        rows.append({"check": f"fixed_dim_{''.join(map(str, perm))}", "value": dim})
    return payload, rows, 0 if checks["passed"] else 1


def _cmd_dtable_diff(args):
    rows = compare_dtable_vs_two_step(args.ell, args.rmax)
    payload = {"ell": args.ell, "r_max": args.rmax, "rows": _jsonable(rows)}
    return payload, _jsonable(rows), 0


_COMMANDS = {
    "table1": _cmd_table1,
    "constants": _cmd_constants,
    "stationary": _cmd_stationary,
    "simulate": _cmd_simulate,
    "classify": _cmd_classify,
    "chebotarev": _cmd_chebotarev,
    "omega-dist": _cmd_omega_dist,
    "claims": _cmd_claims,
    "s3-check": _cmd_s3_check,
    "dtable-diff": _cmd_dtable_diff,
}


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistrank",
        description="Rank statistics of superelliptic twist families over F_q(t).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    parser.add_argument(
        "--replay",
        metavar="MANIFEST",
        help="re-run a recorded manifest and verify the output digest",
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument(
        "--format", choices=("json", "csv"), default="json", help="output format"
    )
    common.add_argument(
        "--manifest", help="manifest path (default: derived from --out or command)"
    )

    sub = parser.add_subparsers(dest="command")

    sub.add_parser("table1", parents=[common], help="recompute the printed table")

    q_const = sub.add_parser(
        "constants", parents=[common], help="S, E, P and the moment bound"
    )
    q_const.add_argument("--ell", type=int, required=True)
    q_const.add_argument("--p", type=int, required=True)
    q_const.add_argument("--m", type=int, default=1, help="moment order")
    q_const.add_argument("--mode", choices=("tabulated", "displayed"), default="tabulated")
    q_const.add_argument(
        "--rho", type=float, default=None, help="override the optimized rho in P"
    )

    q_stat = sub.add_parser(
        "stationary", parents=[common], help="stationary rank distribution"
    )
    q_stat.add_argument("--ell", type=int, required=True)
    q_stat.add_argument("--R", type=int, default=DEFAULT_R, help="rank truncation")
    q_stat.add_argument(
        "--rho0", type=float, default=None, help="parity mix (omit for the plain law)"
    )

    q_sim = sub.add_parser(
        "simulate", parents=[common], help="Monte Carlo rank walk over random twists"
    )
    q_sim.add_argument("--curve", required=True, help="curve config file (JSON/TOML)")
    q_sim.add_argument("--degree", type=int, required=True, help="twist degree n")
    q_sim.add_argument("--samples", type=int, required=True)
    q_sim.add_argument("--seed", type=int, default=None)
    q_sim.add_argument("--workers", type=int, default=1)
    q_sim.add_argument("--mode", choices=("two_step", "d_table"), default="two_step")
    q_sim.add_argument("--engine", choices=("auto", "batch", "scalar"), default="auto")
    q_sim.add_argument("--mu", choices=("point", "stationary"), default="point")
    q_sim.add_argument("--init-rank", type=int, default=0, help="rank for --mu point")
    q_sim.add_argument("--rho0", type=float, default=0.5, help="parity for --mu stationary")
    q_sim.add_argument(
        "--shuffle-factors",
        action="store_true",
        help="visit factors in a seeded random order (scalar engine only)",
    )

    q_cls = sub.add_parser(
        "classify", parents=[common], help="census of Frobenius classes by degree"
    )
    q_cls.add_argument("--curve", required=True)
    q_cls.add_argument("--degree", type=int, required=True, help="max place degree")
    q_cls.add_argument("--engine", choices=("auto", "batch", "scalar"), default="auto")

    q_cheb = sub.add_parser(
        "chebotarev", parents=[common], help="audit class counts against the bound"
    )
    q_cheb.add_argument("--curve", required=True)
    q_cheb.add_argument("--degree", type=int, required=True)

    q_om = sub.add_parser(
        "omega-dist", parents=[common], help="distinct-factor counts of monic degree-n polys"
    )
    q_om.add_argument("--q", type=int, required=True)
    q_om.add_argument("--degree", type=int, required=True)

    q_clm = sub.add_parser(
        "claims", parents=[common], help="verify the headline inequalities"
    )
    q_clm.add_argument("--ell", type=int, required=True)
    q_clm.add_argument("--p", type=int, required=True)
    q_clm.add_argument("--kmax", type=int, default=6)

    q_s3 = sub.add_parser(
        "s3-check", parents=[common], help="exact checks on the mod-ell representation"
    )
    q_s3.add_argument("--ell", type=int, required=True)

    q_dt = sub.add_parser(
        "dtable-diff", parents=[common], help="aggregated law vs two single steps"
    )
    q_dt.add_argument("--ell", type=int, required=True)
    q_dt.add_argument("--rmax", type=int, default=12)

    return parser


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def _dispatch(args):
    return _COMMANDS[args.command](args)


def _run_replay(manifest_path: str) -> int:
    path = Path(manifest_path)
    if not path.is_file():
        print(f"error: manifest not found: {manifest_path}", file=sys.stderr)
        return 2
    try:
        recorded = json.loads(path.read_text(encoding="utf-8"))
        argv = list(recorded["argv"])
        expected = recorded["digest"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"error: bad manifest {manifest_path}: {exc}", file=sys.stderr)
        return 2
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.replay or not args.command:
        print("error: manifest does not record a direct subcommand run", file=sys.stderr)
        return 2
    try:
        payload, _rows, code = _dispatch(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    got = _digest(payload)
    match = got == expected
    report = {
        "replay_of": str(path),
        "command": args.command,
        "expected_digest": expected,
        "recomputed_digest": got,
        "match": match,
        "recorded_exit_code": recorded.get("exit_code"),
        "exit_code": code,
    }
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return 0 if match and code == recorded.get("exit_code") else 1


def main(argv: Optional[list] = None) -> int:
    raw_argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(raw_argv)
    if args.replay:
        if args.command:
            print("error: --replay takes no subcommand", file=sys.stderr)
            return 2
        return _run_replay(args.replay)
    if not args.command:
        parser.print_usage(sys.stderr)
        print("error: a subcommand is required", file=sys.stderr)
        return 2
    try:
        payload, rows, code = _dispatch(args)
        _emit(payload, rows, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write_manifest(args, raw_argv, payload, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
