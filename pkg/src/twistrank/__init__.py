"""Rank statistics of superelliptic twist families over rational function fields.

The package splits into arithmetic back ends (ffpoly, symbols, places),
the rank-walk probability model (markov, simulate and its vectorized twin
_batch), closed-form constants (constants) and a CLI (cli). Randomness is
counter-based throughout: any draw is addressed by (seed, sample, tag, j),
so runs are reproducible bit for bit across engines and worker counts.
"""

__version__ = "0.1.0"

from .constants import E, P, S, moment_bound, point_bound, table1, verify_claims
from .ffpoly import FieldSpec, Poly, factor
from .markov import (
    DEFAULT_R,
    MarkovOp,
    RankDist,
    estimate_gamma,
    parity_weighted_pr,
    point_mass,
    pr_distribution,
    pr_normalizer,
    superelliptic_operator,
)
from .places import (
    CurveConfig,
    DensityCensus,
    FrobClass,
    PlaceClass,
    certify_s3,
    chebotarev_audit,
    classify_place,
    density_census,
    s3_representation_checks,
)
from .simulate import (
    SimConfig,
    SimReport,
    deviation_bound,
    frak_n,
    m_nq,
    omega_distribution,
    run_experiment,
)
from .symbols import build_mu, equidistribution_census, jacobi_symbol, symbol

__all__ = [
    "__version__",
    "E",
    "P",
    "S",
    "moment_bound",
    "point_bound",
    "table1",
    "verify_claims",
    "FieldSpec",
    "Poly",
    "factor",
    "DEFAULT_R",
    "MarkovOp",
    "RankDist",
    "estimate_gamma",
    "parity_weighted_pr",
    "point_mass",
    "pr_distribution",
    "pr_normalizer",
    "superelliptic_operator",
    "CurveConfig",
    "DensityCensus",
    "FrobClass",
    "PlaceClass",
    "certify_s3",
    "chebotarev_audit",
    "classify_place",
    "density_census",
    "s3_representation_checks",
    "SimConfig",
    "SimReport",
    "deviation_bound",
    "frak_n",
    "m_nq",
    "omega_distribution",
    "run_experiment",
    "build_mu",
    "equidistribution_census",
    "jacobi_symbol",
    "symbol",
]
