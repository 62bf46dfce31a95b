"""Deterministic counter-based random streams.

Every stochastic quantity in the simulator is a pure function of
(seed, sample_index, purpose_tag, draw_index) through the splitmix64
finalizer. Random access means results cannot depend on evaluation order,
chunk boundaries, or worker count; the scalar and vectorized walkers consume
bit-identical draws.
"""

from __future__ import annotations

import numpy as np

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15

# purpose tags
TAG_COEFF = 1  # polynomial coefficients of the sampled twist
TAG_INIT = 2  # initial rank draw
TAG_WALK = 3  # rank-transition draws
TAG_SHUFFLE = 4  # optional factor-order shuffle


def splitmix64(x: int) -> int:
    x &= _MASK
    x = (x + _GOLDEN) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def draw_u64(seed: int, sample: int, tag: int, j: int) -> int:
    """The j-th 64-bit draw for purpose `tag` of sample `sample`."""
    h = splitmix64(seed ^ 0x5851F42D4C957F2D)
    h = splitmix64(h + (sample + 1) * _GOLDEN)
    h = splitmix64(h ^ ((tag << 56) | (j & 0x00FFFFFFFFFFFFFF)))
    return h


def draw_u01(seed: int, sample: int, tag: int, j: int) -> float:
    """Uniform in [0, 1) with 53-bit resolution."""
    return (draw_u64(seed, sample, tag, j) >> 11) * (2.0 ** -53)


def draw_int(seed: int, sample: int, tag: int, j: int, n: int) -> int:
    """Uniform integer in [0, n); 53-bit reduction, bias < n * 2^-53."""
    return (draw_u64(seed, sample, tag, j) >> 11) % n


# ---- vectorized twins -------------------------------------------------------
# These reproduce the scalar functions exactly over uint64 arrays.

_U = np.uint64


def _splitmix64_np(x: np.ndarray) -> np.ndarray:
    x = (x + _U(_GOLDEN)).astype(_U)
    z = x
    z = (z ^ (z >> _U(30))) * _U(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> _U(27))) * _U(0x94D049BB133111EB)
    return z ^ (z >> _U(31))


def draw_u64_np(seed: int, samples: np.ndarray, tag: int, j) -> np.ndarray:
    """Vectorized draw_u64. `samples` uint64 array; `j` scalar or array."""
    with np.errstate(over="ignore"):
        h0 = splitmix64(seed ^ 0x5851F42D4C957F2D)
        h = _splitmix64_np(
            _U(h0) + (samples.astype(_U) + _U(1)) * _U(_GOLDEN)
        )
        jj = np.asarray(j, dtype=_U)
        h = _splitmix64_np(
            h ^ ((_U(tag) << _U(56)) | (jj & _U(0x00FFFFFFFFFFFFFF)))
        )
    return h


def draw_u01_np(seed: int, samples: np.ndarray, tag: int, j) -> np.ndarray:
    return (draw_u64_np(seed, samples, tag, j) >> _U(11)).astype(np.float64) * (
        2.0 ** -53
    )


def draw_int_np(seed: int, samples: np.ndarray, tag: int, j, n: int) -> np.ndarray:
    return ((draw_u64_np(seed, samples, tag, j) >> _U(11)) % _U(n)).astype(np.int64)
