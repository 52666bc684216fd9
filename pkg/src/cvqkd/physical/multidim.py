"""
Multidimensional reverse reconciliation.

Bob splits his Gaussian data y into D-dimensional segments, normalizes each
one onto the unit sphere, maps D key bits to the spherical code point
u = (-1)^b / sqrt(D), and discloses the orthogonal matrix M with M y' = u.
Alice applies the same M to her normalized data x' and obtains a noisy view
u~ = M x' of the spherical code.

M is built from a family {A_1 = I, A_2, ..., A_D} of signed permutations
whose images {A_d v} form an orthonormal basis for any unit v; this exists
only for D in {1, 2, 4, 8}. With alpha_d = <A_d y', u>, M = sum_d alpha_d A_d.

Conditioned on Bob's segment norm, the resulting virtual channel is a
block-faded BI-AWGN channel at snr = sigma_x^2 / sigma_n^2 with per-segment
gain h = |y| / (sqrt(D) sigma_y). ``virtual_channel`` exposes it as a
ChannelSample so ``channels.llr`` applies unchanged.
"""

import logging
import math
from functools import lru_cache
from typing import Tuple

import numpy as np

from cvqkd.core.constants import ERROR_MSG_ZERO_NORM, SUPPORTED_DIMENSIONS
from cvqkd.core.errors import DegenerateSegmentError, ParameterError, UnsupportedDimensionError
from cvqkd.core.models import ChannelSample, MappingFunction, OrthogonalFamily, Segment

logger = logging.getLogger(__name__)

# Each D=8 matrix as (column, sign) per row: (A v)[row] = sign * v[column]
_OCTONION_ROWS = (
    ((1, -1), (0, 1), (3, 1), (2, -1), (5, 1), (4, -1), (7, -1), (6, 1)),
    ((2, -1), (3, -1), (0, 1), (1, 1), (6, 1), (7, 1), (4, -1), (5, -1)),
    ((3, -1), (2, 1), (1, -1), (0, 1), (7, 1), (6, -1), (5, 1), (4, -1)),
    ((4, -1), (5, -1), (6, -1), (7, -1), (0, 1), (1, 1), (2, 1), (3, 1)),
    ((5, -1), (4, 1), (7, -1), (6, 1), (1, -1), (0, 1), (3, -1), (2, 1)),
    ((6, -1), (7, 1), (4, 1), (5, -1), (2, -1), (3, 1), (0, 1), (1, -1)),
    ((7, -1), (6, -1), (5, 1), (4, 1), (3, -1), (2, -1), (1, 1), (0, 1)),
)

# Left multiplication by the quaternion units i, j, k on (1, i, j, k) coordinates
_QUATERNION_ROWS = (
    ((1, -1), (0, 1), (3, -1), (2, 1)),
    ((2, -1), (3, 1), (0, 1), (1, -1)),
    ((3, -1), (2, -1), (1, 1), (0, 1)),
)

_COMPLEX_ROWS = (((1, -1), (0, 1)),)


def _signed_permutation(rows) -> np.ndarray:
    size = len(rows)
    matrix = np.zeros((size, size))
    for row, (column, sign) in enumerate(rows):
        matrix[row, column] = sign
    return matrix


@lru_cache(maxsize=None)
def orthogonal_family(dimension: int) -> OrthogonalFamily:
    """
    Return the orthogonal matrix family for dimension D.

    Args:
        dimension: One of 1, 2, 4, 8

    Returns:
        Immutable family with matrices of shape (D, D, D)

    Raises:
        UnsupportedDimensionError: D outside {1, 2, 4, 8}
    """
    if dimension not in SUPPORTED_DIMENSIONS:
        raise UnsupportedDimensionError(dimension)
    tables = {1: (), 2: _COMPLEX_ROWS, 4: _QUATERNION_ROWS, 8: _OCTONION_ROWS}[dimension]
    matrices = [np.eye(dimension)] + [_signed_permutation(rows) for rows in tables]
    stacked = np.stack(matrices)
    stacked.setflags(write=False)
    return OrthogonalFamily(dimension=dimension, matrices=stacked)


def normalize(raw: np.ndarray) -> Segment:
    """
    Split a Gaussian segment into norm and unit direction.

    Raises:
        DegenerateSegmentError: Zero-norm segment
    """
    raw = np.asarray(raw, dtype=np.float64)
    norm = float(np.linalg.norm(raw))
    if norm == 0.0:
        raise DegenerateSegmentError(ERROR_MSG_ZERO_NORM)
    return Segment(raw=raw, norm=norm, unit=raw / norm)


def spherical_map(bits: np.ndarray) -> np.ndarray:
    """Map D bits to the spherical code point (-1)^b / sqrt(D)."""
    bits = np.asarray(bits, dtype=np.float64)
    return (1.0 - 2.0 * bits) / math.sqrt(bits.shape[-1])


def _unit(vector) -> np.ndarray:
    return vector.unit if isinstance(vector, Segment) else np.asarray(vector, dtype=np.float64)


def compute_mapping(y_unit, u: np.ndarray, family: OrthogonalFamily) -> MappingFunction:
    """
    Build M(y', u) = sum_d alpha_d A_d with alpha_d = <A_d y', u>.

    Args:
        y_unit: Bob's normalized segment (Segment or unit vector)
        u: Spherical code point
        family: Orthogonal family of matching dimension

    Returns:
        MappingFunction with M y' = u and M M^T = I
    """
    y = _unit(y_unit)
    u = np.asarray(u, dtype=np.float64)
    if y.shape != (family.dimension,) or u.shape != (family.dimension,):
        raise ParameterError(
            f"segment and code point must have length {family.dimension}"
        )
    basis = family.matrices @ y
    alpha = basis @ u
    matrix = np.tensordot(alpha, family.matrices, axes=1)
    return MappingFunction(dimension=family.dimension, alpha=alpha, matrix=matrix)


def apply_mapping(m: MappingFunction, x_unit) -> np.ndarray:
    """Alice's noisy view u~ = M x'."""
    return m.matrix @ _unit(x_unit)


def decoder_input(m: MappingFunction, x_unit) -> np.ndarray:
    """Pre-LLR vector sqrt(D) u~, whose noiseless value is +-1 per dimension."""
    return math.sqrt(m.dimension) * apply_mapping(m, x_unit)


def equivalent_snr(sigma_x_sq: float, sigma_n_sq: float, dimension: int) -> float:
    """
    SNR of the virtual channel seen by the decoder, sigma_x^2 / sigma_n^2.

    The dimension only selects the fading law of the virtual channel
    (h^2 ~ chi^2_D / D); the SNR itself does not depend on it.
    """
    if dimension not in SUPPORTED_DIMENSIONS:
        raise UnsupportedDimensionError(dimension)
    if not sigma_x_sq > 0 or sigma_n_sq < 0:
        raise ParameterError("variances must be positive")
    if sigma_n_sq == 0:
        return math.inf
    return sigma_x_sq / sigma_n_sq


def batch_mapping(
    y_units: np.ndarray, codes: np.ndarray, family: OrthogonalFamily
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Vectorized ``compute_mapping`` over S segments.

    Args:
        y_units: Normalized segments, shape (S, D)
        codes: Spherical code points, shape (S, D)
        family: Orthogonal family

    Returns:
        (alpha of shape (S, D), matrices of shape (S, D, D))
    """
    basis = np.einsum("dij,sj->sdi", family.matrices, y_units)
    alpha = np.einsum("sdi,si->sd", basis, codes)
    matrices = np.einsum("sd,dij->sij", alpha, family.matrices)
    return alpha, matrices


def _segment_norms(blocks: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(blocks, axis=1)
    if np.any(norms == 0.0):
        raise DegenerateSegmentError(ERROR_MSG_ZERO_NORM)
    return norms


def virtual_channel(
    x: np.ndarray,
    y: np.ndarray,
    bits: np.ndarray,
    dimension: int,
    sigma_x_sq: float,
    sigma_n_sq: float,
) -> ChannelSample:
    """
    Run the mapping on whole blocks and return Alice's virtual-channel view.

    Bob maps ``bits`` (already interleaved) onto spherical codes and builds
    M per segment from his data ``y``; Alice applies M to her data ``x``.
    With the disclosed segment norms |y_i| the observation
    r = |x_i| u~_i sigma_y / sigma_x^2 equals h_i s + n with s = +-1,
    h_i = |y_i| / (sqrt(D) sigma_y) and n ~ N(0, sigma_n^2 / sigma_x^2).

    Args:
        x: Alice's Gaussian samples, length N
        y: Bob's Gaussian samples, length N
        bits: Bob's interleaved key bits, length N
        dimension: Segment dimension D
        sigma_x_sq: Alice's modulation variance
        sigma_n_sq: Channel noise variance (0 for a noiseless channel)

    Returns:
        ChannelSample in key-bit order (still interleaved)
    """
    family = orthogonal_family(dimension)
    n = len(bits)
    if n % dimension:
        raise ParameterError(f"block length {n} not divisible by D={dimension}")
    segments = n // dimension
    x_blocks = np.asarray(x, dtype=np.float64).reshape(segments, dimension)
    y_blocks = np.asarray(y, dtype=np.float64).reshape(segments, dimension)
    x_norms = _segment_norms(x_blocks)
    y_norms = _segment_norms(y_blocks)

    codes = spherical_map(np.asarray(bits).reshape(segments, dimension))
    _, matrices = batch_mapping(y_blocks / y_norms[:, None], codes, family)
    views = np.einsum("sij,sj->si", matrices, x_blocks / x_norms[:, None])

    sigma_y = math.sqrt(sigma_x_sq + sigma_n_sq)
    received = (x_norms[:, None] * views) * (sigma_y / sigma_x_sq)
    gains = np.repeat(y_norms / (math.sqrt(dimension) * sigma_y), dimension)
    return ChannelSample(
        transmitted=(math.sqrt(dimension) * codes).ravel(),
        received=received.ravel(),
        gains=gains,
        noise_variance=sigma_n_sq / sigma_x_sq,
    )
