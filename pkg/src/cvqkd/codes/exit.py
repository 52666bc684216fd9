"""
EXIT-chart measurement for the URC inner code and the IRCC outer code.

Curves are measured, not computed: a-priori LLRs with the requested mutual
information are synthesized, the soft decoder runs once, and the extrinsic
output is scored with ``mi_estimate``.
"""

import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from cvqkd.codes.ircc import URC_TRELLIS, IrccProfile, component_codes, urc_transform
from cvqkd.codes.mutual_info import apriori_llrs, mi_estimate
from cvqkd.core.constants import EXIT_GRID_STEP, EXIT_SAMPLES, IRCC_RATES, db_to_linear
from cvqkd.core.errors import ParameterError
from cvqkd.core.models import ExitPoint
from cvqkd.core.rng import random_bits, stream_for

logger = logging.getLogger(__name__)

# Stream labels so inner and outer measurements never share draws
_INNER_STREAM = 0
_OUTER_STREAM = 1


def default_grid(step: float = EXIT_GRID_STEP) -> List[float]:
    """I_A grid 0, step, ..., 1."""
    count = int(round(1.0 / step))
    return [round(i * step, 10) for i in range(count + 1)]


def _check_grid(ia_grid: Sequence[float]) -> List[float]:
    grid = [float(ia) for ia in ia_grid]
    if not grid or any(not 0.0 <= ia <= 1.0 for ia in grid):
        raise ParameterError("I_A grid must be a nonempty subset of [0, 1]")
    return grid


def exit_inner(
    snr_db: float,
    ia_grid: Optional[Sequence[float]] = None,
    n_samples: int = EXIT_SAMPLES,
    seed: int = 0,
) -> List[ExitPoint]:
    """
    EXIT curve of the URC inner decoder over BPSK/AWGN.

    Args:
        snr_db: Channel SNR in dB
        ia_grid: A-priori mutual information values; defaults to ``default_grid()``
        n_samples: Bits per grid point
        seed: Master seed of the measurement

    Returns:
        One ExitPoint per grid value
    """
    grid = _check_grid(default_grid() if ia_grid is None else ia_grid)
    snr = db_to_linear(snr_db)
    sigma = math.sqrt(1.0 / snr)
    points = []
    for index, ia in enumerate(grid):
        rng = stream_for(seed, _INNER_STREAM, index)
        bits = random_bits(rng, n_samples)
        symbols = 1.0 - 2.0 * urc_transform(bits)
        received = symbols + sigma * rng.standard_normal(n_samples)
        channel = (2.0 * snr * received).reshape(-1, 1)
        apriori = apriori_llrs(bits, ia, rng)
        app, _ = URC_TRELLIS.bcjr(apriori, channel)
        points.append(ExitPoint(ia, mi_estimate(app - apriori, bits)))
    logger.info(f"Measured inner EXIT curve at {snr_db} dB over {len(grid)} points")
    return points


def component_exit_curve(
    rate: float,
    ia_grid: Optional[Sequence[float]] = None,
    n_samples: int = EXIT_SAMPLES,
    seed: int = 0,
) -> List[ExitPoint]:
    """EXIT curve of one component code, extrinsic on its coded bits."""
    grid = _check_grid(default_grid() if ia_grid is None else ia_grid)
    (component,) = component_codes([rate], n_samples)
    points = []
    for index, ia in enumerate(grid):
        rng = stream_for(seed, _OUTER_STREAM, component.index, index)
        coded = component.encode(random_bits(rng, component.k))
        apriori = apriori_llrs(coded, ia, rng)
        _, app = component.decode(apriori)
        points.append(ExitPoint(ia, mi_estimate(app - apriori, coded)))
    return points


def exit_outer(
    profile: IrccProfile,
    ia_grid: Optional[Sequence[float]] = None,
    n_samples: int = EXIT_SAMPLES,
    seed: int = 0,
) -> List[ExitPoint]:
    """Aggregate outer curve sum_i alpha_i * curve_i(I_A)."""
    grid = _check_grid(default_grid() if ia_grid is None else ia_grid)
    total = np.zeros(len(grid))
    for index in profile.active:
        curve = component_exit_curve(IRCC_RATES[index], grid, n_samples, seed)
        total += profile.fractions[index] * np.array([p.ie for p in curve])
    logger.info(f"Measured outer EXIT curve over {len(profile.active)} components")
    return [ExitPoint(ia, float(min(max(ie, 0.0), 1.0))) for ia, ie in zip(grid, total)]


def tunnel_is_open(
    inner: Sequence[ExitPoint], outer: Sequence[ExitPoint], upto: float = 0.95
) -> bool:
    """
    True when decoding can progress from I_A = 0 up to ``upto``.

    One inner pass maps x to T_in(x); the outer pass returns T_out(T_in(x)),
    the next inner a-priori. The tunnel is open if that exceeds x at every
    inner grid point below ``upto``.
    """
    inner_x = np.array([p.ia for p in inner])
    inner_y = np.array([p.ie for p in inner])
    outer_x = np.array([p.ia for p in outer])
    outer_y = np.array([p.ie for p in outer])
    for x in inner_x[inner_x < upto]:
        progressed = np.interp(np.interp(x, inner_x, inner_y), outer_x, outer_y)
        if progressed <= x:
            logger.debug(f"EXIT tunnel closes near I_A = {x:.3f}")
            return False
    return True
