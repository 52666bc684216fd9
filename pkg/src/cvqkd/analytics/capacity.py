"""
Discrete-input continuous-output memoryless channel (DCMC) capacity of
BPSK over real AWGN, and the SNR at which it reaches a code rate.

With noise variance sigma^2 = 1/snr,

    C = 1 - E[log2(1 + exp(-2 (1 + n) / sigma^2))],  n ~ N(0, sigma^2),

estimated with antithetic noise pairs (n, -n) from a fixed seed so that the
curve is smooth in snr and root finding is deterministic.
"""

import logging
import math

import numpy as np
from scipy import optimize

from cvqkd.core.constants import DCMC_SAMPLES, DCMC_SEED, db_to_linear
from cvqkd.core.errors import DomainError, SearchError
from cvqkd.core.models import CapacityEstimate
from cvqkd.core.rng import stream_for

logger = logging.getLogger(__name__)


def dcmc_capacity(
    snr: float, n_samples: int = DCMC_SAMPLES, seed: int = DCMC_SEED
) -> CapacityEstimate:
    """
    BPSK capacity at linear ``snr`` with its Monte-Carlo standard error.

    Raises:
        DomainError: Non-positive snr
    """
    if not snr > 0:
        raise DomainError(f"SNR must be positive, got {snr}")
    if math.isinf(snr):
        return CapacityEstimate(value=1.0, std_error=0.0)
    sigma = math.sqrt(1.0 / snr)
    noise = stream_for(seed).standard_normal(max(n_samples // 2, 1)) * sigma
    scale = -2.0 * snr
    loss = 0.5 * (
        np.logaddexp(0.0, scale * (1.0 + noise)) + np.logaddexp(0.0, scale * (1.0 - noise))
    ) / math.log(2.0)
    std_error = float(np.std(loss, ddof=1) / math.sqrt(loss.size)) if loss.size > 1 else 0.0
    return CapacityEstimate(value=1.0 - float(np.mean(loss)), std_error=std_error)


def solve_snr_for_rate(
    rate: float,
    low_db: float = -10.0,
    high_db: float = 20.0,
    n_samples: int = DCMC_SAMPLES,
    tolerance: float = 1e-4,
) -> float:
    """
    Linear SNR at which the BPSK capacity equals ``rate``.

    Raises:
        DomainError: rate outside (0, 1)
        SearchError: The capacity does not cross ``rate`` inside the bracket
    """
    if not 0.0 < rate < 1.0:
        raise DomainError(f"rate must lie in (0, 1), got {rate}")

    def gap(snr_db: float) -> float:
        return dcmc_capacity(db_to_linear(snr_db), n_samples).value - rate

    try:
        root_db = optimize.brentq(gap, low_db, high_db, xtol=tolerance)
    except ValueError as e:
        raise SearchError(
            f"capacity does not reach rate {rate} in [{low_db}, {high_db}] dB",
            rate=rate,
        ) from e
    logger.info(f"DCMC capacity reaches rate {rate} at {root_db:.3f} dB")
    return db_to_linear(root_db)
