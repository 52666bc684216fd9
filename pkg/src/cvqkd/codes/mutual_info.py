"""
Mutual information between bits and their LLRs.

J(sigma) is the capacity of a binary-input channel whose LLRs are
consistent Gaussian, L ~ N(+-sigma^2/2, sigma^2). The closed forms below are
the usual piecewise approximations (|error| < 1e-3).
"""

import logging
import math
from typing import Literal, NamedTuple

import numpy as np

from cvqkd.core.constants import APRIORI_LLR_LIMIT, MI_HISTOGRAM_BINS, MI_MIN_SAMPLES
from cvqkd.core.errors import ParameterError

logger = logging.getLogger(__name__)

_J_KNEE = 1.6363
_J_MAX_SIGMA = 10.0
_J_INV_KNEE = 0.3646
_J_INV_CEILING = 0.9999


class MiEstimate(NamedTuple):
    value: float
    low_sample: bool  # fewer than MI_MIN_SAMPLES observations


def j_function(sigma):
    """J(sigma), vectorized over numpy input."""
    sigma = np.asarray(sigma, dtype=np.float64)
    if np.any(sigma < 0):
        raise ParameterError("J is defined for sigma >= 0")
    low = -0.0421061 * sigma**3 + 0.209252 * sigma**2 - 0.00640081 * sigma
    high = 1.0 - np.exp(
        0.00181491 * sigma**3 - 0.142675 * sigma**2 - 0.0822054 * sigma + 0.0549608
    )
    value = np.where(sigma <= _J_KNEE, low, np.where(sigma < _J_MAX_SIGMA, high, 1.0))
    return float(value) if value.ndim == 0 else value


def j_inverse(mi):
    """sigma such that J(sigma) = mi; mi is clipped to 0.9999 from above."""
    mi = np.asarray(mi, dtype=np.float64)
    if np.any((mi < 0) | (mi > 1)):
        raise ParameterError("mutual information must lie in [0, 1]")
    mi = np.minimum(mi, _J_INV_CEILING)
    low = 1.09542 * mi**2 + 0.214217 * mi + 2.33727 * np.sqrt(mi)
    with np.errstate(divide="ignore"):
        high = -0.706692 * np.log(0.386013 * (1.0 - mi)) + 1.75017 * mi
    value = np.where(mi <= _J_INV_KNEE, low, high)
    return float(value) if value.ndim == 0 else value


def apriori_llrs(bits: np.ndarray, ia: float, rng: np.random.Generator) -> np.ndarray:
    """
    Consistent Gaussian a-priori LLRs carrying ``ia`` bits of information.

    L = (sigma^2 / 2)(1 - 2x) + sigma * n with sigma = J^-1(ia). I_A = 1
    gives +-APRIORI_LLR_LIMIT and I_A = 0 gives zeros; the noise draw is
    consumed in every case.
    """
    if not 0.0 <= ia <= 1.0:
        raise ParameterError(f"I_A must lie in [0, 1], got {ia}")
    signs = 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)
    noise = rng.standard_normal(signs.size)
    if ia >= 1.0:
        return APRIORI_LLR_LIMIT * signs
    sigma = j_inverse(ia)
    return 0.5 * sigma**2 * signs + sigma * noise


def _histogram_mi(llrs: np.ndarray, bits: np.ndarray) -> float:
    edges = np.histogram_bin_edges(llrs, bins=MI_HISTOGRAM_BINS)
    total = llrs.size
    joint = []
    for b in (0, 1):
        counts, _ = np.histogram(llrs[bits == b], bins=edges)
        joint.append(counts / total)
    p0, p1 = joint
    marginal = p0 + p1
    priors = (p0.sum(), p1.sum())
    mi = 0.0
    for p, prior in zip((p0, p1), priors):
        mask = p > 0
        mi += float(np.sum(p[mask] * np.log2(p[mask] / (prior * marginal[mask]))))
    return mi


def _time_average_mi(llrs: np.ndarray, bits: np.ndarray) -> float:
    signed = (1.0 - 2.0 * bits) * llrs
    return 1.0 - float(np.mean(np.logaddexp(0.0, -signed))) / math.log(2.0)


def mi_estimate_detail(
    llrs: np.ndarray,
    truth: np.ndarray,
    method: Literal["histogram", "time-average"] = "histogram",
) -> MiEstimate:
    """
    Estimate I(X; L) in bits, clipped to [0, 1].

    Raises:
        ParameterError: Length mismatch, empty input or unknown method
    """
    llrs = np.asarray(llrs, dtype=np.float64).ravel()
    truth = np.asarray(truth, dtype=np.uint8).ravel()
    if llrs.size != truth.size or llrs.size == 0:
        raise ParameterError("llrs and truth must be nonempty and of equal length")
    if method == "histogram":
        value = _histogram_mi(llrs, truth)
    elif method == "time-average":
        value = _time_average_mi(llrs, truth)
    else:
        raise ParameterError(f"unknown MI estimator '{method}'")
    low_sample = llrs.size < MI_MIN_SAMPLES
    if low_sample:
        logger.warning(f"MI estimate from {llrs.size} samples has wide variance")
    return MiEstimate(value=min(max(value, 0.0), 1.0), low_sample=low_sample)


def mi_estimate(llrs: np.ndarray, truth: np.ndarray, method: str = "histogram") -> float:
    """Mutual information between ``truth`` bits and their ``llrs``."""
    return mi_estimate_detail(llrs, truth, method).value
