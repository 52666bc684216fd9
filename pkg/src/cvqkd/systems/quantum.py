"""
Quantum-channel simulation as seen by the reconciliation decoder.

Three modes produce Alice's LLRs on Bob's key bits:

    full-chain  correlated Gaussian data, per-segment normalization and the
                mapping function, Alice's view turned into LLRs
    faded       the exact statistical equivalent: BPSK with per-segment
                gains h = sqrt(chi^2_D / D) at the equivalent SNR
    bi-awgn     the idealized equivalent BI-AWGN channel
"""

import logging
import math

import numpy as np

from cvqkd.codes.interleaver import deinterleave, interleave
from cvqkd.core.constants import IRCC_DEFAULT_INTERLEAVER_SEED, SUPPORTED_DIMENSIONS
from cvqkd.core.errors import ParameterError, UnsupportedDimensionError
from cvqkd.core.models import ChannelKind, ChannelSample, ChannelSpec, QucMode
from cvqkd.physical.channels import bpsk_modulate, soft_observation, transmit
from cvqkd.physical.multidim import virtual_channel

logger = logging.getLogger(__name__)

# Alice's modulation variance in the full chain; only the ratio to the noise matters
_SIGMA_X_SQ = 1.0


def _full_chain(bits, snr, dimension, rng, interleaver_seed) -> np.ndarray:
    n = bits.size
    sigma_n_sq = 0.0 if math.isinf(snr) else _SIGMA_X_SQ / snr
    x = rng.standard_normal(n) * math.sqrt(_SIGMA_X_SQ)
    y = x + rng.standard_normal(n) * math.sqrt(sigma_n_sq)
    sample = virtual_channel(
        x, y, interleave(bits, interleaver_seed), dimension, _SIGMA_X_SQ, sigma_n_sq
    )
    return deinterleave(soft_observation(sample), interleaver_seed)


def _faded(bits, snr, dimension, rng) -> np.ndarray:
    segments = bits.size // dimension
    gains = np.repeat(np.sqrt(rng.chisquare(dimension, segments) / dimension), dimension)
    symbols = bpsk_modulate(bits)
    noise_variance = 0.0 if math.isinf(snr) else 1.0 / snr
    received = gains * symbols + rng.standard_normal(bits.size) * math.sqrt(noise_variance)
    return soft_observation(
        ChannelSample(
            transmitted=symbols, received=received, gains=gains, noise_variance=noise_variance
        )
    )


def quc_transmit(
    bits: np.ndarray,
    snr: float,
    rng: np.random.Generator,
    mode: QucMode = QucMode.BI_AWGN,
    dimension: int = 8,
    interleaver_seed: int = IRCC_DEFAULT_INTERLEAVER_SEED,
) -> np.ndarray:
    """
    Alice's LLRs on Bob's bits after the quantum channel.

    Args:
        bits: Bob's key bits b, length N
        snr: Equivalent linear SNR (inf = noiseless)
        rng: Quantum-channel stream
        mode: Simulation mode
        dimension: Segment dimension D (full-chain and faded modes)
        interleaver_seed: Seed of the permutation b -> b'

    Returns:
        LLRs in the order of ``bits``

    Raises:
        ParameterError: N not divisible by D in a segment-based mode
        UnsupportedDimensionError: D outside {1, 2, 4, 8}
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if mode is QucMode.BI_AWGN:
        sample = transmit(bpsk_modulate(bits), ChannelSpec(ChannelKind.BI_AWGN_QUANTUM, snr), rng)
        return soft_observation(sample)
    if dimension not in SUPPORTED_DIMENSIONS:
        raise UnsupportedDimensionError(dimension)
    if bits.size % dimension:
        raise ParameterError(f"block length {bits.size} not divisible by D={dimension}")
    if mode is QucMode.FADED:
        return _faded(bits, snr, dimension, rng)
    return _full_chain(bits, snr, dimension, rng, interleaver_seed)
