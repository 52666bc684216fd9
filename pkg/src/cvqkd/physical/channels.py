"""
Channel models.

The equivalent quantum channel is a binary-input AWGN channel; the classical
channel is AWGN or flat Rayleigh block fading with perfect channel knowledge.
Noise is real-valued per dimension and ``snr = a^2 E[h^2] / sigma^2`` with
unit mean-square gain, so ``sigma^2 = a^2 / snr``.
"""

import logging
import math

import numpy as np
from scipy import special

from cvqkd.core.constants import ERROR_MSG_NON_POSITIVE_SNR, ERROR_MSG_ZERO_NOISE, LLR_SATURATION
from cvqkd.core.errors import ParameterError
from cvqkd.core.models import ChannelKind, ChannelSample, ChannelSpec

logger = logging.getLogger(__name__)


def bpsk_modulate(bits: np.ndarray, amplitude: float = 1.0) -> np.ndarray:
    """Map bit 0 -> +a, bit 1 -> -a."""
    return amplitude * (1.0 - 2.0 * np.asarray(bits, dtype=np.float64))


def hard_decision(llr: np.ndarray) -> np.ndarray:
    """Negative LLR decides 1; zero decides 0."""
    return (np.asarray(llr) < 0).astype(np.uint8)


def rayleigh_gains(n_segments: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draw h = |g| with g circular complex Gaussian, E|g|^2 = 1.

    Args:
        n_segments: Number of independent fading blocks
        rng: Random stream

    Returns:
        Gain magnitudes, one per segment
    """
    real = rng.standard_normal(n_segments)
    imag = rng.standard_normal(n_segments)
    return np.hypot(real, imag) / math.sqrt(2.0)


def transmit(
    symbols: np.ndarray, spec: ChannelSpec, rng: np.random.Generator
) -> ChannelSample:
    """
    Pass antipodal symbols through the channel.

    received = gains * symbols + n, n ~ N(0, sigma^2). With ``spec.snr = inf``
    the sample is noiseless (sigma^2 = 0) but the noise draw is still consumed
    so that stream positions do not depend on the SNR.

    Args:
        symbols: Antipodal symbols (+-a)
        spec: Channel kind, linear SNR and fading segment length
        rng: Random stream owned by the caller

    Returns:
        ChannelSample with the gains used and sigma^2

    Raises:
        ParameterError: Empty input, non-positive SNR or ragged fading segments
    """
    symbols = np.asarray(symbols, dtype=np.float64)
    n = len(symbols)
    if n == 0:
        raise ParameterError("symbols must be nonempty")
    if not spec.snr > 0:
        raise ParameterError(ERROR_MSG_NON_POSITIVE_SNR, snr=spec.snr)

    if spec.is_faded:
        if n % spec.segment_length:
            raise ParameterError(
                f"length {n} not divisible by segment_length {spec.segment_length}"
            )
        gains = np.repeat(rayleigh_gains(n // spec.segment_length, rng), spec.segment_length)
    else:
        gains = np.ones(n)

    power = float(np.mean(symbols**2))
    noise_variance = 0.0 if math.isinf(spec.snr) else power / spec.snr
    noise = rng.standard_normal(n) * math.sqrt(noise_variance)
    return ChannelSample(
        transmitted=symbols,
        received=gains * symbols + noise,
        gains=gains,
        noise_variance=noise_variance,
    )


def llr(sample: ChannelSample, amplitude: float = 1.0) -> np.ndarray:
    """
    Coherent-detection LLR with known fading.

    llr = 2 h a r / sigma^2; positive means bit 0.

    Raises:
        ParameterError: Non-positive amplitude or zero noise variance
    """
    if not amplitude > 0:
        raise ParameterError(f"amplitude must be positive, got {amplitude}")
    if not sample.noise_variance > 0:
        raise ParameterError(ERROR_MSG_ZERO_NOISE)
    return 2.0 * sample.gains * amplitude * sample.received / sample.noise_variance


def soft_observation(sample: ChannelSample, amplitude: float = 1.0) -> np.ndarray:
    """LLRs for any sample; noiseless samples saturate at +-LLR_SATURATION."""
    if sample.noise_variance > 0:
        return llr(sample, amplitude)
    return LLR_SATURATION * np.sign(sample.gains * sample.received)


def q_function(x: float) -> float:
    """Gaussian tail probability Q(x)."""
    return 0.5 * float(special.erfc(x / math.sqrt(2.0)))


def uncoded_ber(snr: float) -> float:
    """Hard-decision BPSK bit error rate over AWGN at linear SNR."""
    return q_function(math.sqrt(snr))
