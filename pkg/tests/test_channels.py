#!/usr/bin/env python3
"""
Test the channel models: BPSK mapping, AWGN and Rayleigh transmission, LLRs.

Usage:
    pytest tests/test_channels.py -v
"""

import math
import os
import sys

import numpy as np
import pytest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cvqkd.core.constants import LLR_SATURATION, db_to_linear, linear_to_db
from cvqkd.core.errors import ParameterError
from cvqkd.core.models import ChannelKind, ChannelSample, ChannelSpec
from cvqkd.core.rng import random_bits, stream_for
from cvqkd.physical import (
    bpsk_modulate,
    hard_decision,
    llr,
    rayleigh_gains,
    soft_observation,
    transmit,
    uncoded_ber,
)


class TestConversions:
    """Test dB conversion helpers."""

    def test_db_round_trip_values(self):
        assert db_to_linear(0.0) == pytest.approx(1.0)
        assert db_to_linear(3.0) == pytest.approx(1.9953, abs=1e-4)
        assert linear_to_db(10.0) == pytest.approx(10.0)

    def test_infinite_snr(self):
        assert math.isinf(db_to_linear(math.inf))


class TestBpsk:
    """Test modulation and slicing."""

    def test_mapping(self):
        assert bpsk_modulate(np.array([0, 1, 1, 0])).tolist() == [1.0, -1.0, -1.0, 1.0]

    def test_amplitude(self):
        assert bpsk_modulate(np.array([1]), amplitude=2.5).tolist() == [-2.5]

    def test_zero_llr_decides_zero(self):
        assert hard_decision(np.array([0.0, -1e-9, 3.0])).tolist() == [0, 1, 0]


class TestTransmit:
    """Test AWGN and Rayleigh transmission."""

    def test_noiseless_channel_is_identity(self):
        rng = stream_for(1)
        symbols = bpsk_modulate(random_bits(rng, 64))
        sample = transmit(symbols, ChannelSpec(ChannelKind.BI_AWGN_QUANTUM, math.inf), rng)
        assert sample.noise_variance == 0.0
        np.testing.assert_array_equal(sample.received, symbols)

    def test_noiseless_observation_saturates(self):
        rng = stream_for(2)
        bits = random_bits(rng, 32)
        spec = ChannelSpec(ChannelKind.AWGN_CLASSICAL, math.inf)
        sample = transmit(bpsk_modulate(bits), spec, rng)
        observed = soft_observation(sample)
        assert np.all(np.abs(observed) == LLR_SATURATION)
        np.testing.assert_array_equal(hard_decision(observed), bits)

    def test_non_positive_snr_rejected(self):
        with pytest.raises(ParameterError):
            ChannelSpec(ChannelKind.AWGN_CLASSICAL, 0.0)

    def test_empty_input_rejected(self):
        with pytest.raises(ParameterError):
            transmit(np.array([]), ChannelSpec(ChannelKind.AWGN_CLASSICAL, 1.0), stream_for(0))

    def test_noise_variance_matches_snr(self):
        rng = stream_for(3)
        symbols = bpsk_modulate(random_bits(rng, 200_000))
        sample = transmit(symbols, ChannelSpec(ChannelKind.AWGN_CLASSICAL, 2.0), rng)
        assert sample.noise_variance == pytest.approx(0.5)
        assert np.var(sample.received - symbols) == pytest.approx(0.5, rel=0.02)

    def test_ragged_fading_segments_rejected(self):
        spec = ChannelSpec(ChannelKind.RAYLEIGH_CLASSICAL, 1.0, segment_length=4)
        with pytest.raises(ParameterError):
            transmit(np.ones(10), spec, stream_for(4))

    def test_fading_held_per_segment(self):
        spec = ChannelSpec(ChannelKind.RAYLEIGH_CLASSICAL, 1.0, segment_length=4)
        sample = transmit(np.ones(16), spec, stream_for(5))
        gains = sample.gains.reshape(4, 4)
        assert np.all(gains == gains[:, :1])

    def test_rayleigh_unit_mean_square_gain(self):
        gains = rayleigh_gains(200_000, stream_for(6))
        assert np.mean(gains**2) == pytest.approx(1.0, rel=0.02)

    def test_same_stream_same_sample(self):
        spec = ChannelSpec(ChannelKind.AWGN_CLASSICAL, 1.0)
        first = transmit(np.ones(100), spec, stream_for(7, 1))
        second = transmit(np.ones(100), spec, stream_for(7, 1))
        np.testing.assert_array_equal(first.received, second.received)


class TestLlr:
    """Test the coherent-detection LLR."""

    def test_formula(self):
        sample = ChannelSample(
            transmitted=np.array([1.0, -1.0]),
            received=np.array([0.5, -0.25]),
            gains=np.array([1.0, 2.0]),
            noise_variance=0.5,
        )
        np.testing.assert_allclose(llr(sample), [2.0, -2.0])

    def test_zero_noise_rejected(self):
        sample = ChannelSample(
            transmitted=np.ones(2), received=np.ones(2), gains=np.ones(2), noise_variance=0.0
        )
        with pytest.raises(ParameterError):
            llr(sample)

    def test_non_positive_amplitude_rejected(self):
        sample = ChannelSample(
            transmitted=np.ones(2), received=np.ones(2), gains=np.ones(2), noise_variance=1.0
        )
        with pytest.raises(ParameterError):
            llr(sample, amplitude=0.0)

    def test_hard_decision_ber_matches_q_function(self):
        rng = stream_for(8)
        n = 200_000
        bits = random_bits(rng, n)
        sample = transmit(bpsk_modulate(bits), ChannelSpec(ChannelKind.AWGN_CLASSICAL, 1.0), rng)
        ber = np.mean(hard_decision(llr(sample)) != bits)
        expected = uncoded_ber(1.0)
        assert expected == pytest.approx(0.158655, abs=1e-5)
        assert abs(ber - expected) < 3 * math.sqrt(expected * (1 - expected) / n)

    def test_rayleigh_llr_uses_gain(self):
        rng = stream_for(9)
        spec = ChannelSpec(ChannelKind.RAYLEIGH_CLASSICAL, 4.0)
        sample = transmit(bpsk_modulate(np.zeros(50, dtype=np.uint8)), spec, rng)
        expected = 2.0 * sample.gains * sample.received / sample.noise_variance
        np.testing.assert_allclose(llr(sample), expected)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
