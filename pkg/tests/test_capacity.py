#!/usr/bin/env python3
"""
Test the BPSK (DCMC) capacity estimate and its rate-to-SNR inversion.

Usage:
    pytest tests/test_capacity.py -v
"""

import os
import sys

import numpy as np
import pytest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cvqkd.analytics.capacity import dcmc_capacity, solve_snr_for_rate
from cvqkd.core.constants import db_to_linear, linear_to_db
from cvqkd.core.errors import DomainError, SearchError


class TestDcmcCapacity:
    """Test capacity estimation."""

    def test_noiseless_limit(self):
        estimate = dcmc_capacity(float("inf"))
        assert (estimate.value, estimate.std_error) == (1.0, 0.0)

    def test_high_snr_approaches_one(self):
        assert dcmc_capacity(db_to_linear(15.0), 100_000).value == pytest.approx(1.0, abs=1e-6)

    def test_monotone_in_snr(self):
        values = [dcmc_capacity(db_to_linear(s), 200_000).value for s in np.linspace(-5, 10, 10)]
        assert np.all(np.diff(values) > 0)

    def test_below_shannon_bound(self):
        snr = db_to_linear(0.0)
        estimate = dcmc_capacity(snr, 200_000)
        assert estimate.value < 0.5 * np.log2(1.0 + snr)
        assert 0.0 < estimate.std_error < 1e-3

    def test_deterministic(self):
        assert dcmc_capacity(1.3, 10_000) == dcmc_capacity(1.3, 10_000)

    def test_domain(self):
        with pytest.raises(DomainError):
            dcmc_capacity(0.0)


class TestSolveSnrForRate:
    """Test the rate-to-SNR root search."""

    def test_half_rate(self):
        snr_db = linear_to_db(solve_snr_for_rate(0.5))
        assert snr_db == pytest.approx(0.187, abs=0.03)
        assert snr_db < 0.9

    def test_unbracketed(self):
        with pytest.raises(SearchError):
            solve_snr_for_rate(0.5, low_db=-10.0, high_db=-5.0, n_samples=20_000)

    def test_rate_domain(self):
        with pytest.raises(DomainError):
            solve_snr_for_rate(1.2)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
