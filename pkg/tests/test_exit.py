#!/usr/bin/env python3
"""
Test mutual-information estimation and EXIT-chart measurement.

Usage:
    pytest tests/test_exit.py -v
"""

import math
import os
import sys

import numpy as np
import pytest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cvqkd.codes.exit import (
    component_exit_curve,
    default_grid,
    exit_inner,
    exit_outer,
    tunnel_is_open,
)
from cvqkd.codes.ircc import IrccProfile
from cvqkd.codes.mutual_info import (
    apriori_llrs,
    j_function,
    j_inverse,
    mi_estimate,
    mi_estimate_detail,
)
from cvqkd.core.errors import ParameterError
from cvqkd.core.models import ExitPoint
from cvqkd.core.rng import random_bits, stream_for

SAMPLES = 20_000


class TestJFunction:
    """Test the J-function approximation and its inverse."""

    def test_endpoints(self):
        assert j_function(0.0) == 0.0
        assert j_function(12.0) == 1.0

    def test_value_at_two(self):
        assert j_function(2.0) == pytest.approx(0.486, abs=0.002)

    def test_inverse_round_trip(self):
        for mi in (0.05, 0.2, 0.3646, 0.5, 0.8, 0.95):
            assert j_function(j_inverse(mi)) == pytest.approx(mi, abs=3e-3)

    def test_vectorized(self):
        values = j_function(np.array([0.5, 1.0, 3.0]))
        assert values.shape == (3,)
        assert np.all(np.diff(values) > 0)

    def test_domain(self):
        with pytest.raises(ParameterError):
            j_function(-1.0)
        with pytest.raises(ParameterError):
            j_inverse(1.5)


class TestMiEstimate:
    """Test the MI estimators."""

    def test_zero_llrs(self):
        bits = random_bits(stream_for(51), SAMPLES)
        assert mi_estimate(np.zeros(SAMPLES), bits) == pytest.approx(0.0, abs=1e-9)

    def test_perfect_llrs(self):
        bits = random_bits(stream_for(52), SAMPLES)
        llrs = 50.0 * (1.0 - 2.0 * bits)
        assert mi_estimate(llrs, bits) == pytest.approx(1.0, abs=1e-3)
        assert mi_estimate(llrs, bits, "time-average") == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("method, tolerance", [("histogram", 0.015), ("time-average", 0.005)])
    def test_consistent_gaussian(self, method, tolerance):
        rng = stream_for(53)
        bits = random_bits(rng, 200_000)
        llrs = 2.0 * (1.0 - 2.0 * bits) + 2.0 * rng.standard_normal(bits.size)
        assert mi_estimate(llrs, bits, method) == pytest.approx(j_function(2.0), abs=tolerance)

    def test_apriori_llrs_carry_requested_information(self):
        rng = stream_for(54)
        bits = random_bits(rng, 100_000)
        for ia in (0.2, 0.5, 0.9):
            measured = mi_estimate(apriori_llrs(bits, ia, rng), bits, "time-average")
            assert measured == pytest.approx(ia, abs=0.01)

    def test_apriori_extremes(self):
        bits = np.array([0, 1, 1], dtype=np.uint8)
        assert apriori_llrs(bits, 1.0, stream_for(55)).tolist() == [50.0, -50.0, -50.0]
        assert not apriori_llrs(bits, 0.0, stream_for(55)).any()

    def test_low_sample_flag(self):
        bits = random_bits(stream_for(56), 100)
        assert mi_estimate_detail(np.zeros(100), bits).low_sample
        truth = random_bits(stream_for(56), SAMPLES)
        assert not mi_estimate_detail(np.zeros(SAMPLES), truth).low_sample

    def test_input_validation(self):
        with pytest.raises(ParameterError):
            mi_estimate(np.zeros(3), np.zeros(4, dtype=np.uint8))
        with pytest.raises(ParameterError):
            mi_estimate(np.zeros(3), np.zeros(3, dtype=np.uint8), "kde")


class TestExitCurves:
    """Test measured EXIT curves and the tunnel test."""

    def test_default_grid(self):
        grid = default_grid()
        assert len(grid) == 21
        assert grid[0] == 0.0 and grid[-1] == 1.0

    def test_inner_curve_shape(self):
        curve = exit_inner(0.9, [0.0, 0.25, 0.5, 0.75, 1.0], SAMPLES, seed=1)
        ie = [point.ie for point in curve]
        assert ie[-1] == pytest.approx(1.0, abs=0.01)
        assert ie[-1] > ie[0] > 0.0
        assert all(b >= a - 0.01 for a, b in zip(ie, ie[1:]))

    def test_inner_curve_rises_with_snr(self):
        low = exit_inner(-2.0, [0.5], SAMPLES, seed=2)[0].ie
        high = exit_inner(2.0, [0.5], SAMPLES, seed=2)[0].ie
        assert high > low

    def test_grid_validation(self):
        with pytest.raises(ParameterError):
            exit_inner(0.9, [0.5, 1.2], SAMPLES)
        with pytest.raises(ParameterError):
            exit_inner(0.9, [], SAMPLES)

    def test_single_component_aggregate(self):
        grid = [0.0, 0.5, 1.0]
        aggregate = exit_outer(IrccProfile.single(0.5), grid, SAMPLES, seed=3)
        single = component_exit_curve(0.5, grid, SAMPLES, seed=3)
        for a, b in zip(aggregate, single):
            assert a.ie == pytest.approx(min(max(b.ie, 0.0), 1.0), abs=1e-12)

    def test_outer_curve_endpoints(self):
        curve = component_exit_curve(0.5, [0.0, 1.0], SAMPLES, seed=4)
        assert curve[0].ie == pytest.approx(0.0, abs=0.02)
        assert curve[1].ie == pytest.approx(1.0, abs=0.01)

    def test_tunnel_closes_at_low_snr(self):
        grid = default_grid(0.1)
        inner = exit_inner(-3.0, grid, SAMPLES, seed=5)
        outer = exit_outer(IrccProfile.reference(), grid, SAMPLES, seed=5)
        assert not tunnel_is_open(inner, outer)

    def test_tunnel_on_synthetic_curves(self):
        grid = np.linspace(0.0, 1.0, 21)
        outer = [ExitPoint(x, x**2) for x in grid]
        wide = [ExitPoint(x, 0.5 + 0.5 * x) for x in grid]
        narrow = [ExitPoint(x, 0.3 + 0.3 * x) for x in grid]
        assert tunnel_is_open(wide, outer)
        assert not tunnel_is_open(narrow, outer)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
