#!/usr/bin/env python3
"""
Long Monte-Carlo acceptance runs: BLER thresholds at N = 10^4, system
equivalence and the Rayleigh floor at N = 1024, BF versus BP, coset pairing
over many trials and the IRCC EXIT tunnel.

These take from minutes to hours and are skipped by default.

Usage:
    CVQKD_RUN_SLOW=1 CVQKD_THREADS=8 pytest tests/test_acceptance.py -v
"""

import math
import os
import sys

import numpy as np
import pytest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cvqkd.analytics.skr import reconciliation_efficiency
from cvqkd.codes import IrccProfile, exit_inner, exit_outer, tunnel_is_open
from cvqkd.codes.codecs import build_codec
from cvqkd.codes.ircc import IrccCode, ircc_decode_trajectory
from cvqkd.core.config import CodecSpec, SweepConfig
from cvqkd.core.constants import REFERENCE_EFFICIENCIES, REFERENCE_THRESHOLDS_DB, db_to_linear
from cvqkd.core.models import SystemKind
from cvqkd.core.rng import TrialStreams, random_bits, stream_for
from cvqkd.harness import extract_threshold, run_bler_sweep
from cvqkd.systems.pipelines import SessionConfig, run_trial

pytestmark = [
    pytest.mark.slow,
    pytest.mark.skipif(os.getenv("CVQKD_RUN_SLOW") != "1", reason="set CVQKD_RUN_SLOW=1"),
]

LDPC_1024 = CodecSpec(kind="ldpc", block_length=1024)
WATERFALL_GRID = [1.0, 1.5, 2.0, 2.5, 3.0]


def _sweep(**settings):
    settings.setdefault("max_blocks", 20_000)
    return run_bler_sweep(SweepConfig(**settings))


def _within_3_sigma(row_a, row_b):
    variance = sum(
        row["bler"] * (1.0 - row["bler"]) / row["blocks_run"] for row in (row_a, row_b)
    )
    return abs(row_a["bler"] - row_b["bler"]) <= 3.0 * math.sqrt(variance) + 1e-12


class TestThresholds:
    """Test BLER = 0.1 thresholds of System D over the BI-AWGN channel."""

    @pytest.mark.parametrize(
        "kind, grid, tolerance",
        [
            ("ldpc", [0.9, 1.1, 1.3, 1.5, 1.7, 1.9], 0.3),
            ("cc", [3.6, 3.9, 4.2, 4.5, 4.8, 5.1], 0.5),
            ("ircc", [0.5, 0.7, 0.9, 1.1, 1.3], 0.3),
        ],
    )
    def test_threshold(self, kind, grid, tolerance):
        table = _sweep(
            system="D",
            codec_q=CodecSpec(kind=kind, block_length=10_000),
            snr_grid_db=grid,
            max_blocks=5_000,
        )
        threshold = extract_threshold(table, 0.1)
        assert threshold == pytest.approx(REFERENCE_THRESHOLDS_DB[kind], abs=tolerance)
        beta = reconciliation_efficiency(0.5, db_to_linear(threshold))
        reference = REFERENCE_THRESHOLDS_DB[kind]
        low = reconciliation_efficiency(0.5, db_to_linear(reference + tolerance))
        high = reconciliation_efficiency(0.5, db_to_linear(reference - tolerance))
        assert low <= beta <= high
        assert low <= REFERENCE_EFFICIENCIES[kind] <= high


class TestSystemEquivalence:
    """Test that Systems B, C and D match System A over a 3 dB AWGN link."""

    @pytest.fixture(scope="class")
    def reference(self):
        return _sweep(system="A", codec_q=LDPC_1024, snr_grid_db=WATERFALL_GRID)

    @pytest.mark.parametrize("system", ["B", "C", "D"])
    def test_protected_link(self, system, reference):
        table = _sweep(
            system=system,
            codec_q=LDPC_1024,
            snr_grid_db=WATERFALL_GRID,
            clc_kind="awgn",
            clc_snr_db=3.0,
        )
        for row_a, row_x in zip(reference.rows, table.rows):
            assert _within_3_sigma(row_a, row_x), (system, row_a["snr_db"])

    def test_unprotected_syndrome_is_worse(self, reference):
        table = _sweep(
            system="B",
            codec_q=LDPC_1024,
            snr_grid_db=WATERFALL_GRID,
            clc_kind="awgn",
            clc_snr_db=3.0,
            clc_protected=False,
            max_blocks=2_000,
        )
        waterfall = next(i for i, row in enumerate(reference.rows) if row["bler"] < 0.1)
        assert table.rows[waterfall]["bler"] >= 10.0 * reference.rows[waterfall]["bler"]

    @pytest.mark.parametrize("system", ["B", "C", "D"])
    def test_rayleigh_floor(self, system, reference):
        floored = _sweep(
            system=system,
            codec_q=LDPC_1024,
            snr_grid_db=[2.0, 3.0, 4.0, 5.0, 6.0],
            clc_kind="rayleigh",
            clc_snr_db=4.0,
        )
        # top 2 dB of the grid: 4 dB to 6 dB
        start, end = floored.column("bler")[[2, 4]]
        assert abs(end - start) / start < 0.2

        falling = _sweep(
            system=system,
            codec_q=LDPC_1024,
            snr_grid_db=WATERFALL_GRID,
            clc_kind="rayleigh",
            clc_snr_db=5.0,
        )
        bler = falling.column("bler")
        assert (bler[0] - bler[-1]) / bler[0] >= 0.2
        assert bler[-1] < floored.column("bler")[1]

        recovered = _sweep(
            system=system,
            codec_q=LDPC_1024,
            snr_grid_db=WATERFALL_GRID,
            clc_kind="rayleigh",
            clc_snr_db=6.0,
        )
        for row_a, row_x in zip(reference.rows, recovered.rows):
            assert _within_3_sigma(row_a, row_x), (system, row_a["snr_db"])


class TestDecoderOrdering:
    """Test that bit flipping trails belief propagation."""

    def test_bf_worse_than_bp(self):
        grid = [2.0, 3.0, 4.0]
        bp = _sweep(system="A", codec_q=LDPC_1024, snr_grid_db=grid, max_blocks=5_000)
        bf_spec = CodecSpec(kind="ldpc", block_length=1024, decoder="bf")
        bf = _sweep(system="A", codec_q=bf_spec, snr_grid_db=grid, max_blocks=5_000)
        assert np.all(bf.column("bler") > bp.column("bler"))


class TestCosetPairing:
    """Test System C against System A over many paired trials."""

    def test_paired_outcomes(self):
        cfg = SessionConfig(quc_snr=db_to_linear(1.6), fec_q=build_codec(LDPC_1024))
        for trial in range(1000):
            a = run_trial(SystemKind.A, cfg, TrialStreams.from_seed(21, 0, trial))
            c = run_trial(SystemKind.C, cfg, TrialStreams.from_seed(21, 0, trial))
            assert a.agree == c.agree, trial


class TestExitTunnel:
    """Test the IRCC EXIT tunnel at 0.9 dB."""

    def test_tunnel_and_trajectory(self):
        profile = IrccProfile.reference()
        inner = exit_inner(0.9)
        outer = exit_outer(profile)
        assert tunnel_is_open(inner, outer, upto=0.95)

        code = IrccCode(profile, 100_000)
        rng = stream_for(31)
        info = random_bits(rng, code.info_length)
        snr = db_to_linear(0.9)
        noise = rng.standard_normal(code.block_length) / math.sqrt(snr)
        received = (1.0 - 2.0 * code.encode(info)) + noise
        trajectory = ircc_decode_trajectory(2.0 * snr * received, code, code.outer_encode(info))
        inner_ia, inner_ie = [p.ia for p in inner], [p.ie for p in inner]
        outer_ia, outer_ie = [p.ia for p in outer], [p.ie for p in outer]
        for inner_step, outer_step in trajectory:
            assert inner_step.ie <= np.interp(inner_step.ia, inner_ia, inner_ie) + 0.02
            assert outer_step.ie <= np.interp(outer_step.ia, outer_ia, outer_ie) + 0.02


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
