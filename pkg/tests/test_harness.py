#!/usr/bin/env python3
"""
Test the experiment harness: BLER sweeps and their stop rule, threshold
extraction, SKR sweeps and table emission.

Usage:
    pytest tests/test_harness.py -v
"""

import json
import math
import os
import sys

import numpy as np
import pytest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cvqkd.analytics.skr import reconciliation_efficiency
from cvqkd.core.config import CodecSpec, SkrParameters, SweepConfig
from cvqkd.core.constants import BLER_COLUMNS, SKR_COLUMNS, db_to_linear
from cvqkd.core.errors import ParameterError, ThresholdNotBracketedError
from cvqkd.core.models import SweepTable
from cvqkd.core.rng import stream_for
from cvqkd.harness import (
    binomial_ci95,
    collect_block_errors,
    distance_grid,
    emit,
    extract_threshold,
    load_json,
    run_bler_sweep,
    run_skr_sweep,
    to_csv,
    to_json,
)


def _small_sweep(**overrides):
    settings = {
        "system": "C",
        "codec_q": CodecSpec(kind="cc", block_length=128),
        "snr_grid_db": [0.0, 6.0],
        "min_block_errors": 5,
        "max_blocks": 64,
        "batch_size": 8,
        "master_seed": 3,
        "threads": 1,
    }
    settings.update(overrides)
    return SweepConfig(**settings)


def _without_seconds(table):
    return [{k: v for k, v in row.items() if k != "seconds"} for row in table.rows]


def _bler_table(snr, bler):
    rows = [{"snr_db": s, "bler": b} for s, b in zip(snr, bler)]
    return SweepTable(columns=("snr_db", "bler"), rows=rows)


class TestBinomialInterval:
    """Test the BLER confidence half-width."""

    def test_values(self):
        assert binomial_ci95(100, 1000) == pytest.approx(1.959964 * math.sqrt(0.09 / 1000))
        assert math.isinf(binomial_ci95(0, 0))

    def test_zero_errors_keeps_width(self):
        # 1 - 0.025 ** (1 / n), close to 3.69 / n
        assert binomial_ci95(0, 1000) == pytest.approx(1.0 - 0.025 ** (1.0 / 1000), rel=1e-9)
        assert binomial_ci95(0, 1000) == pytest.approx(3.69e-3, rel=1e-2)
        assert binomial_ci95(1000, 1000) == pytest.approx(binomial_ci95(0, 1000))
        assert binomial_ci95(0, 4000) < binomial_ci95(0, 1000)

    def test_shrinks_with_trials(self):
        assert binomial_ci95(400, 4000) == pytest.approx(binomial_ci95(100, 1000) / 2)

    @pytest.mark.parametrize("p", [0.1, 0.02])
    def test_coverage_under_stop_rule(self, p):
        experiments = 2000
        covered = 0
        for experiment in range(experiments):
            rng = stream_for(90, experiment)

            def draw(batch):
                return [(int(err), 0) for err in rng.random(len(batch)) < p]

            blocks, errors, _ = collect_block_errors(
                draw, min_block_errors=100, max_blocks=10**6, batch_size=128
            )
            covered += abs(errors / blocks - p) <= binomial_ci95(errors, blocks)
        assert covered / experiments >= 0.93


class TestStopRule:
    """Test the batch loop behind every sweep point."""

    def test_stops_after_batch_reaching_min_errors(self):
        def draw(batch):
            return [(1, 3)] * len(batch)

        blocks, errors, bits = collect_block_errors(draw, 10, max_blocks=1000, batch_size=8)
        assert (blocks, errors, bits) == (16, 16, 48)

    def test_caps_at_max_blocks(self):
        seen = []

        def draw(batch):
            seen.append(batch)
            return [(0, 0)] * len(batch)

        blocks, errors, _ = collect_block_errors(draw, 5, max_blocks=20, batch_size=8)
        assert (blocks, errors) == (20, 0)
        assert [len(batch) for batch in seen] == [8, 8, 4]
        assert seen[-1].stop == 20


class TestBlerSweep:
    """Test the Monte-Carlo BLER sweep."""

    @pytest.fixture(scope="class")
    def table(self):
        return run_bler_sweep(_small_sweep())

    def test_schema(self, table):
        assert table.columns == BLER_COLUMNS
        assert [row["snr_db"] for row in table.rows] == [0.0, 6.0]
        assert table.metadata["master_seed"] == 3
        assert table.metadata["stop_rule"] == {"min_block_errors": 5, "max_blocks": 64}

    def test_stop_rule(self, table):
        noisy, clean = table.rows
        assert noisy["block_errors"] >= 5
        assert noisy["blocks_run"] % 8 == 0
        assert noisy["blocks_run"] < 64
        assert clean["blocks_run"] == 64
        assert table.metadata["capped_snr_db"] == [6.0]

    def test_rates(self, table):
        for row in table.rows:
            assert row["bler"] == row["block_errors"] / row["blocks_run"]
            assert 0.0 <= row["ber"] <= row["bler"]
            assert row["bler_ci95"] == pytest.approx(
                binomial_ci95(row["block_errors"], row["blocks_run"])
            )
        assert table.rows[0]["bler"] > table.rows[1]["bler"]

    def test_reproducible(self, table):
        again = run_bler_sweep(_small_sweep())
        assert _without_seconds(again) == _without_seconds(table)

    def test_thread_count_invariant(self, table):
        threaded = run_bler_sweep(_small_sweep(threads=2))
        assert _without_seconds(threaded) == _without_seconds(table)

    def test_seed_changes_outcome(self, table):
        other = run_bler_sweep(_small_sweep(master_seed=4, snr_grid_db=[0.0]))
        assert _without_seconds(other)[0] != _without_seconds(table)[0]


class TestThresholdExtraction:
    """Test BLER threshold interpolation."""

    def test_power_law(self):
        snr = [0.0, 1.0, 2.0, 3.0]
        table = _bler_table(snr, [10 ** (-0.8 * s) for s in snr])
        assert extract_threshold(table, 0.1) == pytest.approx(1.25, abs=1e-9)

    def test_exact_grid_point(self):
        table = _bler_table([0.0, 1.0, 2.0], [0.5, 0.1, 0.01])
        assert extract_threshold(table, 0.1) == 1.0

    def test_zero_tail_skipped(self):
        table = _bler_table([0.0, 1.0, 2.0], [0.5, 0.0, 0.0])
        with pytest.raises(ThresholdNotBracketedError) as info:
            extract_threshold(table, 0.1)
        assert info.value.details["target"] == 0.1
        assert info.value.to_dict()["bler_range"] == [0.0, 0.5]

    def test_not_bracketed(self):
        table = _bler_table([0.0, 1.0], [0.9, 0.5])
        with pytest.raises(ThresholdNotBracketedError):
            extract_threshold(table, 0.1)

    def test_target_domain(self):
        with pytest.raises(ParameterError):
            extract_threshold(_bler_table([0.0], [0.5]), 1.5)


class TestSkrSweep:
    """Test operating-point selection for the SKR sweep."""

    def test_from_beta(self):
        table = run_skr_sweep(SkrParameters(), distance_grid(60, 0.5), beta=0.8641, P_B=0.1)
        assert table.columns == SKR_COLUMNS
        assert table.metadata["beta"] == pytest.approx(0.8641)
        assert table.metadata["max_secure_distance_km"] == pytest.approx(35.0, abs=2.0)

    def test_from_snr(self):
        table = run_skr_sweep(SkrParameters(), distance_grid(10, 1.0), snr_db=1.31)
        assert table.metadata["beta"] == pytest.approx(0.8104, abs=5e-4)

    def test_from_bler_table(self):
        table = _bler_table([0.5, 1.0], [0.2, 0.05])
        skr_table = run_skr_sweep(SkrParameters(), distance_grid(60, 0.5), bler_table=table)
        assert skr_table.metadata["P_B"] == 0.1
        assert skr_table.metadata["snr_db"] == pytest.approx(0.75)

    def test_rate_from_table_codec(self):
        cc = CodecSpec(kind="cc", block_length=10_000)
        table = _bler_table([0.5, 1.0], [0.2, 0.05])
        table.metadata["config"] = {"codec_q": cc.model_dump(mode="json")}
        skr_table = run_skr_sweep(SkrParameters(), distance_grid(10, 1.0), bler_table=table)
        assert skr_table.metadata["R"] == pytest.approx(0.4994)
        assert skr_table.metadata["beta"] == pytest.approx(
            reconciliation_efficiency(0.4994, db_to_linear(0.75))
        )

    def test_rate_from_table_metadata(self):
        table = _bler_table([0.5, 1.0], [0.2, 0.05])
        table.metadata["rate"] = 0.45
        skr_table = run_skr_sweep(SkrParameters(), distance_grid(10, 1.0), bler_table=table)
        assert skr_table.metadata["R"] == 0.45

    def test_explicit_rate_wins(self):
        table = _bler_table([0.5, 1.0], [0.2, 0.05])
        table.metadata["rate"] = 0.45
        explicit = run_skr_sweep(SkrParameters(), distance_grid(10, 1.0), bler_table=table, R=0.4)
        assert explicit.metadata["R"] == 0.4
        from_params = run_skr_sweep(SkrParameters(R=0.3), distance_grid(10, 1.0), bler_table=table)
        assert from_params.metadata["R"] == 0.3

    def test_sweep_records_codec_rate(self):
        table = run_bler_sweep(_small_sweep(snr_grid_db=[6.0], max_blocks=8))
        assert table.metadata["rate"] == pytest.approx(CodecSpec(kind="cc", block_length=128).rate)

    def test_short_grid_has_no_crossing(self):
        table = run_skr_sweep(SkrParameters(), distance_grid(5, 1.0), beta=0.8641, P_B=0.1)
        assert table.metadata["max_secure_distance_km"] is None

    def test_needs_operating_point(self):
        with pytest.raises(ParameterError):
            run_skr_sweep(SkrParameters(), distance_grid(5, 1.0))

    def test_distance_grid(self):
        np.testing.assert_array_equal(distance_grid(2.0, 0.5), [0.0, 0.5, 1.0, 1.5, 2.0])
        with pytest.raises(ParameterError):
            distance_grid(10.0, 0.0)


class TestEmit:
    """Test CSV and JSON output."""

    @pytest.fixture
    def table(self):
        return SweepTable(
            columns=("snr_db", "bler"),
            rows=[{"snr_db": 0.5, "bler": 0.25}, {"snr_db": 1.0, "bler": 0.1}],
            metadata={"config": {"system": "D"}, "master_seed": 7},
        )

    def test_csv_layout(self, table):
        lines = to_csv(table).splitlines()
        assert lines[0] == '# config: {"system": "D"}'
        assert lines[1] == "# seed: 7"
        assert lines[2] == "snr_db,bler"
        assert lines[3] == "0.5,0.25"
        assert len(lines) == 4

    def test_json_round_trip(self, table, tmp_path):
        path = tmp_path / "table.json"
        emit(table, "json", str(path))
        loaded = load_json(str(path))
        assert loaded.columns == table.columns
        assert loaded.rows == table.rows
        assert loaded.metadata == table.metadata

    def test_byte_identical(self, table, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        emit(table, "csv", str(first))
        emit(table, "csv", str(second))
        assert first.read_bytes() == second.read_bytes()

    def test_stdout(self, table, capsys):
        emit(table, "json")
        assert json.loads(capsys.readouterr().out) == json.loads(to_json(table))

    def test_rejects_empty_and_unknown(self, table):
        with pytest.raises(ParameterError):
            emit(SweepTable(columns=("snr_db",)), "csv")
        with pytest.raises(ParameterError):
            emit(table, "xml")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
