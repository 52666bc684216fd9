"""
Monte-Carlo experiment driver and result serialization.
"""

from cvqkd.harness.emit import emit, load_json, to_csv, to_json
from cvqkd.harness.sweep import (
    binomial_ci95,
    collect_block_errors,
    distance_grid,
    extract_threshold,
    run_bler_sweep,
    run_skr_sweep,
)

__all__ = [
    "run_bler_sweep",
    "run_skr_sweep",
    "extract_threshold",
    "binomial_ci95",
    "collect_block_errors",
    "distance_grid",
    "emit",
    "to_csv",
    "to_json",
    "load_json",
]
