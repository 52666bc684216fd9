"""
Reconciliation systems A-D and the channels they run over.
"""

from cvqkd.codes.interleaver import deinterleave, interleave
from cvqkd.systems.classical import ClassicalLink
from cvqkd.systems.pipelines import (
    SYSTEMS,
    SessionConfig,
    alice_syndrome_decode,
    run_system_a,
    run_system_b,
    run_system_c,
    run_system_d,
    run_trial,
)
from cvqkd.systems.quantum import quc_transmit

__all__ = [
    "SessionConfig",
    "ClassicalLink",
    "quc_transmit",
    "interleave",
    "deinterleave",
    "alice_syndrome_decode",
    "run_system_a",
    "run_system_b",
    "run_system_c",
    "run_system_d",
    "run_trial",
    "SYSTEMS",
]
