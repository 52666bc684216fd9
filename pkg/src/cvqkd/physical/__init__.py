"""
Physical layer: channel models and the multidimensional mapping.
"""

from cvqkd.physical.channels import (
    bpsk_modulate,
    hard_decision,
    llr,
    q_function,
    rayleigh_gains,
    soft_observation,
    transmit,
    uncoded_ber,
)
from cvqkd.physical.multidim import (
    apply_mapping,
    batch_mapping,
    compute_mapping,
    decoder_input,
    equivalent_snr,
    normalize,
    orthogonal_family,
    spherical_map,
    virtual_channel,
)

__all__ = [
    "transmit",
    "llr",
    "soft_observation",
    "bpsk_modulate",
    "hard_decision",
    "rayleigh_gains",
    "q_function",
    "uncoded_ber",
    "orthogonal_family",
    "normalize",
    "spherical_map",
    "compute_mapping",
    "batch_mapping",
    "apply_mapping",
    "decoder_input",
    "equivalent_snr",
    "virtual_channel",
]
