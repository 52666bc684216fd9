"""
Counter-based random streams.

Every Monte-Carlo trial owns a private set of Philox generators derived from
``SeedSequence(master_seed, spawn_key=(snr_index, trial_index))``. The role
streams are spawned in a fixed order so that two pipelines that consume the
same roles see identical realizations (System A vs System B with an
error-free classical channel, System A vs System C under coset pairing).
"""

from dataclasses import dataclass

import numpy as np


def philox_stream(seed_sequence: np.random.SeedSequence) -> np.random.Generator:
    """Wrap a seed sequence in a counter-based Philox generator."""
    return np.random.Generator(np.random.Philox(seed_sequence))


def stream_for(master_seed: int, *indices: int) -> np.random.Generator:
    """
    Derive a reproducible generator keyed on ``(master_seed, *indices)``.

    Args:
        master_seed: Session seed
        indices: Stream coordinates, e.g. (snr_index, trial_index)

    Returns:
        Independent Philox generator
    """
    return philox_stream(np.random.SeedSequence(master_seed, spawn_key=tuple(indices)))


@dataclass
class TrialStreams:
    """Role-separated generators for one reconciliation trial."""

    bob: np.random.Generator  # Bob's QRNG: reference key b, k_B
    alice: np.random.Generator  # Alice's QRNG: k_A (System D)
    quantum: np.random.Generator  # quantum channel: x, n, fading
    classical: np.random.Generator  # classical channel noise and fading

    @classmethod
    def from_seed(cls, master_seed: int, *indices: int) -> "TrialStreams":
        """Spawn the four role streams in their documented order."""
        parent = np.random.SeedSequence(master_seed, spawn_key=tuple(indices))
        bob, alice, quantum, classical = parent.spawn(4)
        return cls(
            bob=philox_stream(bob),
            alice=philox_stream(alice),
            quantum=philox_stream(quantum),
            classical=philox_stream(classical),
        )


def random_bits(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform bits from a QRNG-modelled source."""
    return rng.integers(0, 2, size=n, dtype=np.uint8)
