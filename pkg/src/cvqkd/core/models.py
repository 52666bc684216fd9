"""
Data models for the reconciliation simulator.

Defines the typed records exchanged between the physical layer, the codes,
the reconciliation pipelines and the Monte-Carlo harness. Bit blocks are
``numpy.uint8`` arrays and LLR blocks are ``numpy.float64`` arrays; positive
LLR means bit 0 (symbol +a).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from cvqkd.core.errors import ParameterError


class ChannelKind(Enum):
    """Channel models."""

    BI_AWGN_QUANTUM = "bi-awgn"
    AWGN_CLASSICAL = "awgn"
    RAYLEIGH_CLASSICAL = "rayleigh"


class ClcKind(Enum):
    """Classical channel quality classes used by the pipelines."""

    ERROR_FREE = "error-free"
    AWGN = "awgn"
    RAYLEIGH = "rayleigh"


class QucMode(Enum):
    """How the quantum channel is simulated."""

    FULL_CHAIN = "full-chain"  # Gaussian draws, normalization, mapping function
    FADED = "faded"  # exact statistical equivalent of the full chain
    BI_AWGN = "bi-awgn"  # idealized equivalent BI-AWGN channel


class SystemKind(Enum):
    """Reconciliation schemes."""

    A = "A"  # ideal syndrome
    B = "B"  # protected syndrome
    C = "C"  # bit-difference vector
    D = "D"  # two codewords, modulo-2 key


class SideInfoKind(Enum):
    SYNDROME = "syndrome"
    BIT_DIFFERENCE = "bit-difference"
    CODEWORD = "codeword"


@dataclass(frozen=True)
class ChannelSpec:
    """Channel configuration; snr is linear, sigma^2 = a^2 / snr."""

    kind: ChannelKind
    snr: float
    segment_length: int = 1  # fading held constant per segment

    def __post_init__(self):
        if not self.snr > 0:
            raise ParameterError(f"SNR must be positive, got {self.snr}")
        if self.segment_length < 1:
            raise ParameterError(
                f"segment_length must be positive, got {self.segment_length}"
            )

    @property
    def is_faded(self) -> bool:
        return self.kind is ChannelKind.RAYLEIGH_CLASSICAL


@dataclass
class ChannelSample:
    """One block of channel uses."""

    transmitted: np.ndarray  # antipodal symbols
    received: np.ndarray
    gains: np.ndarray  # per-symbol fading magnitude, ones for AWGN
    noise_variance: float  # per real dimension; 0 for noiseless draws

    def __post_init__(self):
        n = len(self.transmitted)
        if len(self.received) != n or len(self.gains) != n:
            raise ParameterError(
                "transmitted, received and gains must have equal lengths"
            )
        if self.noise_variance < 0:
            raise ParameterError("noise_variance must be non-negative")

    def __len__(self) -> int:
        return len(self.transmitted)


@dataclass
class Segment:
    """A D-dimensional block of Gaussian samples and its polar split."""

    raw: np.ndarray
    norm: float
    unit: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.raw)


@dataclass(frozen=True)
class OrthogonalFamily:
    """D signed-permutation matrices A_1 = I, ..., A_D with {A_d v} orthonormal."""

    dimension: int
    matrices: np.ndarray  # shape (D, D, D)

    def __iter__(self):
        return iter(self.matrices)


@dataclass
class MappingFunction:
    """Orthogonal M with M . y' = u, and its coordinates alpha."""

    dimension: int
    alpha: np.ndarray
    matrix: np.ndarray


@dataclass
class DecodeOutcome:
    """Result of a parity-check decoder run."""

    bits: np.ndarray
    converged: bool
    iterations_used: int

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "bits": self.bits.tolist(),
            "converged": self.converged,
            "iterations_used": self.iterations_used,
        }


@dataclass
class CodecDecision:
    """Codec-agnostic decode result (info and re-encoded codeword)."""

    info: np.ndarray
    codeword: np.ndarray
    converged: bool = True


@dataclass(frozen=True)
class ExitPoint:
    """One (I_A, I_E) pair of an EXIT curve or trajectory."""

    ia: float
    ie: float

    def __post_init__(self):
        for name, value in (("ia", self.ia), ("ie", self.ie)):
            if not -1e-9 <= value <= 1.0 + 1e-9:
                raise ParameterError(f"{name} must be in [0, 1], got {value}")

    def to_dict(self) -> Dict[str, float]:
        return {"ia": self.ia, "ie": self.ie}


@dataclass
class SideInformation:
    """What Bob (or Alice) disclosed over the classical channel."""

    kind: SideInfoKind
    payload: np.ndarray


@dataclass
class TrialResult:
    """Key-agreement outcome of one reconciliation block."""

    key_alice: np.ndarray
    key_bob: np.ndarray
    agree: bool
    quc_decode_ok: bool
    clc_decode_ok: bool
    side_information: Optional[SideInformation] = None

    @property
    def bit_errors(self) -> int:
        return int(np.count_nonzero(self.key_alice != self.key_bob))

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "agree": self.agree,
            "quc_decode_ok": self.quc_decode_ok,
            "clc_decode_ok": self.clc_decode_ok,
            "bit_errors": self.bit_errors,
            "key_length": int(len(self.key_bob)),
        }


@dataclass(frozen=True)
class CovarianceSummary:
    """Two-mode covariance entries and symplectic eigenvalues."""

    a: float
    b: float
    c: float
    delta: float
    dee: float
    nu1: float
    nu2: float
    nu3: float

    def to_dict(self) -> Dict[str, float]:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "delta": self.delta,
            "dee": self.dee,
            "nu1": self.nu1,
            "nu2": self.nu2,
            "nu3": self.nu3,
        }


@dataclass(frozen=True)
class CapacityEstimate:
    """Monte-Carlo capacity value with its standard error."""

    value: float
    std_error: float


@dataclass
class SweepTable:
    """
    Tabular experiment output.

    The column tuple fixes CSV order; rows are dicts keyed by column name;
    metadata records config, seed and stop rule for the output header.
    """

    columns: Tuple[str, ...]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        """Return one column as an array."""
        return np.array([row[name] for row in self.rows])

    def __len__(self) -> int:
        return len(self.rows)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "metadata": self.metadata,
            "columns": list(self.columns),
            "rows": [{name: row[name] for name in self.columns} for row in self.rows],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepTable":
        """Create from dictionary."""
        return cls(
            columns=tuple(data["columns"]),
            rows=[dict(row) for row in data.get("rows", [])],
            metadata=dict(data.get("metadata", {})),
        )
