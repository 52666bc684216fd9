"""
Reverse-reconciliation pipelines.

    System A  Bob discloses the syndrome s = H b over an ideal channel; Alice
              decodes her quantum-channel LLRs against s.
    System B  as A, but s crosses a noisy classical channel, FEC-protected or
              sent as raw BPSK.
    System C  Bob discloses the bit-difference vector db = b ^ c for a random
              codeword c; Alice flips her LLRs by db, decodes c with any codec
              and recovers b = c^ ^ db.
    System D  Bob sends codeword b over the quantum channel, Alice sends
              codeword c over the classical one; both keys are b ^ c.

Each trial draws from its own ``TrialStreams``: Bob's QRNG first draws b (or
k_B), then any further bits; Alice's QRNG is used by System D only. A and B
therefore see identical realizations when the classical link is error-free,
and A and C are paired by coset symmetry.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from cvqkd.codes.codecs import Codec, LdpcCodec, build_codec
from cvqkd.codes.ldpc import syndrome
from cvqkd.core.config import SweepConfig
from cvqkd.core.constants import IRCC_DEFAULT_INTERLEAVER_SEED, SUPPORTED_DIMENSIONS, db_to_linear
from cvqkd.core.errors import ParameterError, UnsupportedDimensionError
from cvqkd.core.models import (
    ClcKind,
    CodecDecision,
    DecodeOutcome,
    QucMode,
    SideInfoKind,
    SideInformation,
    SystemKind,
    TrialResult,
)
from cvqkd.core.rng import TrialStreams, random_bits
from cvqkd.systems.classical import ClassicalLink
from cvqkd.systems.quantum import quc_transmit

logger = logging.getLogger(__name__)


@dataclass
class SessionConfig:
    """Everything one reconciliation trial needs besides its random streams."""

    quc_snr: float  # linear, inf = noiseless
    fec_q: Codec
    fec_c: Optional[Codec] = None  # defaults to fec_q
    clc_snr: float = math.inf
    clc_kind: ClcKind = ClcKind.ERROR_FREE
    clc_protected: bool = True
    dimension: int = 8
    quc_mode: QucMode = QucMode.BI_AWGN
    interleaver_seed: int = IRCC_DEFAULT_INTERLEAVER_SEED
    link: ClassicalLink = field(init=False, repr=False)

    def __post_init__(self):
        if self.fec_c is None:
            self.fec_c = self.fec_q
        if self.dimension not in SUPPORTED_DIMENSIONS:
            raise UnsupportedDimensionError(self.dimension)
        if self.quc_mode is not QucMode.BI_AWGN and self.fec_q.block_length % self.dimension:
            raise ParameterError(
                f"block length {self.fec_q.block_length} not divisible by D={self.dimension}"
            )
        self.link = ClassicalLink(self.clc_kind, self.clc_snr, self.fec_c, self.clc_protected)

    @classmethod
    def from_sweep(cls, cfg: SweepConfig, snr_db: float) -> "SessionConfig":
        """Session for one grid point of a validated sweep."""
        return cls(
            quc_snr=db_to_linear(snr_db),
            fec_q=build_codec(cfg.codec_q),
            fec_c=build_codec(cfg.clc_codec),
            clc_snr=db_to_linear(cfg.clc_snr_db),
            clc_kind=ClcKind(cfg.clc_kind),
            clc_protected=cfg.clc_protected,
            dimension=cfg.dimension,
            quc_mode=QucMode(cfg.quc_mode),
            interleaver_seed=cfg.codec_q.interleaver_seed,
        )

    @property
    def block_length(self) -> int:
        return self.fec_q.block_length

    def quantum_llr(self, bits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        return quc_transmit(
            bits, self.quc_snr, rng, self.quc_mode, self.dimension, self.interleaver_seed
        )


def _syndrome_codec(cfg: SessionConfig) -> LdpcCodec:
    if not isinstance(cfg.fec_q, LdpcCodec):
        raise ParameterError(
            f"syndrome-based reconciliation needs an LDPC codec, got '{cfg.fec_q.name}'"
        )
    return cfg.fec_q


def alice_syndrome_decode(
    llr: np.ndarray, codec: LdpcCodec, target: np.ndarray
) -> DecodeOutcome:
    """Alice's decoder step of Systems A/B: find b^ with H b^ = target."""
    return codec.decode_with_syndrome(llr, target)


def alice_difference_decode(
    llr: np.ndarray, codec: Codec, difference: np.ndarray
) -> Tuple[np.ndarray, CodecDecision]:
    """
    Alice's decoder step of System C.

    Flipping LLR j wherever difference[j] = 1 turns her view of b into a noisy
    codeword; the decoded codeword XOR the difference is her key.
    """
    flipped = np.where(difference == 1, -llr, llr)
    decision = codec.decode(flipped)
    return decision.codeword ^ difference, decision


def codeword_keys(
    b: np.ndarray, b_hat: np.ndarray, c: np.ndarray, c_hat: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """System D keys: Alice holds b^ ^ c, Bob holds b ^ c^."""
    return b_hat ^ c, b ^ c_hat


def _syndrome_trial(
    cfg: SessionConfig, streams: TrialStreams, link: Optional[ClassicalLink]
) -> TrialResult:
    codec = _syndrome_codec(cfg)
    b = random_bits(streams.bob, codec.block_length)
    s = syndrome(b, codec.H)
    llr = cfg.quantum_llr(b, streams.quantum)
    if link is None:
        s_hat, clc_ok = s, True
    else:
        s_hat, clc_ok = link.send(s, streams.classical)
    outcome = alice_syndrome_decode(llr, codec, s_hat)
    return TrialResult(
        key_alice=outcome.bits,
        key_bob=b,
        agree=bool(np.array_equal(outcome.bits, b)),
        quc_decode_ok=outcome.converged,
        clc_decode_ok=clc_ok,
        side_information=SideInformation(SideInfoKind.SYNDROME, s),
    )


def run_system_a(cfg: SessionConfig, streams: TrialStreams) -> TrialResult:
    """Ideal syndrome-based reconciliation (classical channel assumed perfect)."""
    return _syndrome_trial(cfg, streams, link=None)


def run_system_b(cfg: SessionConfig, streams: TrialStreams) -> TrialResult:
    """Syndrome-based reconciliation with the syndrome sent over the classical link."""
    return _syndrome_trial(cfg, streams, link=cfg.link)


def run_system_c(cfg: SessionConfig, streams: TrialStreams) -> TrialResult:
    """Bit-difference-vector reconciliation; works with any codec."""
    codec = cfg.fec_q
    b = random_bits(streams.bob, codec.block_length)
    k_b = random_bits(streams.bob, codec.info_length)
    c = codec.encode(k_b)
    difference = b ^ c
    llr = cfg.quantum_llr(b, streams.quantum)
    difference_hat, clc_ok = cfg.link.send(difference, streams.classical)

    key_alice, decision = alice_difference_decode(llr, codec, difference_hat)
    return TrialResult(
        key_alice=key_alice,
        key_bob=b,
        agree=bool(np.array_equal(key_alice, b)),
        quc_decode_ok=bool(np.array_equal(decision.codeword, c)),
        clc_decode_ok=clc_ok,
        side_information=SideInformation(SideInfoKind.BIT_DIFFERENCE, difference),
    )


def run_system_d(cfg: SessionConfig, streams: TrialStreams) -> TrialResult:
    """Codeword-based reconciliation; both keys are the modulo-2 sum of the codewords."""
    if cfg.fec_c.block_length != cfg.fec_q.block_length:
        raise ParameterError("System D needs equal codeword lengths on both channels")
    b = cfg.fec_q.encode(random_bits(streams.bob, cfg.fec_q.info_length))
    c = cfg.fec_c.encode(random_bits(streams.alice, cfg.fec_c.info_length))

    b_hat = cfg.fec_q.decode(cfg.quantum_llr(b, streams.quantum)).codeword
    c_hat, clc_ok = cfg.link.send_codeword(c, streams.classical)

    key_alice, key_bob = codeword_keys(b, b_hat, c, c_hat)
    return TrialResult(
        key_alice=key_alice,
        key_bob=key_bob,
        agree=bool(np.array_equal(key_alice, key_bob)),
        quc_decode_ok=bool(np.array_equal(b_hat, b)),
        clc_decode_ok=clc_ok,
        side_information=SideInformation(SideInfoKind.CODEWORD, c),
    )


SYSTEMS: Dict[SystemKind, Callable[[SessionConfig, TrialStreams], TrialResult]] = {
    SystemKind.A: run_system_a,
    SystemKind.B: run_system_b,
    SystemKind.C: run_system_c,
    SystemKind.D: run_system_d,
}


def run_trial(system: SystemKind, cfg: SessionConfig, streams: TrialStreams) -> TrialResult:
    """Dispatch one trial to its system pipeline."""
    return SYSTEMS[system](cfg, streams)
