"""
Uniform codec interface over the LDPC, CC and IRCC families.

The reconciliation pipelines only see ``Codec``: encode K info bits into the
N transmitted bits and decode N channel LLRs back to info and codeword.
Syndrome-target decoding is an LDPC-only extension.
"""

import logging
from functools import lru_cache
from pathlib import Path
from typing import Optional, Protocol, runtime_checkable

import numpy as np

from cvqkd.codes.conv import ConvCode, cc_decode, cc_encode
from cvqkd.codes.ircc import IrccCode, IrccProfile
from cvqkd.codes.ldpc import (
    ParityCheckMatrix,
    construct_regular,
    decode_bf,
    decode_bp,
    load_alist,
)
from cvqkd.core.config import CodecSpec
from cvqkd.core.errors import EncodingSetupError
from cvqkd.core.models import CodecDecision, DecodeOutcome

logger = logging.getLogger(__name__)

# Construction seeds tried before a rank-deficient PEG matrix is given up on
_ENCODER_SEED_ATTEMPTS = 16


@runtime_checkable
class Codec(Protocol):
    """Forward error correction as used by the reconciliation systems."""

    name: str

    @property
    def block_length(self) -> int: ...

    @property
    def info_length(self) -> int: ...

    def encode(self, info: np.ndarray) -> np.ndarray: ...

    def decode(self, llr: np.ndarray) -> CodecDecision: ...


class LdpcCodec:
    """LDPC codec with BP or BF decoding and syndrome-target support."""

    name = "ldpc"

    def __init__(self, H: ParityCheckMatrix, decoder: str = "bp", max_iter: int = 50):
        self.H = H
        self.decoder = decoder
        self.max_iter = max_iter

    @property
    def block_length(self) -> int:
        return self.H.n_cols

    @property
    def info_length(self) -> int:
        return self.H.encoder.k

    @property
    def syndrome_length(self) -> int:
        return self.H.n_rows

    def encode(self, info: np.ndarray) -> np.ndarray:
        return self.H.encoder.encode(info)

    def decode_with_syndrome(
        self, llr: np.ndarray, target_syndrome: Optional[np.ndarray]
    ) -> DecodeOutcome:
        if self.decoder == "bf":
            hard = (np.asarray(llr) < 0).astype(np.uint8)
            return decode_bf(hard, self.H, target_syndrome, self.max_iter)
        return decode_bp(llr, self.H, target_syndrome, self.max_iter)

    def decode(self, llr: np.ndarray) -> CodecDecision:
        outcome = self.decode_with_syndrome(llr, None)
        return CodecDecision(
            info=self.H.encoder.extract_info(outcome.bits),
            codeword=outcome.bits,
            converged=outcome.converged,
        )


class ConvCodec:
    """Zero-tail rate-1/2 CC filling exactly N coded bits."""

    name = "cc"

    def __init__(self, block_length: int, code: ConvCode = ConvCode()):
        self.code = code
        self._block_length = block_length
        self._info_length = code.info_length(block_length)

    @property
    def block_length(self) -> int:
        return self._block_length

    @property
    def info_length(self) -> int:
        return self._info_length

    def encode(self, info: np.ndarray) -> np.ndarray:
        return cc_encode(info, self.code)

    def decode(self, llr: np.ndarray) -> CodecDecision:
        info = cc_decode(llr, self.code)
        return CodecDecision(info=info, codeword=cc_encode(info, self.code))


class IrccCodec:
    """IRCC outer code, interleaver and URC as one codec."""

    name = "ircc"

    def __init__(self, code: IrccCode):
        self.code = code

    @property
    def block_length(self) -> int:
        return self.code.block_length

    @property
    def info_length(self) -> int:
        return self.code.info_length

    def encode(self, info: np.ndarray) -> np.ndarray:
        return self.code.encode(info)

    def decode(self, llr: np.ndarray) -> CodecDecision:
        decision, _ = self.code.decode(llr)
        return CodecDecision(
            info=decision.info,
            codeword=self.code.encode(decision.info),
            converged=decision.converged,
        )


def _constructed_matrix(spec: CodecSpec) -> ParityCheckMatrix:
    for offset in range(_ENCODER_SEED_ATTEMPTS):
        H = construct_regular(spec.block_length, spec.d_v, spec.d_c, seed=spec.seed + offset)
        try:
            H.encoder
        except EncodingSetupError as e:
            logger.warning(
                f"PEG seed {spec.seed + offset} gave rank {e.rank} "
                f"< {H.n_rows}; trying the next seed"
            )
            continue
        return H
    raise EncodingSetupError(
        f"no full-rank ({spec.d_v},{spec.d_c}) matrix in {_ENCODER_SEED_ATTEMPTS} seeds",
        rank=-1,
        rows=spec.block_length * spec.d_v // spec.d_c,
    )


@lru_cache(maxsize=32)
def _build_cached(spec_json: str) -> Codec:
    spec = CodecSpec.model_validate_json(spec_json)
    if spec.kind == "ldpc":
        if spec.pcm_path:
            H = load_alist(Path(spec.pcm_path).read_text(encoding="utf-8"))
            logger.info(f"Loaded parity-check matrix {H.n_rows}x{H.n_cols} from {spec.pcm_path}")
        else:
            H = _constructed_matrix(spec)
        return LdpcCodec(H, decoder=spec.decoder, max_iter=spec.max_iter)
    if spec.kind == "cc":
        return ConvCodec(spec.block_length)
    profile = (
        IrccProfile.reference()
        if spec.ircc_fractions is None
        else IrccProfile(tuple(spec.ircc_fractions))
    )
    code = IrccCode(
        profile,
        spec.block_length,
        interleaver_seed=spec.interleaver_seed,
        iterations=spec.ircc_iterations,
    )
    return IrccCodec(code)


def build_codec(spec: CodecSpec) -> Codec:
    """
    Build (or reuse) the codec described by ``spec``.

    Codecs are immutable after construction and cached per distinct spec, so
    every trial of a sweep shares one parity-check matrix and encoder.

    Raises:
        OSError: ``pcm_path`` cannot be read
        AlistParseError: Malformed alist file
        EncodingSetupError: No encodable matrix
        ProfileError: Invalid IRCC fractions
    """
    return _build_cached(spec.model_dump_json())
