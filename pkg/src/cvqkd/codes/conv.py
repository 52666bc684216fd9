"""
Rate-1/2 zero-tail convolutional code, K = 7, generators 171/133 (octal).
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Tuple

import numpy as np

from cvqkd.codes.trellis import Trellis
from cvqkd.core.constants import CC_CONSTRAINT_LENGTH, CC_GENERATORS
from cvqkd.core.errors import ParameterError

logger = logging.getLogger(__name__)

# Exhaustive search is only offered for tiny messages
EXHAUSTIVE_MAX_BITS = 16


@dataclass(frozen=True)
class ConvCode:
    """Feedforward convolutional code with zero-tail termination."""

    constraint_length: int = CC_CONSTRAINT_LENGTH
    generators: Tuple[int, ...] = field(default=CC_GENERATORS)

    def __post_init__(self):
        top = 1 << self.memory
        for g in self.generators:
            if not g & top:
                raise ParameterError(f"generator {g:o} is not delay-free")
            if g >> self.constraint_length:
                raise ParameterError(f"generator {g:o} exceeds constraint length")

    @property
    def memory(self) -> int:
        return self.constraint_length - 1

    @property
    def n_states(self) -> int:
        return 1 << self.memory

    @property
    def n_outputs(self) -> int:
        return len(self.generators)

    @cached_property
    def trellis(self) -> Trellis:
        return Trellis.feedforward(self.generators, self.memory)

    def coded_length(self, k_info: int) -> int:
        return self.n_outputs * (k_info + self.memory)

    def info_length(self, n_coded: int) -> int:
        """Largest message whose terminated codeword fits in ``n_coded`` bits."""
        k_info = n_coded // self.n_outputs - self.memory
        if k_info <= 0 or self.coded_length(k_info) != n_coded:
            raise ParameterError(f"no zero-tail message fills {n_coded} coded bits")
        return k_info


def cc_encode(info: np.ndarray, code: ConvCode = ConvCode()) -> np.ndarray:
    """
    Encode with a zero tail; outputs are interleaved g1, g2 per input bit.

    Args:
        info: K_info message bits
        code: Convolutional code

    Returns:
        n_outputs * (K_info + memory) coded bits
    """
    info = np.asarray(info, dtype=np.uint8)
    padded = np.concatenate([info, np.zeros(code.memory, dtype=np.uint8)])
    return code.trellis.encode(padded).ravel()


def _reshape_llr(llr: np.ndarray, code: ConvCode) -> np.ndarray:
    llr = np.asarray(llr, dtype=np.float64)
    if llr.size % code.n_outputs or llr.size // code.n_outputs <= code.memory:
        raise ParameterError(f"LLR length {llr.size} does not match a terminated codeword")
    return llr.reshape(-1, code.n_outputs)


def cc_decode(llr: np.ndarray, code: ConvCode = ConvCode()) -> np.ndarray:
    """Viterbi decoding terminated at the zero state; returns the K_info message bits."""
    steps = _reshape_llr(llr, code)
    decided = code.trellis.viterbi(steps, terminated=True)
    return decided[: steps.shape[0] - code.memory]


def exhaustive_ml_decode(llr: np.ndarray, code: ConvCode = ConvCode()) -> np.ndarray:
    """
    Maximum-likelihood decoding by enumerating every message.

    Maximizes sum((1 - 2c) * llr) over all terminated codewords c. Only for
    messages up to EXHAUSTIVE_MAX_BITS bits; used to check the Viterbi decoder.
    """
    steps = _reshape_llr(llr, code)
    k_info = steps.shape[0] - code.memory
    if k_info > EXHAUSTIVE_MAX_BITS:
        raise ParameterError(f"exhaustive search limited to {EXHAUSTIVE_MAX_BITS} bits")
    flat = steps.ravel()
    best_metric, best = -np.inf, None
    for candidate in itertools.product((0, 1), repeat=k_info):
        message = np.array(candidate, dtype=np.uint8)
        metric = float(np.dot(1.0 - 2.0 * cc_encode(message, code), flat))
        if metric > best_metric:
            best_metric, best = metric, message
    return best
