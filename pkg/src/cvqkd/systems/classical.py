"""
Classical-channel transport of side information.

The link is error-free, unprotected (BPSK with hard slicing) or protected by
the classical codec. Protected payloads are split into info blocks of the
codec, zero-padded, encoded, sent and decoded block by block.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from cvqkd.codes.codecs import Codec
from cvqkd.core.errors import ParameterError
from cvqkd.core.models import ChannelKind, ChannelSpec, ClcKind
from cvqkd.physical.channels import bpsk_modulate, hard_decision, soft_observation, transmit

logger = logging.getLogger(__name__)

_CHANNEL_KINDS = {
    ClcKind.AWGN: ChannelKind.AWGN_CLASSICAL,
    ClcKind.RAYLEIGH: ChannelKind.RAYLEIGH_CLASSICAL,
}


class ClassicalLink:
    """One direction of the authenticated classical channel."""

    def __init__(
        self,
        kind: ClcKind,
        snr: float = math.inf,
        codec: Optional[Codec] = None,
        protected: bool = True,
    ):
        if kind is not ClcKind.ERROR_FREE and protected and codec is None:
            raise ParameterError("a protected classical link needs a codec")
        self.kind = kind
        self.snr = snr
        self.codec = codec
        self.protected = protected

    @property
    def error_free(self) -> bool:
        return self.kind is ClcKind.ERROR_FREE

    def _llr(self, bits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        spec = ChannelSpec(_CHANNEL_KINDS[self.kind], self.snr, segment_length=1)
        return soft_observation(transmit(bpsk_modulate(bits), spec, rng))

    def send(self, payload: np.ndarray, rng: np.random.Generator) -> Tuple[np.ndarray, bool]:
        """
        Carry an arbitrary bit payload across the link.

        Returns:
            (received payload, whether it arrived intact)
        """
        payload = np.asarray(payload, dtype=np.uint8)
        if self.error_free:
            return payload.copy(), True
        if not self.protected:
            received = hard_decision(self._llr(payload, rng))
            return received, bool(np.array_equal(received, payload))

        k = self.codec.info_length
        blocks = math.ceil(payload.size / k)
        padded = np.zeros(blocks * k, dtype=np.uint8)
        padded[: payload.size] = payload
        decoded = np.empty_like(padded)
        for i in range(blocks):
            block = slice(i * k, (i + 1) * k)
            codeword = self.codec.encode(padded[block])
            decoded[block] = self.codec.decode(self._llr(codeword, rng)).info
        received = decoded[: payload.size]
        return received, bool(np.array_equal(received, payload))

    def send_codeword(
        self, codeword: np.ndarray, rng: np.random.Generator
    ) -> Tuple[np.ndarray, bool]:
        """Carry an already-encoded block; the receiver decodes it unless unprotected."""
        codeword = np.asarray(codeword, dtype=np.uint8)
        if self.error_free:
            return codeword.copy(), True
        llr = self._llr(codeword, rng)
        received = self.codec.decode(llr).codeword if self.protected else hard_decision(llr)
        return received, bool(np.array_equal(received, codeword))
