"""
Irregular convolutional code (IRCC) with a unity-rate inner code.

The outer code splits its coded block into 17 segments. Segment i holds
round(alpha_i * N) coded bits, produced by a component code of rate
r_i = 0.1 + 0.05 (i - 1). Every component is derived from one memory-4
recursive systematic mother code of rate 1/4 (feedback 31, parities
27/35/33 octal): systematic bits are always kept, parity streams are
punctured for rates above 1/4 and the whole mother stream is repeated
cyclically for rates below.

The transmitted block is URC(interleave(outer codeword)), where URC is the
accumulator y_t = x_t ^ y_(t-1). Decoding iterates inner accumulator BCJR and
outer component BCJRs, exchanging extrinsic LLRs only.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from cvqkd.codes.interleaver import deinterleave, interleave
from cvqkd.codes.mutual_info import mi_estimate
from cvqkd.codes.trellis import Trellis
from cvqkd.core.config import load_config_file
from cvqkd.core.constants import (
    IRCC_COMPONENTS,
    IRCC_DEFAULT_INTERLEAVER_SEED,
    IRCC_DEFAULT_ITERATIONS,
    IRCC_MOTHER_FEEDBACK,
    IRCC_MOTHER_MEMORY,
    IRCC_MOTHER_PARITIES,
    IRCC_RATES,
    REFERENCE_IRCC_FRACTIONS,
)
from cvqkd.core.errors import ParameterError, ProfileError
from cvqkd.core.models import CodecDecision, ExitPoint

logger = logging.getLogger(__name__)

_FRACTION_TOLERANCE = 1e-6
_MOTHER_STREAMS = 1 + len(IRCC_MOTHER_PARITIES)


MOTHER_TRELLIS = Trellis.recursive(IRCC_MOTHER_FEEDBACK, IRCC_MOTHER_PARITIES, IRCC_MOTHER_MEMORY)
URC_TRELLIS = Trellis.recursive(feedback=0b11, parities=(0b10,), memory=1, systematic=False)


@dataclass(frozen=True)
class IrccProfile:
    """Weights of the 17 component codes over the coded bit stream."""

    fractions: Tuple[float, ...]

    def __post_init__(self):
        fractions = tuple(float(f) for f in self.fractions)
        object.__setattr__(self, "fractions", fractions)
        if len(fractions) != IRCC_COMPONENTS:
            raise ProfileError(
                f"expected {IRCC_COMPONENTS} fractions, got {len(fractions)}"
            )
        if any(f < 0 for f in fractions):
            raise ProfileError("fractions must be non-negative")
        total = sum(fractions)
        if abs(total - 1.0) > _FRACTION_TOLERANCE:
            raise ProfileError(f"fractions sum to {total}, not 1", total=total)

    @property
    def rates(self) -> Tuple[float, ...]:
        return IRCC_RATES

    @property
    def overall_rate(self) -> float:
        return float(np.dot(self.fractions, self.rates))

    @property
    def active(self) -> List[int]:
        """Indices of components with a nonzero fraction."""
        return [i for i, f in enumerate(self.fractions) if f > 0]

    @classmethod
    def reference(cls) -> "IrccProfile":
        return cls(REFERENCE_IRCC_FRACTIONS)

    @classmethod
    def single(cls, rate: float) -> "IrccProfile":
        """Profile that uses one component code only."""
        matches = [i for i, r in enumerate(IRCC_RATES) if math.isclose(r, rate)]
        if not matches:
            raise ProfileError(f"no component code of rate {rate}")
        fractions = [0.0] * IRCC_COMPONENTS
        fractions[matches[0]] = 1.0
        return cls(tuple(fractions))

    @classmethod
    def load(cls, path: str) -> "IrccProfile":
        """Read ``fractions`` from a YAML or key=value file."""
        data = load_config_file(path)
        raw = data.get("fractions")
        if raw is None:
            raise ProfileError(f"{Path(path).name}: missing 'fractions'")
        if isinstance(raw, str):
            raw = [item for item in raw.split(",") if item.strip()]
        return cls(tuple(float(item) for item in raw))

    def coded_budgets(self, n: int) -> np.ndarray:
        """
        Coded bits per component, round(alpha_i N) by largest remainder.

        Raises:
            ProfileError: Rounding leaves a remainder outside [0, 17]
        """
        raw = np.asarray(self.fractions) * n
        budgets = np.floor(raw).astype(np.int64)
        remainder = n - int(budgets.sum())
        if remainder < 0 or remainder > IRCC_COMPONENTS:
            raise ProfileError(f"rounding remainder {remainder} out of range", n=n)
        order = np.argsort(-(raw - budgets), kind="stable")
        budgets[order[:remainder]] += 1
        return budgets

    def info_budgets(self, n: int) -> np.ndarray:
        """Info bits per component, round(n_i r_i)."""
        coded = self.coded_budgets(n)
        return np.rint(coded * np.asarray(self.rates)).astype(np.int64)


def rate_matching_positions(k: int, n: int) -> np.ndarray:
    """
    Positions in the stream-major mother output (sys, p1, p2, p3; each k long)
    that form an n-bit component codeword.
    """
    mother = _MOTHER_STREAMS * k
    if n > mother:
        return np.arange(n) % mother
    positions = [np.arange(k)]
    missing = n - k
    for stream in range(1, _MOTHER_STREAMS):
        take = min(missing, k)
        if take <= 0:
            break
        picked = (np.arange(take) * k) // take
        positions.append(stream * k + picked)
        missing -= take
    return np.concatenate(positions)


@dataclass(frozen=True)
class ComponentCode:
    """One rate-matched variant of the mother code."""

    index: int
    k: int
    n: int

    @property
    def rate(self) -> float:
        return IRCC_RATES[self.index]

    @cached_property
    def positions(self) -> np.ndarray:
        return rate_matching_positions(self.k, self.n)

    def encode(self, info: np.ndarray) -> np.ndarray:
        mother = MOTHER_TRELLIS.encode(info)  # (k, 4)
        return mother.T.ravel()[self.positions]

    def decode(self, apriori: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        BCJR on the component trellis.

        Args:
            apriori: LLRs on the n coded bits

        Returns:
            (a-posteriori info LLRs (k,), a-posteriori coded LLRs (n,))
        """
        combined = np.zeros(_MOTHER_STREAMS * self.k)
        np.add.at(combined, self.positions, apriori)
        app_u, app_c = MOTHER_TRELLIS.bcjr(
            np.zeros(self.k), combined.reshape(_MOTHER_STREAMS, self.k).T
        )
        return app_u, app_c.T.ravel()[self.positions]


class IrccCode:
    """IRCC outer code of block length N plus its interleaver and URC."""

    def __init__(
        self,
        profile: IrccProfile,
        block_length: int,
        interleaver_seed: int = IRCC_DEFAULT_INTERLEAVER_SEED,
        iterations: int = IRCC_DEFAULT_ITERATIONS,
    ):
        if block_length <= 0:
            raise ParameterError("block_length must be positive")
        self.profile = profile
        self.block_length = block_length
        self.interleaver_seed = interleaver_seed
        self.iterations = iterations

        coded = profile.coded_budgets(block_length)
        info = profile.info_budgets(block_length)
        self.components: List[ComponentCode] = []
        for index in profile.active:
            if coded[index] == 0:
                continue
            if info[index] == 0:
                raise ProfileError(
                    f"component {index} gets {coded[index]} coded bits but no info bits"
                )
            self.components.append(ComponentCode(index, int(info[index]), int(coded[index])))
        self._info_offsets = np.cumsum([0] + [c.k for c in self.components])
        self._coded_offsets = np.cumsum([0] + [c.n for c in self.components])
        logger.debug(
            f"IRCC N={block_length} K={self.info_length} with {len(self.components)} components"
        )

    @property
    def info_length(self) -> int:
        return int(self._info_offsets[-1])

    @property
    def rate(self) -> float:
        return self.info_length / self.block_length

    def _slices(self):
        for i, component in enumerate(self.components):
            yield (
                component,
                slice(self._info_offsets[i], self._info_offsets[i + 1]),
                slice(self._coded_offsets[i], self._coded_offsets[i + 1]),
            )

    def outer_encode(self, info: np.ndarray) -> np.ndarray:
        info = np.asarray(info, dtype=np.uint8)
        if info.size != self.info_length:
            raise ParameterError(f"expected {self.info_length} info bits, got {info.size}")
        coded = np.empty(self.block_length, dtype=np.uint8)
        for component, info_slice, coded_slice in self._slices():
            coded[coded_slice] = component.encode(info[info_slice])
        return coded

    def encode(self, info: np.ndarray) -> np.ndarray:
        """Transmitted block URC(interleave(outer codeword))."""
        return urc_transform(interleave(self.outer_encode(info), self.interleaver_seed))

    def outer_decode(self, apriori: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """All component BCJRs; returns (info APP LLRs, coded APP LLRs)."""
        app_info = np.empty(self.info_length)
        app_coded = np.empty(self.block_length)
        for component, info_slice, coded_slice in self._slices():
            app_info[info_slice], app_coded[coded_slice] = component.decode(apriori[coded_slice])
        return app_info, app_coded

    def decode(
        self,
        llr: np.ndarray,
        iterations: Optional[int] = None,
        extrinsic_only: bool = True,
        truth: Optional[np.ndarray] = None,
    ) -> Tuple[CodecDecision, List[Tuple[ExitPoint, ExitPoint]]]:
        """
        Iterative inner/outer decoding.

        Args:
            llr: Channel LLRs on the N transmitted (post-URC) bits
            iterations: Inner/outer pairs; defaults to the code's setting
            extrinsic_only: Pass APP minus a-priori between decoders. False
                forwards the full APP, which breaks the iteration.
            truth: Outer codeword; when given, every iteration's (I_A, I_E)
                pair of both decoders is measured

        Returns:
            (decision, trajectory); the trajectory is empty without ``truth``
        """
        llr = np.asarray(llr, dtype=np.float64)
        if llr.size != self.block_length:
            raise ParameterError(f"expected {self.block_length} LLRs, got {llr.size}")
        iterations = self.iterations if iterations is None else iterations
        seed = self.interleaver_seed
        channel = llr.reshape(-1, 1)
        interleaved_truth = None if truth is None else interleave(truth, seed)

        apriori_inner = np.zeros(self.block_length)
        trajectory: List[Tuple[ExitPoint, ExitPoint]] = []
        info_hat = np.zeros(self.info_length, dtype=np.uint8)
        codeword_hat = np.zeros(self.block_length, dtype=np.uint8)
        converged = False
        for iteration in range(iterations):
            app_inner, _ = URC_TRELLIS.bcjr(apriori_inner, channel)
            to_outer = app_inner - apriori_inner if extrinsic_only else app_inner
            apriori_outer = deinterleave(to_outer, seed)

            app_info, app_coded = self.outer_decode(apriori_outer)
            to_inner = app_coded - apriori_outer if extrinsic_only else app_coded

            if truth is not None:
                trajectory.append(
                    (
                        ExitPoint(
                            mi_estimate(apriori_inner, interleaved_truth),
                            mi_estimate(to_outer, interleaved_truth),
                        ),
                        ExitPoint(mi_estimate(apriori_outer, truth), mi_estimate(to_inner, truth)),
                    )
                )

            apriori_inner = interleave(to_inner, seed)
            info_hat = (app_info < 0).astype(np.uint8)
            codeword_hat = self.outer_encode(info_hat)
            if np.array_equal(codeword_hat, (app_coded < 0).astype(np.uint8)):
                converged = True
                logger.debug(f"IRCC converged after {iteration + 1} iterations")
                break
        decision = CodecDecision(info=info_hat, codeword=codeword_hat, converged=converged)
        return decision, trajectory


def urc_transform(bits: np.ndarray) -> np.ndarray:
    """Accumulator y_t = x_t ^ y_(t-1)."""
    bits = np.asarray(bits, dtype=np.uint8)
    return (np.cumsum(bits) & 1).astype(np.uint8)


def urc_inverse(bits: np.ndarray) -> np.ndarray:
    """x_t = y_t ^ y_(t-1)."""
    bits = np.asarray(bits, dtype=np.uint8)
    return np.bitwise_xor(bits, np.concatenate(([0], bits[:-1])).astype(np.uint8))


def ircc_encode(info: np.ndarray, code: IrccCode) -> np.ndarray:
    """Outer IRCC codeword: concatenated component codewords, N bits."""
    return code.outer_encode(info)


def ircc_decode(
    llr: np.ndarray, code: IrccCode, iterations: int = IRCC_DEFAULT_ITERATIONS
) -> np.ndarray:
    """Decode post-URC channel LLRs to the IRCC info bits."""
    decision, _ = code.decode(llr, iterations=iterations)
    return decision.info


def ircc_decode_trajectory(
    llr: np.ndarray,
    code: IrccCode,
    truth: np.ndarray,
    iterations: int = IRCC_DEFAULT_ITERATIONS,
) -> List[Tuple[ExitPoint, ExitPoint]]:
    """Measured (inner, outer) EXIT points of every decoding iteration."""
    _, trajectory = code.decode(llr, iterations=iterations, truth=truth)
    return trajectory


def component_codes(rates: Sequence[float], n: int) -> List[ComponentCode]:
    """Standalone component codes of ``n`` coded bits for the given rates."""
    components = []
    for rate in rates:
        index = IrccProfile.single(rate).active[0]
        components.append(ComponentCode(index, int(round(n * IRCC_RATES[index])), n))
    return components
