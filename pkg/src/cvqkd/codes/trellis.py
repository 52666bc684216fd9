"""
Binary trellises and their soft decoders.

A ``Trellis`` tabulates next states and output bits for every (state, input)
pair. It is built from feedforward generators (the K=7 convolutional code) or
from a recursive systematic description (the IRCC mother code and the
accumulator). Generators are integers whose most significant of ``memory+1``
bits is the coefficient of D^0.

Kernels:
    viterbi   maximum-likelihood sequence decoding with soft branch metrics
    bcjr      log-MAP a-posteriori LLRs on inputs and on every output bit
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

logger = logging.getLogger(__name__)


def _parity(value: int) -> int:
    return bin(value).count("1") & 1


@dataclass(frozen=True, eq=False)
class Trellis:
    """State-transition and output tables of a rate-1/n binary code."""

    memory: int
    next_state: np.ndarray  # (S, 2) int64
    outputs: np.ndarray  # (S, 2, n_out) uint8

    @property
    def n_states(self) -> int:
        return self.next_state.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.outputs.shape[2]

    @classmethod
    def feedforward(cls, generators: Sequence[int], memory: int) -> "Trellis":
        """Non-recursive code: out_j = parity(reg & g_j), reg = (u << m) | state."""
        n_states = 1 << memory
        next_state = np.zeros((n_states, 2), dtype=np.int64)
        outputs = np.zeros((n_states, 2, len(generators)), dtype=np.uint8)
        for state in range(n_states):
            for u in (0, 1):
                reg = (u << memory) | state
                next_state[state, u] = reg >> 1
                for j, g in enumerate(generators):
                    outputs[state, u, j] = _parity(reg & g)
        return cls(memory=memory, next_state=next_state, outputs=outputs)

    @classmethod
    def recursive(
        cls,
        feedback: int,
        parities: Sequence[int],
        memory: int,
        systematic: bool = True,
    ) -> "Trellis":
        """Recursive code: a = u ^ parity(state & fb), outputs [u,] parity(reg & g_j)."""
        n_states = 1 << memory
        taps = feedback & (n_states - 1)
        width = len(parities) + (1 if systematic else 0)
        next_state = np.zeros((n_states, 2), dtype=np.int64)
        outputs = np.zeros((n_states, 2, width), dtype=np.uint8)
        for state in range(n_states):
            for u in (0, 1):
                a = u ^ _parity(state & taps)
                reg = (a << memory) | state
                next_state[state, u] = reg >> 1
                column = 0
                if systematic:
                    outputs[state, u, 0] = u
                    column = 1
                for j, g in enumerate(parities):
                    outputs[state, u, column + j] = _parity(reg & g)
        return cls(memory=memory, next_state=next_state, outputs=outputs)

    def encode(self, bits: np.ndarray) -> np.ndarray:
        """Encode from the zero state; returns outputs of shape (T, n_out)."""
        return _encode(np.asarray(bits, dtype=np.uint8), self.next_state, self.outputs)

    def viterbi(self, llr: np.ndarray, terminated: bool = True) -> np.ndarray:
        """ML input sequence for LLRs of shape (T, n_out)."""
        return _viterbi(
            np.ascontiguousarray(llr, dtype=np.float64), self.next_state, self.outputs, terminated
        )

    def bcjr(
        self, apriori_inputs: np.ndarray, apriori_outputs: np.ndarray, terminated: bool = False
    ):
        """
        Log-MAP decoding from the zero state.

        Args:
            apriori_inputs: a-priori LLRs on the input bits, shape (T,)
            apriori_outputs: a-priori/channel LLRs on output bits, shape (T, n_out)
            terminated: Whether the trellis ends in state 0

        Returns:
            (a-posteriori input LLRs (T,), a-posteriori output LLRs (T, n_out))
        """
        return _bcjr(
            np.ascontiguousarray(apriori_inputs, dtype=np.float64),
            np.ascontiguousarray(apriori_outputs, dtype=np.float64),
            self.next_state,
            self.outputs,
            terminated,
        )


@njit(cache=True, nogil=True)
def _encode(bits, next_state, outputs):
    n_out = outputs.shape[2]
    coded = np.empty((bits.size, n_out), dtype=np.uint8)
    state = 0
    for t in range(bits.size):
        u = bits[t]
        for j in range(n_out):
            coded[t, j] = outputs[state, u, j]
        state = next_state[state, u]
    return coded


@njit(cache=True, nogil=True)
def _branch_metric(llr, t, outputs, state, u):
    metric = 0.0
    for j in range(outputs.shape[2]):
        if outputs[state, u, j]:
            metric -= 0.5 * llr[t, j]
        else:
            metric += 0.5 * llr[t, j]
    return metric


@njit(cache=True, nogil=True)
def _viterbi(llr, next_state, outputs, terminated):
    n_states = next_state.shape[0]
    steps = llr.shape[0]
    metric = np.full(n_states, -np.inf)
    metric[0] = 0.0
    previous = np.zeros((steps, n_states), dtype=np.int64)
    decided = np.zeros((steps, n_states), dtype=np.uint8)
    for t in range(steps):
        updated = np.full(n_states, -np.inf)
        for state in range(n_states):
            if metric[state] == -np.inf:
                continue
            for u in range(2):
                nxt = next_state[state, u]
                candidate = metric[state] + _branch_metric(llr, t, outputs, state, u)
                if candidate > updated[nxt]:
                    updated[nxt] = candidate
                    previous[t, nxt] = state
                    decided[t, nxt] = u
        metric = updated
    state = 0 if terminated else int(np.argmax(metric))
    bits = np.empty(steps, dtype=np.uint8)
    for t in range(steps - 1, -1, -1):
        bits[t] = decided[t, state]
        state = previous[t, state]
    return bits


@njit(cache=True, nogil=True)
def _max_star(a, b):
    if a == -np.inf:
        return b
    if b == -np.inf:
        return a
    if a > b:
        return a + np.log1p(np.exp(b - a))
    return b + np.log1p(np.exp(a - b))


@njit(cache=True, nogil=True)
def _bcjr(la_u, la_c, next_state, outputs, terminated):
    n_states = next_state.shape[0]
    n_out = outputs.shape[2]
    steps = la_u.size

    gamma = np.empty((steps, n_states, 2))
    for t in range(steps):
        for state in range(n_states):
            for u in range(2):
                g = 0.5 * la_u[t] if u == 0 else -0.5 * la_u[t]
                gamma[t, state, u] = g + _branch_metric(la_c, t, outputs, state, u)

    alpha = np.full((steps + 1, n_states), -np.inf)
    alpha[0, 0] = 0.0
    for t in range(steps):
        for state in range(n_states):
            if alpha[t, state] == -np.inf:
                continue
            for u in range(2):
                nxt = next_state[state, u]
                metric = alpha[t, state] + gamma[t, state, u]
                alpha[t + 1, nxt] = _max_star(alpha[t + 1, nxt], metric)
        peak = alpha[t + 1].max()
        for state in range(n_states):
            alpha[t + 1, state] -= peak

    beta = np.full((steps + 1, n_states), -np.inf)
    if terminated:
        beta[steps, 0] = 0.0
    else:
        beta[steps, :] = 0.0
    for t in range(steps - 1, -1, -1):
        for state in range(n_states):
            acc = -np.inf
            for u in range(2):
                nxt = next_state[state, u]
                acc = _max_star(acc, gamma[t, state, u] + beta[t + 1, nxt])
            beta[t, state] = acc
        peak = beta[t].max()
        for state in range(n_states):
            beta[t, state] -= peak

    app_u = np.empty(steps)
    app_c = np.empty((steps, n_out))
    zero_c = np.empty(n_out)
    one_c = np.empty(n_out)
    for t in range(steps):
        zero_u = -np.inf
        one_u = -np.inf
        for j in range(n_out):
            zero_c[j] = -np.inf
            one_c[j] = -np.inf
        for state in range(n_states):
            if alpha[t, state] == -np.inf:
                continue
            for u in range(2):
                nxt = next_state[state, u]
                total = alpha[t, state] + gamma[t, state, u] + beta[t + 1, nxt]
                if u == 0:
                    zero_u = _max_star(zero_u, total)
                else:
                    one_u = _max_star(one_u, total)
                for j in range(n_out):
                    if outputs[state, u, j]:
                        one_c[j] = _max_star(one_c[j], total)
                    else:
                        zero_c[j] = _max_star(zero_c[j], total)
        app_u[t] = zero_u - one_u
        for j in range(n_out):
            app_c[t, j] = zero_c[j] - one_c[j]
    return app_u, app_c
