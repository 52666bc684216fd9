"""
LDPC codes: representation, construction, alist I/O, encoding and decoding.

Decoding targets an arbitrary syndrome: the check-node update carries the
sign factor (-1)^{s(c)}, so ``target_syndrome = 0`` is the ordinary
sum-product algorithm and a nonzero target performs Slepian-Wolf style
syndrome decoding. Bit-flipping decoding works against the same target.

Hot loops (sum-product, GF(2) elimination, packed mat-vec) are numba kernels
compiled with ``nogil`` so that trial-level threads scale.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numba import njit
from scipy import sparse

from cvqkd.core.constants import (
    ERROR_MSG_RANK_DEFICIENT,
    LDPC_DEFAULT_MAX_ITER,
    LLR_CLAMP,
    PEG_MAX_ATTEMPTS,
    PEG_SEARCH_DEPTH,
)
from cvqkd.core.errors import AlistParseError, EncodingSetupError, ParameterError
from cvqkd.core.models import DecodeOutcome

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class ParityCheckMatrix:
    """
    Sparse parity-check matrix H of size (N-K) x N.

    ``check_neighbors[c]`` lists the variables of check c and
    ``var_neighbors[v]`` the checks of variable v, both sorted and
    duplicate-free. ``d_v``/``d_c`` are 0 for irregular codes.
    """

    n_rows: int
    n_cols: int
    check_neighbors: Tuple[np.ndarray, ...]
    var_neighbors: Tuple[np.ndarray, ...] = field(default=())
    d_v: int = 0
    d_c: int = 0

    def __post_init__(self):
        if len(self.check_neighbors) != self.n_rows:
            raise ParameterError("check adjacency must list every row")
        checks = []
        for c, neighbors in enumerate(self.check_neighbors):
            neighbors = np.asarray(neighbors, dtype=np.int64)
            if len(np.unique(neighbors)) != len(neighbors):
                raise ParameterError(f"check {c} lists a variable twice")
            if len(neighbors) and (neighbors.min() < 0 or neighbors.max() >= self.n_cols):
                raise ParameterError(f"check {c} has an out-of-range variable")
            checks.append(np.sort(neighbors))
        self.check_neighbors = tuple(checks)

        by_var: List[List[int]] = [[] for _ in range(self.n_cols)]
        for c, neighbors in enumerate(self.check_neighbors):
            for v in neighbors:
                by_var[v].append(c)
        self.var_neighbors = tuple(np.array(row, dtype=np.int64) for row in by_var)

        col_weights = {len(row) for row in self.var_neighbors}
        row_weights = {len(row) for row in self.check_neighbors}
        if self.d_v == 0 and self.d_c == 0 and len(col_weights) == 1 and len(row_weights) == 1:
            self.d_v, self.d_c = col_weights.pop(), row_weights.pop()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParityCheckMatrix):
            return NotImplemented
        return (
            self.n_rows == other.n_rows
            and self.n_cols == other.n_cols
            and all(
                np.array_equal(a, b)
                for a, b in zip(self.check_neighbors, other.check_neighbors)
            )
        )

    __hash__ = object.__hash__

    @classmethod
    def from_dense(cls, dense) -> "ParityCheckMatrix":
        """Build from a dense 0/1 matrix."""
        dense = np.asarray(dense)
        rows, cols = dense.shape
        return cls(
            n_rows=rows,
            n_cols=cols,
            check_neighbors=tuple(np.flatnonzero(dense[r]) for r in range(rows)),
        )

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for c, neighbors in enumerate(self.check_neighbors):
            dense[c, neighbors] = 1
        return dense

    @property
    def rate(self) -> float:
        """Design rate 1 - M/N."""
        return 1.0 - self.n_rows / self.n_cols

    @property
    def n_edges(self) -> int:
        return int(sum(len(row) for row in self.check_neighbors))

    @cached_property
    def csr(self) -> sparse.csr_matrix:
        rows = np.repeat(np.arange(self.n_rows), [len(r) for r in self.check_neighbors])
        cols = np.concatenate(self.check_neighbors) if self.n_edges else np.zeros(0, int)
        data = np.ones(len(cols), dtype=np.int32)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n_rows, self.n_cols))

    @cached_property
    def edges(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Edge tables (chk_ptr, chk_var, var_ptr, var_edge) for the numba kernels."""
        degrees = np.array([len(r) for r in self.check_neighbors], dtype=np.int64)
        chk_ptr = np.concatenate(([0], np.cumsum(degrees))).astype(np.int64)
        chk_var = (
            np.concatenate(self.check_neighbors).astype(np.int64)
            if self.n_edges
            else np.zeros(0, np.int64)
        )
        var_edge = np.argsort(chk_var, kind="stable").astype(np.int64)
        var_degrees = np.bincount(chk_var, minlength=self.n_cols)
        var_ptr = np.concatenate(([0], np.cumsum(var_degrees))).astype(np.int64)
        return chk_ptr, chk_var, var_ptr, var_edge

    @cached_property
    def encoder(self) -> "SystematicEncoder":
        return SystematicEncoder(self)

    def girth_at_least_six(self) -> bool:
        """True when no two checks share more than one variable (no 4-cycles)."""
        overlap = (self.csr @ self.csr.T).tocoo()
        off_diagonal = overlap.row != overlap.col
        return not np.any(overlap.data[off_diagonal] > 1)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def _reached_levels(
    v: int,
    var_adj: List[List[int]],
    chk_adj: List[List[int]],
    depth: int,
) -> List[set]:
    """Cumulative sets of checks within 1..depth check-levels of variable v."""
    reached = set(var_adj[v])
    levels = [set(reached)]
    frontier = set(reached)
    for _ in range(depth - 1):
        nxt = set()
        for c in frontier:
            for w in chk_adj[c]:
                if w == v:
                    continue
                for c2 in var_adj[w]:
                    if c2 not in reached:
                        nxt.add(c2)
        reached |= nxt
        levels.append(set(reached))
        if not nxt:
            break
        frontier = nxt
    while len(levels) < depth:
        levels.append(set(reached))
    return levels


def _peg_attempt(
    n: int, m: int, d_v: int, d_c: int, rng: np.random.Generator
) -> Optional[List[List[int]]]:
    var_adj: List[List[int]] = [[] for _ in range(n)]
    chk_adj: List[List[int]] = [[] for _ in range(m)]
    degree = np.zeros(m, dtype=np.int64)

    for v in range(n):
        for _ in range(d_v):
            available = degree < d_c
            levels = _reached_levels(v, var_adj, chk_adj, PEG_SEARCH_DEPTH)
            chosen = None
            # deepest level first; levels 1 and 2 are never dropped (girth >= 6)
            for level in range(PEG_SEARCH_DEPTH, 1, -1):
                mask = available.copy()
                if levels[level - 1]:
                    mask[list(levels[level - 1])] = False
                candidates = np.flatnonzero(mask)
                if candidates.size:
                    lowest = degree[candidates].min()
                    pool = candidates[degree[candidates] == lowest]
                    chosen = int(pool[rng.integers(pool.size)])
                    break
            if chosen is None:
                return None
            var_adj[v].append(chosen)
            chk_adj[chosen].append(v)
            degree[chosen] += 1
    return chk_adj


def construct_regular(n: int, d_v: int, d_c: int, seed: int = 0) -> ParityCheckMatrix:
    """
    Build a (d_v, d_c)-regular parity-check matrix by progressive edge growth.

    Each new edge of a variable goes to a lowest-degree check outside the
    explored neighbourhood, preferring the deepest exclusion level available;
    checks within two levels are always excluded so the girth is at least 6.
    Failed attempts restart from the same generator, so the result is
    deterministic given the seed.

    Args:
        n: Code length N
        d_v: Variable degree
        d_c: Check degree
        seed: Construction seed

    Returns:
        Regular ParityCheckMatrix of size (N d_v / d_c) x N

    Raises:
        ParameterError: Degree pair infeasible for this length
    """
    if d_v < 1 or d_c < 2 or d_c <= d_v:
        raise ParameterError(f"infeasible degree pair (d_v={d_v}, d_c={d_c})")
    if (n * d_v) % d_c:
        raise ParameterError(f"N*d_v = {n * d_v} not divisible by d_c = {d_c}")
    m = n * d_v // d_c
    if m < d_v or d_c > n:
        raise ParameterError(f"N={n} too short for degrees (d_v={d_v}, d_c={d_c})")

    rng = np.random.default_rng(seed)
    for attempt in range(PEG_MAX_ATTEMPTS):
        chk_adj = _peg_attempt(n, m, d_v, d_c, rng)
        if chk_adj is not None:
            logger.info(
                f"Constructed ({d_v},{d_c})-regular LDPC code N={n} "
                f"after {attempt + 1} attempt(s)"
            )
            return ParityCheckMatrix(
                n_rows=m,
                n_cols=n,
                check_neighbors=tuple(np.array(row) for row in chk_adj),
                d_v=d_v,
                d_c=d_c,
            )
    raise ParameterError(
        f"no girth-6 ({d_v},{d_c}) code found for N={n} in {PEG_MAX_ATTEMPTS} attempts"
    )


# ---------------------------------------------------------------------------
# alist I/O
# ---------------------------------------------------------------------------


def _int_tokens(line: str, number: int) -> List[int]:
    try:
        return [int(token) for token in line.split()]
    except ValueError:
        raise AlistParseError("non-integer token", line_number=number) from None


def load_alist(text: str) -> ParityCheckMatrix:
    """
    Parse the standard 1-indexed alist layout.

    Header: ``N M``, ``max_col max_row``, N column weights, M row weights,
    then N column lists and M row lists (zero padding is ignored).

    Raises:
        AlistParseError: Truncated file, bad counts or out-of-range indices
    """
    lines = [(i, line) for i, line in enumerate(text.splitlines(), start=1) if line.strip()]
    cursor = 0

    def take(expected: Optional[int] = None) -> Tuple[int, List[int]]:
        nonlocal cursor
        if cursor >= len(lines):
            last = lines[-1][0] if lines else 0
            raise AlistParseError("unexpected end of file", line_number=last + 1)
        number, line = lines[cursor]
        cursor += 1
        values = _int_tokens(line, number)
        if expected is not None and len(values) != expected:
            raise AlistParseError(
                f"expected {expected} values, found {len(values)}", line_number=number
            )
        return number, values

    number, (n, m) = take(2)
    if n <= 0 or m <= 0:
        raise AlistParseError("dimensions must be positive", line_number=number)
    take(2)
    number, col_weights = take(n)
    number, row_weights = take(m)

    columns = []
    for v in range(n):
        number, entries = take()
        entries = [e for e in entries if e != 0]
        if len(entries) != col_weights[v]:
            raise AlistParseError(f"column {v + 1} weight mismatch", line_number=number)
        if any(e < 1 or e > m for e in entries):
            raise AlistParseError(f"column {v + 1} index out of range", line_number=number)
        columns.append(sorted(e - 1 for e in entries))

    rows = []
    for c in range(m):
        number, entries = take()
        entries = [e for e in entries if e != 0]
        if len(entries) != row_weights[c]:
            raise AlistParseError(f"row {c + 1} weight mismatch", line_number=number)
        if any(e < 1 or e > n for e in entries):
            raise AlistParseError(f"row {c + 1} index out of range", line_number=number)
        if len(set(entries)) != len(entries):
            raise AlistParseError(f"row {c + 1} repeats an index", line_number=number)
        rows.append(sorted(e - 1 for e in entries))

    from_rows = {(c, v) for c, row in enumerate(rows) for v in row}
    from_cols = {(c, v) for v, col in enumerate(columns) for c in col}
    if from_rows != from_cols:
        raise AlistParseError("row and column lists disagree", line_number=number)

    return ParityCheckMatrix(
        n_rows=m, n_cols=n, check_neighbors=tuple(np.array(row, dtype=np.int64) for row in rows)
    )


def save_alist(H: ParityCheckMatrix) -> str:
    """Serialize to the alist layout read by ``load_alist``."""
    col_weights = [len(col) for col in H.var_neighbors]
    row_weights = [len(row) for row in H.check_neighbors]
    lines = [
        f"{H.n_cols} {H.n_rows}",
        f"{max(col_weights, default=0)} {max(row_weights, default=0)}",
        " ".join(map(str, col_weights)),
        " ".join(map(str, row_weights)),
    ]
    lines += [" ".join(str(c + 1) for c in col) for col in H.var_neighbors]
    lines += [" ".join(str(v + 1) for v in row) for row in H.check_neighbors]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Syndrome and systematic encoding
# ---------------------------------------------------------------------------


def syndrome(bits: np.ndarray, H: ParityCheckMatrix) -> np.ndarray:
    """GF(2) product H b^T."""
    bits = np.asarray(bits)
    if bits.shape != (H.n_cols,):
        raise ParameterError(f"expected {H.n_cols} bits, got {bits.shape}")
    return ((H.csr @ bits.astype(np.int32)) & 1).astype(np.uint8)


def _pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack 0/1 rows into little-endian uint64 words."""
    bits = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
    packed = np.packbits(bits, axis=1, bitorder="little")
    pad = (-packed.shape[1]) % 8
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    return np.ascontiguousarray(packed).view(np.uint64)


def _unpack_rows(words: np.ndarray, n_cols: int) -> np.ndarray:
    as_bytes = np.ascontiguousarray(words).view(np.uint8)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :n_cols]


@njit(cache=True, nogil=True)
def _gf2_eliminate(words, n_cols):
    m, width = words.shape
    pivots = np.full(m, -1, dtype=np.int64)
    rank = 0
    for col in range(n_cols):
        if rank == m:
            break
        word = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        pivot = -1
        for r in range(rank, m):
            if words[r, word] & bit:
                pivot = r
                break
        if pivot < 0:
            continue
        if pivot != rank:
            for k in range(width):
                tmp = words[rank, k]
                words[rank, k] = words[pivot, k]
                words[pivot, k] = tmp
        for r in range(m):
            if r != rank and (words[r, word] & bit):
                for k in range(width):
                    words[r, k] ^= words[rank, k]
        pivots[rank] = col
        rank += 1
    return rank, pivots


@njit(cache=True, nogil=True)
def _gf2_matvec(rows, vector):
    out = np.zeros(rows.shape[0], dtype=np.uint8)
    for r in range(rows.shape[0]):
        acc = np.uint64(0)
        for k in range(rows.shape[1]):
            acc ^= rows[r, k] & vector[k]
        acc ^= acc >> np.uint64(32)
        acc ^= acc >> np.uint64(16)
        acc ^= acc >> np.uint64(8)
        acc ^= acc >> np.uint64(4)
        acc ^= acc >> np.uint64(2)
        acc ^= acc >> np.uint64(1)
        out[r] = np.uint8(acc & np.uint64(1))
    return out


class SystematicEncoder:
    """
    Cached reduced form [P | I] of H up to column permutation.

    Pivot columns carry parity, the remaining K columns carry the
    information bits in ascending position order.
    """

    def __init__(self, H: ParityCheckMatrix):
        words = _pack_rows(H.to_dense())
        rank, pivots = _gf2_eliminate(words, H.n_cols)
        self.rank = int(rank)
        if self.rank < H.n_rows:
            raise EncodingSetupError(ERROR_MSG_RANK_DEFICIENT, rank=self.rank, rows=H.n_rows)
        reduced = _unpack_rows(words, H.n_cols)
        self.n = H.n_cols
        self.parity_positions = pivots[: self.rank].copy()
        is_info = np.ones(H.n_cols, dtype=bool)
        is_info[self.parity_positions] = False
        self.systematic_positions = np.flatnonzero(is_info)
        self.k = len(self.systematic_positions)
        self._parity_rows = _pack_rows(reduced[:, self.systematic_positions])
        logger.info(f"Systematic encoder ready: N={self.n}, K={self.k}, rank={self.rank}")

    def encode(self, info: np.ndarray) -> np.ndarray:
        info = np.asarray(info, dtype=np.uint8)
        if info.shape != (self.k,):
            raise ParameterError(f"expected {self.k} info bits, got {info.shape}")
        codeword = np.zeros(self.n, dtype=np.uint8)
        codeword[self.systematic_positions] = info
        codeword[self.parity_positions] = _gf2_matvec(self._parity_rows, _pack_rows(info)[0])
        return codeword

    def extract_info(self, codeword: np.ndarray) -> np.ndarray:
        return np.asarray(codeword, dtype=np.uint8)[self.systematic_positions]


def encode(info: np.ndarray, H: ParityCheckMatrix) -> np.ndarray:
    """
    Systematic encoding; syndrome(encode(info)) is zero.

    Raises:
        EncodingSetupError: H is rank deficient
    """
    return H.encoder.encode(info)


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _syndrome_matches(bits, chk_ptr, chk_var, target):
    for c in range(chk_ptr.size - 1):
        parity = 0
        for e in range(chk_ptr[c], chk_ptr[c + 1]):
            parity ^= bits[chk_var[e]]
        if parity != target[c]:
            return False
    return True


# keeps atanh finite when the other messages multiply to +-1 (degree-1 checks)
_TANH_LIMIT = 1.0 - 1e-12


@njit(cache=True, nogil=True)
def _sum_product(llr, chk_ptr, chk_var, var_ptr, var_edge, target, max_iter, clamp):
    n = llr.size
    m = chk_ptr.size - 1
    n_edges = chk_var.size
    bits = np.empty(n, dtype=np.uint8)
    for v in range(n):
        bits[v] = 1 if llr[v] < 0 else 0
    if _syndrome_matches(bits, chk_ptr, chk_var, target):
        return bits, True, 0

    max_degree = 0
    for c in range(m):
        max_degree = max(max_degree, chk_ptr[c + 1] - chk_ptr[c])
    t = np.empty(max_degree)
    prefix = np.empty(max_degree)
    v2c = np.empty(n_edges)
    c2v = np.zeros(n_edges)
    for e in range(n_edges):
        v2c[e] = llr[chk_var[e]]

    for iteration in range(1, max_iter + 1):
        for c in range(m):
            start = chk_ptr[c]
            degree = chk_ptr[c + 1] - start
            acc = 1.0
            for k in range(degree):
                x = min(max(v2c[start + k], -clamp), clamp)
                t[k] = math.tanh(0.5 * x)
                prefix[k] = acc
                acc *= t[k]
            sign = -1.0 if target[c] else 1.0
            acc = 1.0
            for k in range(degree - 1, -1, -1):
                product = min(max(prefix[k] * acc, -_TANH_LIMIT), _TANH_LIMIT)
                c2v[start + k] = sign * 2.0 * math.atanh(product)
                acc *= t[k]

        for v in range(n):
            total = llr[v]
            for p in range(var_ptr[v], var_ptr[v + 1]):
                total += c2v[var_edge[p]]
            for p in range(var_ptr[v], var_ptr[v + 1]):
                e = var_edge[p]
                v2c[e] = total - c2v[e]
            bits[v] = 1 if total < 0 else 0

        if _syndrome_matches(bits, chk_ptr, chk_var, target):
            return bits, True, iteration
    return bits, False, max_iter


def _check_target(H: ParityCheckMatrix, target_syndrome: Optional[np.ndarray]) -> np.ndarray:
    if target_syndrome is None:
        return np.zeros(H.n_rows, dtype=np.uint8)
    target = np.asarray(target_syndrome, dtype=np.uint8)
    if target.shape != (H.n_rows,):
        raise ParameterError(f"target syndrome must have {H.n_rows} bits")
    return target


def decode_bp(
    llr: np.ndarray,
    H: ParityCheckMatrix,
    target_syndrome: Optional[np.ndarray] = None,
    max_iter: int = LDPC_DEFAULT_MAX_ITER,
) -> DecodeOutcome:
    """
    Sum-product decoding against a target syndrome.

    Check update: L_{c->v} = (-1)^{s(c)} 2 atanh(prod tanh(L/2)) with inputs
    clamped to |L| <= 30. The channel hard decision is checked before the
    first iteration; decoding stops as soon as the syndrome matches.

    Args:
        llr: Channel LLRs (positive = bit 0), length N
        H: Parity-check matrix
        target_syndrome: s, length N-K (None = all-zero)
        max_iter: Iteration cap

    Returns:
        DecodeOutcome; non-convergence is reported, not raised
    """
    llr = np.ascontiguousarray(llr, dtype=np.float64)
    if llr.shape != (H.n_cols,):
        raise ParameterError(f"expected {H.n_cols} LLRs, got {llr.shape}")
    if max_iter < 1:
        raise ParameterError("max_iter must be at least 1")
    target = _check_target(H, target_syndrome)
    chk_ptr, chk_var, var_ptr, var_edge = H.edges
    bits, converged, iterations = _sum_product(
        llr, chk_ptr, chk_var, var_ptr, var_edge, target, int(max_iter), LLR_CLAMP
    )
    return DecodeOutcome(bits=bits, converged=bool(converged), iterations_used=int(iterations))


def decode_bf(
    hard_bits: np.ndarray,
    H: ParityCheckMatrix,
    target_syndrome: Optional[np.ndarray] = None,
    max_iter: int = LDPC_DEFAULT_MAX_ITER,
) -> DecodeOutcome:
    """
    Gallager bit flipping against a target syndrome.

    Every round flips all bits whose number of unsatisfied checks (relative
    to the target) is maximal.
    """
    bits = np.array(hard_bits, dtype=np.uint8)
    if bits.shape != (H.n_cols,):
        raise ParameterError(f"expected {H.n_cols} bits, got {bits.shape}")
    target = _check_target(H, target_syndrome)
    csc_t = H.csr.T.tocsr()
    for rounds in range(max_iter + 1):
        unsatisfied = syndrome(bits, H) ^ target
        if not unsatisfied.any():
            return DecodeOutcome(bits=bits, converged=True, iterations_used=rounds)
        if rounds == max_iter:
            break
        counts = csc_t @ unsatisfied.astype(np.int32)
        bits[counts == counts.max()] ^= 1
    return DecodeOutcome(bits=bits, converged=False, iterations_used=max_iter)


def example_matrix_10_5() -> ParityCheckMatrix:
    """A [10, 5] (2, 4)-regular code in which every pair of checks shares one variable."""
    rows: Sequence[Sequence[int]] = (
        (1, 1, 1, 1, 0, 0, 0, 0, 0, 0),
        (1, 0, 0, 0, 1, 1, 1, 0, 0, 0),
        (0, 1, 0, 0, 1, 0, 0, 1, 1, 0),
        (0, 0, 1, 0, 0, 1, 0, 1, 0, 1),
        (0, 0, 0, 1, 0, 0, 1, 0, 1, 1),
    )
    return ParityCheckMatrix.from_dense(np.array(rows, dtype=np.uint8))
