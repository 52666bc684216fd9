"""Fixed pseudo-random interleavers keyed by (length, seed)."""

from functools import lru_cache

import numpy as np

from cvqkd.core.errors import ParameterError


@lru_cache(maxsize=64)
def permutation(length: int, seed: int) -> np.ndarray:
    """Read-only permutation of range(length); identical for identical arguments."""
    if length <= 0:
        raise ParameterError(f"interleaver length must be positive, got {length}")
    perm = np.random.Generator(np.random.Philox(seed)).permutation(length)
    perm.setflags(write=False)
    return perm


def interleave(values: np.ndarray, seed: int) -> np.ndarray:
    """out[i] = values[perm[i]]; works for bits and LLRs alike."""
    values = np.asarray(values)
    return values[permutation(len(values), seed)]


def deinterleave(values: np.ndarray, seed: int) -> np.ndarray:
    """Exact inverse of ``interleave``."""
    values = np.asarray(values)
    out = np.empty_like(values)
    out[permutation(len(values), seed)] = values
    return out
