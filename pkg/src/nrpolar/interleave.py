"""Input-bit, sub-block and channel interleavers.

Every interleaver is exposed as a permutation ``perm`` with the convention
``out[k] = x[perm[k]]``; the inverse scatters back.  Permutations are cached
per length and returned read-only, so they work for bit and soft vectors
alike.
"""
from __future__ import annotations

from functools import lru_cache
from math import isqrt

import numpy as np

from .datafiles import INPUT_INTERLEAVER_FILE, SUB_BLOCK_FILE, load_table
from .errors import KTooLarge, LengthMismatch, PatternInvalid

K_IL_MAX = 164


def _frozen(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


def permute(x, perm) -> np.ndarray:
    x = np.asarray(x)
    if len(x) != len(perm):
        raise LengthMismatch(f"vector of length {len(x)} for a permutation of {len(perm)}")
    return x[perm]


def unpermute(x, perm) -> np.ndarray:
    x = np.asarray(x)
    if len(x) != len(perm):
        raise LengthMismatch(f"vector of length {len(x)} for a permutation of {len(perm)}")
    out = np.empty_like(x)
    out[perm] = x
    return out


def is_permutation(perm, n: int | None = None) -> bool:
    perm = np.asarray(perm)
    n = len(perm) if n is None else n
    return len(perm) == n and np.array_equal(np.sort(perm), np.arange(n))


# --- input bits interleaver -------------------------------------------------

@lru_cache(maxsize=None)
def _input_perm(K: int) -> np.ndarray:
    h = K_IL_MAX - K
    pattern = load_table(INPUT_INTERLEAVER_FILE)
    return _frozen([v - h for v in pattern if v >= h])


def input_interleaver_pattern(K: int) -> np.ndarray:
    if K > K_IL_MAX:
        raise KTooLarge(f"input interleaver supports K <= {K_IL_MAX}, got {K}")
    if K < 1:
        raise LengthMismatch("K must be positive")
    return _input_perm(int(K))


def input_interleave(c, K: int | None = None) -> np.ndarray:
    K = len(c) if K is None else K
    return permute(c, input_interleaver_pattern(K))


def input_deinterleave(c_prime, K: int | None = None) -> np.ndarray:
    K = len(c_prime) if K is None else K
    return unpermute(c_prime, input_interleaver_pattern(K))


# --- sub-block interleaver --------------------------------------------------

def sub_block_pattern() -> tuple[int, ...]:
    return load_table(SUB_BLOCK_FILE)


@lru_cache(maxsize=None)
def _sub_block_perm(N: int, P: tuple[int, ...]) -> np.ndarray:
    B = N // 32
    j = np.arange(N)
    return _frozen(B * np.asarray(P)[j // B] + j % B)


def sub_block_map(N: int, P=None) -> np.ndarray:
    """The map J with ``y[j] = d[J[j]]``."""
    P = tuple(sub_block_pattern() if P is None else (int(p) for p in P))
    if not is_permutation(P, 32):
        raise PatternInvalid("sub-block pattern must be a permutation of 0..31")
    if N < 32 or N % 32:
        raise LengthMismatch(f"sub-block interleaver needs a multiple of 32, got {N}")
    return _sub_block_perm(int(N), P)


def sub_block_interleave(d, P=None) -> np.ndarray:
    return permute(d, sub_block_map(len(d), P))


def sub_block_deinterleave(y, P=None) -> np.ndarray:
    return unpermute(y, sub_block_map(len(y), P))


# --- channel (triangular) interleaver ---------------------------------------

def triangle_side(E: int) -> int:
    """Smallest T with T(T+1)/2 >= E."""
    T = (isqrt(8 * E + 1) - 1) // 2
    return T if T * (T + 1) // 2 >= E else T + 1


@lru_cache(maxsize=None)
def _channel_perm(E: int) -> np.ndarray:
    T = triangle_side(E)
    order = []
    row_start = [i * (2 * T - i + 1) // 2 for i in range(T)]
    for j in range(T):
        for i in range(T - j):
            k = row_start[i] + j
            if k < E:
                order.append(k)
    return _frozen(order)


def channel_interleaver_pattern(E: int) -> np.ndarray:
    if E < 1:
        raise LengthMismatch("E must be positive")
    return _channel_perm(int(E))


def channel_interleave(e, E: int | None = None) -> np.ndarray:
    E = len(e) if E is None else E
    return permute(e, channel_interleaver_pattern(E))


def channel_deinterleave(f, E: int | None = None) -> np.ndarray:
    E = len(f) if E is None else E
    return unpermute(f, channel_interleaver_pattern(E))
