"""The Arikan transform ``d = u G_N`` and its dense-matrix oracle."""
import numpy as np

from ._backend import core
from .errors import NotPowerOfTwo, TooLarge

G2 = np.array([[1, 0], [1, 1]], dtype=np.uint8)
DENSE_MAX_EXP = 10


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def polar_transform(u) -> np.ndarray:
    """Butterfly encoder over the last axis; accepts a batch of rows.

    Works in ``log2 N`` stages of N/2 XOR kernels each and equals
    multiplication by the Kronecker power of ``G2`` over GF(2).
    """
    u = np.asarray(u, dtype=np.uint8)
    if u.ndim == 0 or not is_power_of_two(u.shape[-1]):
        raise NotPowerOfTwo(f"length {u.shape[-1] if u.ndim else 0} is not a power of two")
    return core.polar_transform(u)


def dense_gn(n: int) -> np.ndarray:
    if n > DENSE_MAX_EXP:
        raise TooLarge(f"dense generator limited to n <= {DENSE_MAX_EXP}")
    G = np.ones((1, 1), dtype=np.uint8)
    for _ in range(n):
        G = np.kron(G2, G)
    return G


def dense_transform(u, G=None) -> np.ndarray:
    """``u @ G_N mod 2`` through a float matmul (counts stay exact below 2**24)."""
    u = np.asarray(u, dtype=np.uint8)
    N = u.shape[-1]
    if G is None:
        G = dense_gn(N.bit_length() - 1)
    prod = u.astype(np.float32) @ G.astype(np.float32)
    return (prod.astype(np.int64) & 1).astype(np.uint8)


def row_weight(i: int) -> int:
    return 1 << bin(i).count("1")
