"""CRC attachment and checking for the three NR control-channel polynomials.

The register works on the dividend window (message bits shifted in, followed
by L zeros), so presetting it with ones is the same as prepending L ones to
the message.  That is the DCI convention.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Optional

import numpy as np

from .config import CrcPoly
from .errors import LengthMismatch

# Coefficients from x^L down to x^0.
_EXPONENTS = {
    CrcPoly.G6: (6, 5, 0),
    CrcPoly.G11: (11, 10, 9, 5, 0),
    CrcPoly.G24: (24, 23, 21, 20, 17, 15, 13, 12, 8, 4, 2, 1, 0),
}

RNTI_BITS = 16


def poly_coefficients(poly: CrcPoly) -> list[int]:
    """Coefficient list of length L+1, highest degree first."""
    exps = _EXPONENTS[poly]
    deg = exps[0]
    return [1 if deg - k in exps else 0 for k in range(deg + 1)]


def _as_bits(x) -> np.ndarray:
    return np.asarray(x, dtype=np.uint8).ravel()


def crc_remainder(msg, poly: CrcPoly, init_ones: bool = False) -> np.ndarray:
    L = poly.length
    mask = (1 << L) - 1
    low = sum(1 << e for e in _EXPONENTS[poly] if e < L)
    top = 1 << (L - 1)
    reg = mask if init_ones else 0
    for b in _as_bits(msg).tolist() + [0] * L:
        out = reg & top
        reg = ((reg << 1) & mask) | b
        if out:
            reg ^= low
    return np.array([(reg >> (L - 1 - k)) & 1 for k in range(L)], dtype=np.uint8)


def crc_attach(msg, poly: CrcPoly, init_ones: bool = False) -> np.ndarray:
    """Return ``msg`` followed by its L-bit remainder."""
    msg = _as_bits(msg)
    return np.concatenate([msg, crc_remainder(msg, poly, init_ones)])


def rnti_bits(rnti: int) -> np.ndarray:
    return np.array([(rnti >> (RNTI_BITS - 1 - k)) & 1 for k in range(RNTI_BITS)],
                    dtype=np.uint8)


def rnti_mask(c, rnti: int, A: int) -> np.ndarray:
    """XOR the RNTI into the last 16 of the 24 CRC bits following A message bits."""
    c = _as_bits(c).copy()
    if len(c) < A + 24:
        raise LengthMismatch(f"vector of length {len(c)} has no 24-bit CRC after A={A}")
    c[A + 8:A + 24] ^= rnti_bits(rnti)
    return c


def crc_check(c, poly: CrcPoly, init_ones: bool = False,
              rnti: Optional[int] = None) -> bool:
    c = _as_bits(c)
    L = poly.length
    if len(c) < L:
        raise LengthMismatch(f"vector of length {len(c)} is shorter than the CRC")
    A = len(c) - L
    if rnti is not None:
        c = rnti_mask(c, rnti, A)
    return bool(np.array_equal(crc_remainder(c[:A], poly, init_ones), c[A:]))


@lru_cache(maxsize=256)
def _affine(A: int, poly: CrcPoly, init_ones: bool, rnti: Optional[int]):
    L = poly.length
    const = crc_remainder(np.zeros(A, np.uint8), poly, init_ones)
    if rnti is not None:
        const = const.copy()
        const[8:24] ^= rnti_bits(rnti)
    M = np.empty((L, A), dtype=np.uint8)
    unit = np.zeros(A, np.uint8)
    for j in range(A):
        unit[j] = 1
        M[:, j] = crc_remainder(unit, poly, False)
        unit[j] = 0
    M.setflags(write=False)
    const.setflags(write=False)
    return M, const


def crc_affine(A: int, poly: CrcPoly, init_ones: bool = False,
               rnti: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
    """(M, c0) with transmitted CRC bits = M @ msg + c0 over GF(2).

    Includes the init fill and RNTI mask, so it describes exactly the bits
    that :func:`crc_attach` followed by :func:`rnti_mask` would produce.
    """
    return _affine(int(A), poly, bool(init_ones), rnti)


def crc_check_batch(c, poly: CrcPoly, init_ones: bool = False,
                    rnti: Optional[int] = None) -> np.ndarray:
    """Row-wise :func:`crc_check` for a 2-D array of candidate vectors."""
    c = np.atleast_2d(np.asarray(c, dtype=np.uint8))
    L = poly.length
    A = c.shape[1] - L
    M, c0 = crc_affine(A, poly, init_ones, rnti)
    parity = (c[:, :A].astype(np.int64) @ M.T.astype(np.int64) + c0) & 1
    return np.all(parity == c[:, A:], axis=1)
