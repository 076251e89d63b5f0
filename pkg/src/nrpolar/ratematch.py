"""Circular-buffer rate matching and its soft-domain inverse.

Soft vectors are plain numpy arrays in one of two domains:

* ``Domain.LLR``: float LLRs, positive means bit 0 is more likely;
* ``Domain.BEC``: int8 ternary values in {0, 1, ERASED}.
"""
from __future__ import annotations

import enum

import numpy as np

from .config import RmMode
from .errors import ConflictingRepeats, LengthMismatch, ModeMismatch

ERASED = -1
DEFAULT_SATURATION = 1e6


class Domain(enum.Enum):
    LLR = "llr"
    BEC = "bec"


def _check_mode(N: int, E: int, mode: RmMode) -> None:
    if (mode is RmMode.REPEAT) != (E > N):
        raise ModeMismatch(f"{mode.value} is inconsistent with E={E}, N={N}")


def rate_match(y, E: int, mode: RmMode) -> np.ndarray:
    y = np.asarray(y)
    N = len(y)
    _check_mode(N, E, mode)
    if mode is RmMode.PUNCTURE:
        return y[N - E:].copy()
    if mode is RmMode.SHORTEN:
        return y[:E].copy()
    return y[np.arange(E) % N]


def de_rate_match(soft_e, N: int, mode: RmMode, domain: Domain = Domain.LLR,
                  saturation: float = DEFAULT_SATURATION) -> np.ndarray:
    """Expand E received soft values back to the N mother-code positions."""
    soft_e = np.asarray(soft_e)
    E = len(soft_e)
    _check_mode(N, E, mode)
    U = abs(N - E)
    if domain is Domain.LLR:
        soft_e = soft_e.astype(np.float64)
        if mode is RmMode.PUNCTURE:
            return np.concatenate([np.zeros(U), soft_e])
        if mode is RmMode.SHORTEN:
            return np.concatenate([soft_e, np.full(U, float(saturation))])
        out = np.zeros(N)
        np.add.at(out, np.arange(E) % N, soft_e)
        return out

    soft_e = soft_e.astype(np.int8)
    if mode is RmMode.PUNCTURE:
        return np.concatenate([np.full(U, ERASED, np.int8), soft_e])
    if mode is RmMode.SHORTEN:
        return np.concatenate([soft_e, np.zeros(U, np.int8)])
    out = np.full(N, ERASED, np.int8)
    for k, v in enumerate(soft_e):
        if v == ERASED:
            continue
        i = k % N
        if out[i] == ERASED:
            out[i] = v
        elif out[i] != v:
            raise ConflictingRepeats(f"repeated copies of position {i} disagree")
    return out


def concatenate(e1, e2, G: int) -> np.ndarray:
    e1, e2 = np.asarray(e1), np.asarray(e2)
    E = len(e1)
    if len(e2) != E or G not in (2 * E, 2 * E + 1):
        raise LengthMismatch(f"segments of {len(e1)} and {len(e2)} bits do not fill G={G}")
    parts = [e1, e2]
    if G == 2 * E + 1:
        parts.append(np.zeros(1, dtype=e1.dtype))
    return np.concatenate(parts)


def split(g, G: int) -> tuple[np.ndarray, np.ndarray]:
    g = np.asarray(g)
    if len(g) != G:
        raise LengthMismatch(f"expected {G} values, got {len(g)}")
    E = G // 2
    return g[:E].copy(), g[E:2 * E].copy()
