"""Successive cancellation decoders and their list/CRC-aided variants.

Assistant bits (parity-check bits, and CRC bits spread through the input
vector by the input interleaver) are handed to the list decoder as affine
parity checks on earlier input bits.  The :class:`DecoderPolicy` chooses how
each kind of check is enforced.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _pycore
from ._backend import core
from .config import CrcPoly
from .construct import SubchannelAllocation, assemble_u, pc_dependencies
from .crc import crc_affine, crc_check_batch
from .errors import TooLarge
from .interleave import input_interleaver_pattern
from .kernel import polar_transform
from .ratematch import ERASED

ML_MAX_K = 16


class AssistMode(enum.Enum):
    DYNAMIC_FROZEN = "dynamic-frozen"
    KILL_FAILED_PATHS = "kill"
    KEEP_FAILED_PATHS = "keep"


_CORE_MODE = {
    AssistMode.DYNAMIC_FROZEN: _pycore.DYNAMIC_FROZEN,
    AssistMode.KILL_FAILED_PATHS: _pycore.KILL,
    AssistMode.KEEP_FAILED_PATHS: _pycore.KEEP,
}


@dataclass(frozen=True)
class DecoderPolicy:
    """List size and assistant-bit handling.

    ``crc_mode`` governs CRC bits that the input interleaver places ahead of
    the end of the input vector; ``None`` leaves them to the final CRC test
    only.  Early termination acts on checks that are not dynamically frozen.
    """
    list_size: int = 8
    pc_mode: AssistMode = AssistMode.DYNAMIC_FROZEN
    crc_mode: Optional[AssistMode] = None
    early_termination: bool = False

    def __post_init__(self):
        if self.list_size < 1:
            raise ValueError("list size must be at least 1")
        if self.early_termination and all(
                m in (None, AssistMode.DYNAMIC_FROZEN) for m in (self.pc_mode, self.crc_mode)):
            raise ValueError("early termination needs a check that is not dynamically frozen")


@dataclass(frozen=True)
class CrcContext:
    """What the decoder needs to know about the outer CRC of one segment."""
    A: int                     # message bits in front of the CRC
    poly: CrcPoly
    init_ones: bool = False
    rnti: Optional[int] = None
    interleaved: bool = False  # input-bit interleaver active

    @property
    def K(self) -> int:
        return self.A + self.poly.length


@dataclass
class DecodeResult:
    message: np.ndarray        # A' bits (or all K bits when no CRC context)
    crc_ok: bool
    terminated_early: Optional[int]
    chosen_path_metric: float
    paths_explored: int
    u_hat: np.ndarray = field(repr=False)
    path_counts: np.ndarray = field(repr=False, default=None)


# --- BEC ----------------------------------------------------------------------

def _bec_f(a, b):
    return np.where((a == ERASED) | (b == ERASED), ERASED, a ^ b).astype(np.int8)


def _bec_g(a, b, beta):
    return np.where(b != ERASED, b, np.where(a == ERASED, ERASED, a ^ beta)).astype(np.int8)


def sc_decode_bec(y, frozen) -> np.ndarray:
    """SC over the erasure channel; ``y`` holds 0, 1 or ``ERASED``.

    Undetermined information bits are decided as 0.
    """
    y = np.asarray(y, dtype=np.int8)
    mask = _frozen_mask(frozen, len(y))
    u = np.zeros(len(y), dtype=np.uint8)

    def node(alpha, lo):
        h = len(alpha) // 2
        if h == 0:
            bit = 0 if mask[lo] or alpha[0] == ERASED else int(alpha[0])
            u[lo] = bit
            return np.array([bit], dtype=np.int8)
        beta_l = node(_bec_f(alpha[:h], alpha[h:]), lo)
        beta_r = node(_bec_g(alpha[:h], alpha[h:], beta_l), lo + h)
        return np.concatenate([beta_l ^ beta_r, beta_r])

    node(y, 0)
    return u


def _frozen_mask(frozen, N: int) -> np.ndarray:
    """Accepts an allocation, a length-N 0/1 mask array, or an index collection."""
    if isinstance(frozen, SubchannelAllocation):
        return frozen.frozen_mask()
    if isinstance(frozen, np.ndarray) and frozen.dtype in (np.bool_, np.uint8) and len(frozen) == N:
        return frozen.astype(np.uint8)
    mask = np.zeros(N, dtype=np.uint8)
    mask[sorted(int(i) for i in frozen)] = 1
    return mask


# --- LLR SC -------------------------------------------------------------------

def sc_decode_llr(llr, frozen) -> np.ndarray:
    """Min-sum SC decoding; LLR >= 0 decides 0.  Returns the input vector."""
    llr = np.asarray(llr, dtype=np.float64)
    return core.sc_decode_llr(llr, _frozen_mask(frozen, len(llr)))


# --- SCL ----------------------------------------------------------------------

@dataclass(frozen=True)
class _Plan:
    kind: np.ndarray
    check_of: np.ndarray
    ptr: np.ndarray
    deps: np.ndarray
    const: np.ndarray
    mode: np.ndarray


def _crc_checks(alloc: SubchannelAllocation, crc: CrcContext):
    """Affine checks for CRC bits placed before the end of the input vector."""
    pi = input_interleaver_pattern(crc.K)
    pos_of_c = np.empty(crc.K, dtype=np.int64)
    pos_of_c[pi] = np.asarray(alloc.msg_positions)[np.arange(crc.K)]
    M, c0 = crc_affine(crc.A, crc.poly, crc.init_ones, crc.rnti)
    checks = []
    for r in range(crc.poly.length):
        pos = int(pos_of_c[crc.A + r])
        deps = sorted(int(pos_of_c[j]) for j in np.flatnonzero(M[r]))
        if deps and deps[-1] > pos:
            continue
        checks.append((pos, deps, int(c0[r])))
    return checks


@lru_cache(maxsize=256)
def _plan(alloc: SubchannelAllocation, crc: Optional[CrcContext],
          pc_mode: AssistMode, crc_mode: Optional[AssistMode]) -> _Plan:
    N = alloc.N
    kind = np.where(alloc.frozen_mask() == 1, _pycore.FROZEN, _pycore.INFO).astype(np.int8)
    checks = []
    for i, deps in sorted(pc_dependencies(alloc).items()):
        checks.append((i, deps, 0, _CORE_MODE[pc_mode]))
    if crc is not None and crc.interleaved and crc_mode is not None:
        for pos, deps, c in _crc_checks(alloc, crc):
            checks.append((pos, deps, c, _CORE_MODE[crc_mode]))
    checks.sort()
    check_of = np.full(N, -1, dtype=np.int32)
    ptr, deps_flat, const, mode = [0], [], [], []
    for idx, (pos, deps, c, m) in enumerate(checks):
        kind[pos] = _pycore.CHECK
        check_of[pos] = idx
        deps_flat.extend(deps)
        ptr.append(len(deps_flat))
        const.append(c)
        mode.append(m)
    return _Plan(kind, check_of, np.array(ptr, np.int32), np.array(deps_flat, np.int32),
                 np.array(const, np.uint8), np.array(mode, np.int8))


def extract_message(u_hat, alloc: SubchannelAllocation, crc: Optional[CrcContext]) -> np.ndarray:
    """c (de-interleaved when needed) from input vectors, row-wise."""
    u_hat = np.atleast_2d(u_hat)
    c = u_hat[:, list(alloc.msg_positions)]
    if crc is not None and crc.interleaved:
        out = np.empty_like(c)
        out[:, input_interleaver_pattern(crc.K)] = c
        c = out
    return c


def scl_decode(llr, alloc: SubchannelAllocation, policy: DecoderPolicy = DecoderPolicy(),
               crc: Optional[CrcContext] = None) -> DecodeResult:
    llr = np.asarray(llr, dtype=np.float64)
    plan = _plan(alloc, crc, policy.pc_mode, policy.crc_mode)
    u, metric, failed, term, explored, counts = core.scl_core(
        llr, plan.kind, plan.check_of, plan.ptr, plan.deps, plan.const, plan.mode,
        policy.list_size, policy.early_termination)
    order = np.argsort(metric, kind="stable")
    c = extract_message(u, alloc, crc)
    if crc is not None:
        passed = crc_check_batch(c, crc.poly, crc.init_ones, crc.rnti)
    else:
        passed = np.ones(len(u), dtype=bool)
    passed &= failed == 0
    if term >= 0:
        passed[:] = False
    good = [p for p in order if passed[p]]
    best = good[0] if good else order[0]
    message = c[best, :crc.A] if crc is not None else c[best]
    return DecodeResult(
        message=message.copy(), crc_ok=bool(good), terminated_early=None if term < 0 else int(term),
        chosen_path_metric=float(metric[best]), paths_explored=int(explored),
        u_hat=u[best].copy(), path_counts=counts,
    )


# --- ML oracle ----------------------------------------------------------------

def all_messages(K: int) -> np.ndarray:
    """Every K-bit message, first bit most significant, ascending value."""
    vals = np.arange(1 << K, dtype=np.int64)
    return ((vals[:, None] >> np.arange(K - 1, -1, -1)) & 1).astype(np.uint8)


def codebook(alloc: SubchannelAllocation) -> tuple[np.ndarray, np.ndarray]:
    if alloc.K > ML_MAX_K:
        raise TooLarge(f"brute-force decoding limited to K <= {ML_MAX_K}")
    msgs = all_messages(alloc.K)
    u = np.stack([assemble_u(alloc, m) for m in msgs]) if alloc.pc else _place(alloc, msgs)
    return msgs, polar_transform(u)


def _place(alloc, msgs):
    u = np.zeros((len(msgs), alloc.N), dtype=np.uint8)
    u[:, list(alloc.msg_positions)] = msgs
    return u


def ml_decode_bruteforce(llr, alloc: SubchannelAllocation) -> np.ndarray:
    """Maximum-correlation message over all 2**K valid input vectors."""
    llr = np.asarray(llr, dtype=np.float64)
    msgs, words = codebook(alloc)
    score = (1.0 - 2.0 * words) @ llr
    return msgs[int(np.argmax(score))].copy()


def correlation(x, llr) -> float:
    return float((1.0 - 2.0 * np.asarray(x, dtype=np.float64)) @ np.asarray(llr, dtype=np.float64))
