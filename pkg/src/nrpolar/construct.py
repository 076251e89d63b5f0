"""Frozen-set construction, parity-check allocation and input-vector assembly."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .config import CodeConfig, RmMode
from .datafiles import SEQUENCE_FILE, data_path, load_table, read_ints
from .errors import (AllocationIncomplete, BadN, Infeasible, LengthMismatch,
                     NotAPermutation, WrongLength)
from .interleave import sub_block_map
from .kernel import is_power_of_two, row_weight

SEQUENCE_LENGTH = 1024
PC_REGISTER_LENGTH = 5


class ReliabilitySequence(tuple):
    """Bit-channel indices ordered from least to most reliable."""

    def __new__(cls, values):
        values = tuple(int(v) for v in values)
        if len(values) != SEQUENCE_LENGTH:
            raise WrongLength(f"expected {SEQUENCE_LENGTH} entries, got {len(values)}")
        if sorted(values) != list(range(SEQUENCE_LENGTH)):
            raise NotAPermutation("sequence is not a permutation of 0..1023")
        return super().__new__(cls, values)


def load_sequence(path=None) -> ReliabilitySequence:
    if path is None:
        return default_sequence()
    return ReliabilitySequence(read_ints(path))


@lru_cache(maxsize=None)
def default_sequence() -> ReliabilitySequence:
    return ReliabilitySequence(load_table(SEQUENCE_FILE))


def extract_subsequence(seq, N: int) -> list[int]:
    if not (32 <= N <= SEQUENCE_LENGTH and is_power_of_two(N)):
        raise BadN(f"N must be a power of two in [32, 1024], got {N}")
    return [q for q in seq if q < N]


@dataclass(frozen=True)
class SubchannelAllocation:
    N: int
    frozen: frozenset
    info: frozenset
    pc: frozenset = frozenset()
    pc_wm: frozenset = frozenset()
    # info indices ordered least to most reliable
    reliability_order: tuple = ()
    msg_positions: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "msg_positions", tuple(sorted(self.info - self.pc)))

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.N, self.frozen, self.pc, self.pc_wm))
            object.__setattr__(self, "_hash", h)
        return h

    @property
    def K(self) -> int:
        return len(self.msg_positions)

    @property
    def K_prime(self) -> int:
        return len(self.info)

    def frozen_mask(self) -> np.ndarray:
        mask = np.zeros(self.N, dtype=np.uint8)
        mask[sorted(self.frozen)] = 1
        return mask

    @classmethod
    def from_frozen(cls, N: int, frozen, pc=(), pc_wm=()) -> "SubchannelAllocation":
        frozen = frozenset(int(i) for i in frozen)
        info = frozenset(range(N)) - frozen
        return cls(N=N, frozen=frozen, info=info, pc=frozenset(pc),
                   pc_wm=frozenset(pc_wm), reliability_order=tuple(sorted(info)))


def extra_freeze_limit(N: int, E: int) -> int:
    """T such that {0..T} is frozen when puncturing."""
    if 4 * E >= 3 * N:
        return -(-(3 * N - 2 * E) // 4) - 1
    return -(-(9 * N - 4 * E) // 16) - 1


def build_frozen_set(cfg: CodeConfig, seq=None, J=None) -> SubchannelAllocation:
    seq = default_sequence() if seq is None else seq
    return _build(cfg.N, cfg.E, cfg.K, cfg.K_prime, cfg.rm_mode, cfg.n_pc, cfg.n_pc_wm,
                  tuple(seq), None if J is None else tuple(int(j) for j in J))


@lru_cache(maxsize=512)
def _build(N, E, K, K_prime, mode, n_pc, n_pc_wm, seq, J) -> SubchannelAllocation:
    J = sub_block_map(N) if J is None else np.asarray(J)
    order = extract_subsequence(seq, N)
    U = N - E
    if mode is RmMode.PUNCTURE:
        q1 = {int(J[k]) for k in range(U)}
        # extra freezing only when bits are actually punctured
        q2 = set(range(extra_freeze_limit(N, E) + 1)) if U > 0 else set()
    elif mode is RmMode.SHORTEN:
        q1 = {int(J[k]) for k in range(E, N)}
        q2 = set()
    else:
        q1, q2 = set(), set()
    frozen = q1 | q2
    n_frozen = N - K_prime
    if len(frozen) > n_frozen:
        raise Infeasible(f"{len(frozen)} indices must be frozen but only {n_frozen} are available")
    for q in order:
        if len(frozen) == n_frozen:
            break
        if q not in frozen:
            frozen.add(q)
    info_order = [q for q in order if q not in frozen]  # least reliable first

    pc_lr = info_order[:n_pc - n_pc_wm]
    pc_wm = []
    if n_pc_wm:
        candidates = info_order[-K:]
        w_min = min(row_weight(q) for q in candidates)
        # ties go to the most reliable index
        pc_wm = [q for q in reversed(candidates) if row_weight(q) == w_min][:n_pc_wm]
    return SubchannelAllocation(
        N=N, frozen=frozenset(frozen), info=frozenset(info_order),
        pc=frozenset(pc_lr) | frozenset(pc_wm), pc_wm=frozenset(pc_wm),
        reliability_order=tuple(info_order),
    )


def compute_pc_bits(u_partial, alloc: SubchannelAllocation) -> np.ndarray:
    """Fill the parity-check positions using the length-5 cyclic register.

    Returns a copy of ``u_partial`` with every PC position set.
    """
    u = np.array(u_partial, dtype=np.uint8)
    if len(u) != alloc.N:
        raise AllocationIncomplete(f"input vector of length {len(u)} for N={alloc.N}")
    reg = [0] * PC_REGISTER_LENGTH
    for i in range(alloc.N):
        reg = reg[1:] + reg[:1]
        if i in alloc.info:
            if i in alloc.pc:
                u[i] = reg[0]
            else:
                reg[0] ^= int(u[i])
    return u


def pc_bits_closed_form(u_partial, alloc: SubchannelAllocation) -> np.ndarray:
    """Direct evaluation of each PC bit as a residue-class XOR.

    For PC index i with q = i // 5 and p = i % 5, XOR u[5j + p] for j from
    the previous PC index of the same residue (or 0) up to q - 1.  PC bits
    are evaluated in increasing order so the earlier one is already set.
    """
    u = np.array(u_partial, dtype=np.uint8)
    done = []
    for i in sorted(alloc.pc):
        q, p = divmod(i, PC_REGISTER_LENGTH)
        prev = [j for j in done if j % PC_REGISTER_LENGTH == p]
        i_pc = max(prev) if prev else 0
        acc = 0
        for j in range(i_pc // PC_REGISTER_LENGTH, q):
            acc ^= int(u[PC_REGISTER_LENGTH * j + p])
        u[i] = acc
        done.append(i)
    return u


def pc_dependencies(alloc: SubchannelAllocation) -> dict[int, list[int]]:
    """Message positions whose XOR gives each PC bit."""
    deps = {}
    for i in alloc.pc:
        p = i % PC_REGISTER_LENGTH
        deps[i] = [j for j in alloc.msg_positions if j < i and j % PC_REGISTER_LENGTH == p]
    return deps


def assemble_u(alloc: SubchannelAllocation, c_prime) -> np.ndarray:
    c_prime = np.asarray(c_prime, dtype=np.uint8)
    if c_prime.ndim != 1 or len(c_prime) != alloc.K:
        raise LengthMismatch(f"expected {alloc.K} message bits, got {c_prime.shape}")
    u = np.zeros(alloc.N, dtype=np.uint8)
    u[list(alloc.msg_positions)] = c_prime
    if alloc.pc:
        u = compute_pc_bits(u, alloc)
    return u
