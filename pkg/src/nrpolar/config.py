"""Code parameter derivation for the NR control channels.

``select_params`` turns (channel, A, G) into a fully populated
:class:`CodeConfig`: segmentation, CRC choice, interleaver flags, parity-check
counts, mother code length and rate-matching mode.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Optional

from .errors import BoundsViolation, RateTooHigh

N_MIN_EXP = 5
PDCCH_MIN_A = 12


class ChannelKind(enum.Enum):
    UCI = "uci"    # PUCCH / PUSCH
    DCI = "dci"    # PDCCH
    PBCH = "pbch"


_CHANNEL_ALIASES = {
    "uci": ChannelKind.UCI,
    "pucch": ChannelKind.UCI,
    "pusch": ChannelKind.UCI,
    "dci": ChannelKind.DCI,
    "pdcch": ChannelKind.DCI,
    "pbch": ChannelKind.PBCH,
}


def parse_channel(channel) -> ChannelKind:
    if isinstance(channel, ChannelKind):
        return channel
    try:
        return _CHANNEL_ALIASES[str(channel).lower()]
    except KeyError:
        raise BoundsViolation(f"unknown channel {channel!r}") from None


class RmMode(enum.Enum):
    PUNCTURE = "puncture"
    SHORTEN = "shorten"
    REPEAT = "repeat"


class CrcPoly(enum.Enum):
    G6 = "g6"
    G11 = "g11"
    G24 = "g24"

    @property
    def length(self) -> int:
        return {"g6": 6, "g11": 11, "g24": 24}[self.value]


@dataclass(frozen=True)
class CodeConfig:
    channel: ChannelKind
    A: int                     # message bits as given by the caller
    G: int                     # payload bits
    segmented: bool
    A_prime: int               # per-segment message bits (after padding)
    E: int                     # per-segment codeword bits
    L: int
    crc_poly: CrcPoly
    crc_init_ones: bool
    rnti: Optional[int]
    I_IL: bool
    I_BIL: bool
    n_pc: int
    n_pc_wm: int
    K: int
    K_prime: int
    n1: int
    n2: int
    n_max: int
    n: int
    N: int
    rm_mode: RmMode
    U: int
    pad: int = 0               # zeros added to reach A = 12 (PDCCH only)
    pad_mode: str = "append"

    @property
    def n_segments(self) -> int:
        return 2 if self.segmented else 1

    @property
    def A_coded(self) -> int:
        """Message length including the PDCCH zero padding."""
        return self.A + self.pad

    def to_dict(self) -> dict:
        out = asdict(self)
        out["channel"] = self.channel.value
        out["crc_poly"] = self.crc_poly.value
        out["rm_mode"] = self.rm_mode.value
        return out


def segmentation_predicate(A: int, G: int) -> bool:
    return A >= 1013 or (A >= 360 and G >= 1088)


def rate_match_mode(K: int, E: int, N: int) -> RmMode:
    if E > N:
        return RmMode.REPEAT
    # K/E <= 7/16, kept in integers so the boundary is exact
    if 16 * K <= 7 * E:
        return RmMode.PUNCTURE
    return RmMode.SHORTEN


def _ceil_log2(x: int) -> int:
    return (x - 1).bit_length()


def mother_code_exponents(K: int, E: int, n_max: int) -> tuple[int, int, int]:
    """Return (n1, n2, n) for a code of dimension K matched to E bits."""
    log_e = math.log2(E)
    frac = log_e - math.floor(log_e)
    # floor only when K < 9E/16 also holds; otherwise keep the ceiling
    if frac < 0.17 and 16 * K < 9 * E:
        n1 = math.floor(log_e)
    else:
        n1 = _ceil_log2(E)
    n2 = _ceil_log2(8 * K)
    n = max(min(n1, n2, n_max), N_MIN_EXP)
    return n1, n2, n


def _check_bounds(channel: ChannelKind, A: int, G: int) -> None:
    if channel is ChannelKind.UCI:
        if not 12 <= A <= 1706:
            raise BoundsViolation(f"UCI message length A={A} outside [12, 1706]")
        g_min = 31 if A >= 20 else 18
        g_max = 16384 if (A >= 20 and segmentation_predicate(A, G)) else 8192
    elif channel is ChannelKind.DCI:
        if not 1 <= A <= 140:
            raise BoundsViolation(f"DCI message length A={A} outside [1, 140]")
        g_min, g_max = 25, 8192
    else:
        if A != 32:
            raise BoundsViolation(f"PBCH message length must be 32, got {A}")
        g_min = g_max = 864
    if not g_min <= G <= g_max:
        raise BoundsViolation(f"payload length G={G} outside [{g_min}, {g_max}]")
    if A > G:
        raise BoundsViolation(f"message length A={A} exceeds payload G={G}")


def select_params(channel, A: int, G: int, rnti: Optional[int] = None,
                  pad_mode: str = "append") -> CodeConfig:
    """Derive every code parameter for one (channel, A, G) instance."""
    channel = parse_channel(channel)
    A, G = int(A), int(G)
    _check_bounds(channel, A, G)
    if pad_mode not in ("append", "prepend"):
        raise ValueError("pad_mode must be 'append' or 'prepend'")
    if rnti is not None:
        if channel is not ChannelKind.DCI:
            raise BoundsViolation("RNTI masking applies to DCI only")
        if not 0 <= rnti < 1 << 16:
            raise BoundsViolation(f"RNTI {rnti} is not a 16-bit value")

    pad = 0
    if channel is ChannelKind.UCI:
        segmented = segmentation_predicate(A, G)
        L = 11 if A >= 20 else 6
        poly = CrcPoly.G11 if A >= 20 else CrcPoly.G6
        n_max, I_IL, I_BIL, init_ones = 10, False, True, False
    else:
        segmented = False
        L, poly = 24, CrcPoly.G24
        n_max, I_IL, I_BIL = 9, True, False
        init_ones = channel is ChannelKind.DCI
        if channel is ChannelKind.DCI and A < PDCCH_MIN_A:
            pad = PDCCH_MIN_A - A

    if segmented:
        # floor keeps G = 2E or 2E + 1 for concatenation
        A_prime, E = -(-A // 2), G // 2
    else:
        A_prime, E = A + pad, G

    n_pc = n_pc_wm = 0
    if channel is ChannelKind.UCI and A <= 19:
        n_pc = 3
        n_pc_wm = 1 if E - A > 175 else 0

    K = A_prime + L
    K_prime = K + n_pc
    n1, n2, n = mother_code_exponents(K, E, n_max)
    N = 1 << n
    if K_prime >= N:
        raise RateTooHigh(f"K'={K_prime} does not fit a mother code of length N={N}")
    mode = rate_match_mode(K, E, N)
    if mode is not RmMode.REPEAT and K_prime > E:
        raise RateTooHigh(f"K'={K_prime} exceeds the {E} transmitted bits")

    return CodeConfig(
        channel=channel, A=A, G=G, segmented=segmented, A_prime=A_prime, E=E,
        L=L, crc_poly=poly, crc_init_ones=init_ones, rnti=rnti, I_IL=I_IL,
        I_BIL=I_BIL, n_pc=n_pc, n_pc_wm=n_pc_wm, K=K, K_prime=K_prime, n1=n1,
        n2=n2, n_max=n_max, n=n, N=N, rm_mode=mode, U=abs(N - E), pad=pad,
        pad_mode=pad_mode,
    )
