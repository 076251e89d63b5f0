"""Channel models, Monte-Carlo BLER/FAR harness and BEC polarization.

Every frame draws from its own generator seeded by ``(seed, point, frame)``,
so results do not depend on execution order.
"""
from __future__ import annotations

import csv
import enum
import io
import math
import time
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import CodeConfig
from .decode import DecoderPolicy
from .pipeline import decode, encode
from .ratematch import DEFAULT_SATURATION

CSV_HEADER = ("config", "channel", "A", "G", "E", "N", "snr_db", "frames", "block_errors",
              "bit_errors", "false_alarms", "early_term_rate", "seconds")


def bec_polarize(delta: float, n: int) -> list[float]:
    """Erasure probabilities of the 2**n synthetic channels, in bit-channel index order."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"erasure probability {delta} outside [0, 1]")
    if n < 0:
        raise ValueError("n must be non-negative")
    z = np.array([delta], dtype=np.float64)
    for _ in range(n):
        out = np.empty(2 * len(z))
        out[0::2] = (2.0 - z) * z
        out[1::2] = z * z
        z = out
    return z.tolist()


class Modulation(enum.Enum):
    BEC = "bec"
    BPSK = "bpsk"
    QPSK = "qpsk"


@dataclass(frozen=True)
class ChannelModel:
    """A memoryless channel producing LLRs (positive favours bit 0).

    ``param`` is the erasure probability for BEC and Es/N0 in dB otherwise;
    ``math.inf`` dB gives a noiseless channel.
    """
    kind: Modulation
    param: float
    saturation: float = DEFAULT_SATURATION

    def __post_init__(self):
        if self.kind is Modulation.BEC and not 0.0 <= self.param <= 1.0:
            raise ValueError(f"erasure probability {self.param} outside [0, 1]")

    @property
    def sigma2(self) -> float:
        """Noise variance per real dimension for unit symbol energy."""
        return 1.0 / (2.0 * 10.0 ** (self.param / 10.0))

    def llr(self, bits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        bits = np.asarray(bits, dtype=np.uint8)
        x = 1.0 - 2.0 * bits
        if self.kind is Modulation.BEC:
            erased = rng.random(len(bits)) < self.param
            return np.where(erased, 0.0, x * self.saturation)
        if math.isinf(self.param):
            return x * self.saturation
        if self.kind is Modulation.BPSK:
            s2 = self.sigma2
            y = x + rng.normal(0.0, math.sqrt(s2), len(bits))
            return 2.0 * y / s2
        # Gray QPSK: each bit rides one real dimension at amplitude 1/sqrt(2)
        amp = 1.0 / math.sqrt(2.0)
        s2 = self.sigma2
        y = amp * x + rng.normal(0.0, math.sqrt(s2), len(bits))
        return 2.0 * amp * y / s2

    def noise_llr(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """LLRs of a receiver that sees noise only (nothing transmitted)."""
        if self.kind is Modulation.BEC:
            return np.where(rng.random(size) < 0.5, 1.0, -1.0) * self.saturation
        s2 = 1.0 if math.isinf(self.param) else self.sigma2
        return 2.0 * rng.normal(0.0, math.sqrt(s2), size) / s2


@dataclass(frozen=True)
class SimReport:
    config: str
    channel: str
    A: int
    G: int
    E: int
    N: int
    snr_db: float
    frames: int
    block_errors: int
    bit_errors: int
    false_alarms: int
    early_term_rate: float
    seconds: Optional[float] = None

    def __post_init__(self):
        if not 0 <= self.block_errors <= self.frames:
            raise ValueError("block errors must lie in [0, frames]")

    @property
    def bler(self) -> float:
        return self.block_errors / self.frames

    @property
    def far(self) -> float:
        return self.false_alarms / self.frames

    def row(self) -> list[str]:
        vals = []
        for f, v in zip(fields(self), astuple(self)):
            if v is None:
                vals.append("")
            elif isinstance(v, float):
                vals.append(f"{v:.6g}" if f.name != "seconds" else f"{v:.3f}")
            else:
                vals.append(str(v))
        return vals


def config_id(cfg: CodeConfig, policy: DecoderPolicy) -> str:
    return f"{cfg.channel.value}-A{cfg.A}-G{cfg.G}-L{policy.list_size}"


def frame_rng(seed: int, point: int, frame: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, point, frame]))


def _check_frames(frames: int) -> None:
    if frames < 1:
        raise ValueError("at least one frame is required")


def simulate_point(cfg: CodeConfig, channel: ChannelModel, policy: DecoderPolicy,
                   frames: int, seed: int, point: int = 0, timing: bool = False) -> SimReport:
    """BLER at one channel operating point."""
    _check_frames(frames)
    t0 = time.perf_counter()
    blk = bit = fa = et = 0
    for k in range(frames):
        rng = frame_rng(seed, point, k)
        msg = rng.integers(0, 2, cfg.A, dtype=np.uint8)
        g = encode(cfg.channel, cfg.A, cfg.G, msg, cfg.rnti, config=cfg).g
        res = decode(cfg.channel, cfg.A, cfg.G, channel.llr(g, rng), policy, config=cfg)
        nerr = int(np.count_nonzero(res.message != msg))
        if nerr:
            blk += 1
            bit += nerr
            fa += res.crc_ok
        et += res.terminated_early
    return SimReport(config_id(cfg, policy), cfg.channel.value, cfg.A, cfg.G, cfg.E, cfg.N,
                     float(channel.param), frames, blk, bit, fa, et / frames,
                     time.perf_counter() - t0 if timing else None)


def run_bler(configs: Iterable[CodeConfig], channels: Sequence[ChannelModel],
             policy: DecoderPolicy, frames: int, seed: int, timing: bool = False) -> list[SimReport]:
    """Sweep every config over every channel point.  Reports come back sorted."""
    _check_frames(frames)
    reports = []
    for cfg in configs:
        for p, ch in enumerate(channels):
            reports.append(simulate_point(cfg, ch, policy, frames, seed, p, timing))
    return sort_reports(reports)


def run_far(cfg: CodeConfig, policy: DecoderPolicy, frames: int, seed: int,
            channel: Optional[ChannelModel] = None, timing: bool = False) -> SimReport:
    """Feed pure noise and count decodes that pass the CRC.

    Nothing is transmitted, so block and bit error counts are reported as 0.
    """
    _check_frames(frames)
    channel = channel or ChannelModel(Modulation.BPSK, 0.0)
    t0 = time.perf_counter()
    fa = et = 0
    for k in range(frames):
        rng = frame_rng(seed, 0, k)
        res = decode(cfg.channel, cfg.A, cfg.G, channel.noise_llr(cfg.G, rng), policy, config=cfg)
        fa += res.crc_ok
        et += res.terminated_early
    return SimReport(config_id(cfg, policy), cfg.channel.value, cfg.A, cfg.G, cfg.E, cfg.N,
                     float(channel.param), frames, 0, 0, fa, et / frames,
                     time.perf_counter() - t0 if timing else None)


def sort_reports(reports: Iterable[SimReport]) -> list[SimReport]:
    return sorted(reports, key=lambda r: (r.config, r.snr_db))


def write_csv(reports: Iterable[SimReport], fh=None) -> str:
    """Serialize reports; returns the text and also writes it to ``fh`` if given."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in sort_reports(reports):
        w.writerow(r.row())
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))

