"""End-to-end encoding chain and the mirrored decoder front-end.

Encode order: segmentation, CRC (+ RNTI mask), input interleaver, subchannel
allocation and PC bits, polar transform, sub-block interleaver, rate
matching, channel interleaver, concatenation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import ChannelKind, CodeConfig, select_params
from .construct import SubchannelAllocation, assemble_u, build_frozen_set
from .crc import crc_attach, rnti_mask
from .decode import CrcContext, DecodeResult, DecoderPolicy, scl_decode
from .errors import LengthMismatch
from .interleave import (channel_deinterleave, channel_interleave, input_interleave,
                         sub_block_deinterleave, sub_block_interleave)
from .kernel import polar_transform
from .ratematch import DEFAULT_SATURATION, Domain, concatenate, de_rate_match, rate_match, split


@dataclass
class SegmentTrace:
    a_prime: np.ndarray
    c: np.ndarray
    c_prime: np.ndarray
    u: np.ndarray
    d: np.ndarray
    y: np.ndarray
    e: np.ndarray
    f: np.ndarray


@dataclass
class EncodeTrace:
    config: CodeConfig
    allocation: SubchannelAllocation
    a: np.ndarray
    segments: list[SegmentTrace]
    g: np.ndarray = field(default=None)

    def to_json_dict(self, stages=("a_prime", "c", "c_prime", "u", "d", "y", "e", "f")) -> dict:
        cfg = self.config
        out = {"channel": cfg.channel.value, "A": cfg.A, "G": cfg.G, "rnti": cfg.rnti,
               "segments": cfg.n_segments, "msg": self.a.tolist()}
        for name in stages:
            vecs = [getattr(s, name).tolist() for s in self.segments]
            out[name] = vecs[0] if len(vecs) == 1 else vecs
        out["g"] = self.g.tolist()
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_json_dict(), **kw)


def crc_context(cfg: CodeConfig) -> CrcContext:
    return CrcContext(A=cfg.A_prime, poly=cfg.crc_poly, init_ones=cfg.crc_init_ones,
                      rnti=cfg.rnti, interleaved=cfg.I_IL)


def segment_message(cfg: CodeConfig, msg: np.ndarray) -> list[np.ndarray]:
    """Split (and pad) the A message bits into per-segment A' vectors."""
    if cfg.segmented:
        half = cfg.A // 2
        first = msg[:half]
        if cfg.A % 2:
            first = np.concatenate([np.zeros(1, np.uint8), first])
        return [first, msg[half:]]
    if cfg.pad:
        zeros = np.zeros(cfg.pad, np.uint8)
        parts = [msg, zeros] if cfg.pad_mode == "append" else [zeros, msg]
        return [np.concatenate(parts)]
    return [msg]


def join_segments(cfg: CodeConfig, parts: list[np.ndarray]) -> np.ndarray:
    """Inverse of :func:`segment_message`."""
    if cfg.segmented:
        first = parts[0][1:] if cfg.A % 2 else parts[0]
        return np.concatenate([first, parts[1]])
    if cfg.pad:
        return parts[0][:cfg.A] if cfg.pad_mode == "append" else parts[0][cfg.pad:]
    return parts[0]


def encode_segment(cfg: CodeConfig, alloc: SubchannelAllocation, a_prime) -> SegmentTrace:
    a_prime = np.asarray(a_prime, dtype=np.uint8)
    c = crc_attach(a_prime, cfg.crc_poly, cfg.crc_init_ones)
    if cfg.rnti is not None:
        c = rnti_mask(c, cfg.rnti, cfg.A_prime)
    c_prime = input_interleave(c) if cfg.I_IL else c.copy()
    u = assemble_u(alloc, c_prime)
    d = polar_transform(u)
    y = sub_block_interleave(d)
    e = rate_match(y, cfg.E, cfg.rm_mode)
    f = channel_interleave(e) if cfg.I_BIL else e.copy()
    return SegmentTrace(a_prime, c, c_prime, u, d, y, e, f)


def encode(channel, A: int, G: int, msg, rnti: Optional[int] = None,
           config: Optional[CodeConfig] = None) -> EncodeTrace:
    cfg = config or select_params(channel, A, G, rnti)
    msg = np.asarray(msg, dtype=np.uint8).ravel()
    if len(msg) != cfg.A:
        raise LengthMismatch(f"expected {cfg.A} message bits, got {len(msg)}")
    if np.any(msg > 1):
        raise LengthMismatch("message must be binary")
    alloc = build_frozen_set(cfg)
    segs = [encode_segment(cfg, alloc, part) for part in segment_message(cfg, msg)]
    g = concatenate(segs[0].f, segs[1].f, cfg.G) if cfg.segmented else segs[0].f.copy()
    return EncodeTrace(cfg, alloc, msg.copy(), segs, g)


@dataclass
class DecoderInput:
    llr: np.ndarray            # length N, mother-code order (before sub-block interleaving)
    config: CodeConfig
    allocation: SubchannelAllocation


def prepare_decoder_input(channel, A: int, G: int, g_soft, rnti: Optional[int] = None,
                          domain: Domain = Domain.LLR, saturation: float = DEFAULT_SATURATION,
                          config: Optional[CodeConfig] = None) -> list[DecoderInput]:
    """Invert concatenation, channel interleaving, rate matching and sub-block interleaving."""
    cfg = config or select_params(channel, A, G, rnti)
    g_soft = np.asarray(g_soft)
    if len(g_soft) != cfg.G:
        raise LengthMismatch(f"expected {cfg.G} soft values, got {len(g_soft)}")
    alloc = build_frozen_set(cfg)
    parts = list(split(g_soft, cfg.G)) if cfg.segmented else [g_soft]
    out = []
    for f in parts:
        e = channel_deinterleave(f) if cfg.I_BIL else f
        y = de_rate_match(e, cfg.N, cfg.rm_mode, domain, saturation)
        out.append(DecoderInput(sub_block_deinterleave(y), cfg, alloc))
    return out


@dataclass
class FrameResult:
    message: np.ndarray
    crc_ok: bool
    segments: list[DecodeResult]

    @property
    def terminated_early(self) -> bool:
        return any(s.terminated_early is not None for s in self.segments)


def decode(channel, A: int, G: int, g_llr, policy: DecoderPolicy = DecoderPolicy(),
           rnti: Optional[int] = None, config: Optional[CodeConfig] = None) -> FrameResult:
    """Full receive chain: soft payload in, message bits out."""
    cfg = config or select_params(channel, A, G, rnti)
    inputs = prepare_decoder_input(cfg.channel, cfg.A, cfg.G, g_llr, config=cfg)
    ctx = crc_context(cfg)
    results = [scl_decode(inp.llr, inp.allocation, policy, ctx) for inp in inputs]
    message = join_segments(cfg, [r.message for r in results])
    return FrameResult(message, all(r.crc_ok for r in results), results)


def default_policy(channel, list_size: int = 8) -> DecoderPolicy:
    """Assistant-bit handling used in the reference simulations.

    PC bits are dynamically frozen; distributed CRC bits keep failing paths
    and trigger early termination.
    """
    if isinstance(channel, CodeConfig):
        channel = channel.channel
    if channel in (ChannelKind.DCI, ChannelKind.PBCH):
        from .decode import AssistMode
        return DecoderPolicy(list_size=list_size, crc_mode=AssistMode.KEEP_FAILED_PATHS,
                             early_termination=True)
    return DecoderPolicy(list_size=list_size)
