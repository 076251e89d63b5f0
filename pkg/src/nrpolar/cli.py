"""Command-line interface.

Exit status is 0 on success, 2 for usage errors and 1 for domain errors.
Errors are reported on stderr as a single JSON object.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from .config import select_params
from .decode import AssistMode, DecoderPolicy
from .errors import PolarError
from .pipeline import decode, default_policy, encode
from .sim import ChannelModel, Modulation, bec_polarize, run_bler, run_far, write_csv

EXIT_DOMAIN = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit_error(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


def parse_bits(text: str, length: Optional[int] = None) -> np.ndarray:
    """Binary string (``0101``) or hex (``0x1f``, MSB first, trimmed to ``length``)."""
    t = text.strip().replace(" ", "").replace(",", "").replace("_", "")
    if t.lower().startswith("0x"):
        digits = t[2:]
        try:
            bits = [int(b) for d in digits for b in format(int(d, 16), "04b")]
        except ValueError:
            raise UsageError(f"invalid hex message {text!r}") from None
        if length is not None:
            if len(bits) < length:
                raise UsageError(f"hex message has {len(bits)} bits, need {length}")
            extra = len(bits) - length
            if any(bits[:extra]):
                raise UsageError("hex message has set bits beyond the message length")
            bits = bits[extra:]
        return np.array(bits, dtype=np.uint8)
    if not t or set(t) - {"0", "1"}:
        raise UsageError(f"message must be a binary or 0x-prefixed hex string, got {text!r}")
    return np.array([int(c) for c in t], dtype=np.uint8)


def parse_range(spec: str) -> list[float]:
    """``start:step:stop`` (inclusive) or a comma-separated list."""
    try:
        if ":" in spec:
            start, step, stop = (float(x) for x in spec.split(":"))
            if step <= 0:
                raise ValueError
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 10) for i in range(count)]
        return [float(x) for x in spec.split(",")]
    except ValueError:
        raise UsageError(f"invalid range {spec!r}; use start:step:stop or a,b,c") from None


def _read_soft(path: str) -> np.ndarray:
    text = sys.stdin.read() if path == "-" else open(path).read()
    return np.array([float(x) for x in text.replace(",", " ").split()])


def _add_code_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--channel", required=True, help="pucch, pusch, pdcch or pbch")
    p.add_argument("--A", type=int, required=True, help="message length")
    p.add_argument("--G", type=int, required=True, help="payload length")
    p.add_argument("--rnti", type=lambda s: int(s, 0), default=None, help="16-bit RNTI (DCI only)")


def _add_policy_args(p: argparse.ArgumentParser) -> None:
    modes = [m.value for m in AssistMode]
    p.add_argument("--list", type=int, default=8, dest="list_size", help="list size")
    p.add_argument("--pc-mode", choices=modes, default=None)
    p.add_argument("--crc-mode", choices=modes + ["none"], default=None)
    p.add_argument("--early-term", action="store_true")


def _policy(args, cfg) -> DecoderPolicy:
    base = default_policy(cfg, args.list_size)
    pc = AssistMode(args.pc_mode) if args.pc_mode else base.pc_mode
    if args.crc_mode is None:
        crc = base.crc_mode
    else:
        crc = None if args.crc_mode == "none" else AssistMode(args.crc_mode)
    early = args.early_term or (base.early_termination and args.crc_mode is None)
    return DecoderPolicy(list_size=args.list_size, pc_mode=pc, crc_mode=crc,
                         early_termination=early)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nrpolar", description="5G NR polar code toolkit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("info", help="print the derived code configuration as JSON")
    _add_code_args(p)

    p = sub.add_parser("encode", help="encode a message and print the payload bits")
    _add_code_args(p)
    p.add_argument("--msg", required=True, help="binary string or 0x hex")
    p.add_argument("--format", choices=["bits", "json"], default="bits")

    p = sub.add_parser("decode", help="decode soft values (LLRs) or hard bits")
    _add_code_args(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--llr", help="file of G LLRs, '-' for stdin")
    src.add_argument("--bits", help="G hard bits as a binary string")
    _add_policy_args(p)

    p = sub.add_parser("vectors", help="emit a full encoding trace as JSON")
    _add_code_args(p)
    p.add_argument("--msg", help="binary string or 0x hex (random if omitted)")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("simulate", help="Monte-Carlo BLER or FAR simulation, CSV output")
    _add_code_args(p)
    p.add_argument("--snr", default="0", help="Es/N0 points in dB (or erasure probabilities for bec)")
    p.add_argument("--modulation", choices=[m.value for m in Modulation], default="bpsk")
    p.add_argument("--frames", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--far", action="store_true", help="pure-noise false-alarm run")
    p.add_argument("--timing", action="store_true", help="fill the seconds column")
    p.add_argument("--out", help="output file (default stdout)")
    _add_policy_args(p)

    p = sub.add_parser("polarize", help="BEC synthetic-channel erasure probabilities as CSV")
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--sorted", action="store_true", help="sort by capacity, descending")
    return parser


def _cmd_info(args) -> None:
    cfg = select_params(args.channel, args.A, args.G, args.rnti)
    print(json.dumps(cfg.to_dict(), indent=2))


def _cmd_encode(args) -> None:
    cfg = select_params(args.channel, args.A, args.G, args.rnti)
    msg = parse_bits(args.msg, cfg.A)
    g = encode(cfg.channel, cfg.A, cfg.G, msg, config=cfg).g
    if args.format == "json":
        print(json.dumps({"G": cfg.G, "g": g.tolist()}))
    else:
        print("".join(map(str, g)))


def _cmd_decode(args) -> None:
    cfg = select_params(args.channel, args.A, args.G, args.rnti)
    if args.llr:
        llr = _read_soft(args.llr)
    else:
        llr = 1.0 - 2.0 * parse_bits(args.bits).astype(np.float64)
    res = decode(cfg.channel, cfg.A, cfg.G, llr, _policy(args, cfg), config=cfg)
    print(json.dumps({"msg": "".join(map(str, res.message)), "crc_ok": res.crc_ok,
                      "terminated_early": res.terminated_early}))


def _cmd_vectors(args) -> None:
    cfg = select_params(args.channel, args.A, args.G, args.rnti)
    if args.msg is None:
        msg = np.random.default_rng(args.seed).integers(0, 2, cfg.A, dtype=np.uint8)
    else:
        msg = parse_bits(args.msg, cfg.A)
    print(encode(cfg.channel, cfg.A, cfg.G, msg, config=cfg).to_json())


def _cmd_simulate(args) -> None:
    cfg = select_params(args.channel, args.A, args.G, args.rnti)
    if args.frames < 1:
        raise UsageError("--frames must be at least 1")
    policy = _policy(args, cfg)
    kind = Modulation(args.modulation)
    channels = [ChannelModel(kind, v) for v in parse_range(args.snr)]
    if args.far:
        reports = [run_far(cfg, policy, args.frames, args.seed, channels[0], args.timing)]
    else:
        reports = run_bler([cfg], channels, policy, args.frames, args.seed, args.timing)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(reports, fh)
    else:
        write_csv(reports, sys.stdout)


def _cmd_polarize(args) -> None:
    z = bec_polarize(args.delta, args.n)
    rows = list(enumerate(z))
    if args.sorted:
        rows.sort(key=lambda r: (r[1], r[0]))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["index", "erasure_probability", "capacity"])
    for i, e in rows:
        w.writerow([i, f"{e:.10g}", f"{1.0 - e:.10g}"])


COMMANDS = {
    "info": _cmd_info,
    "encode": _cmd_encode,
    "decode": _cmd_decode,
    "vectors": _cmd_vectors,
    "simulate": _cmd_simulate,
    "polarize": _cmd_polarize,
}


def _join_negative_values(argv: list[str]) -> list[str]:
    """Let ``--snr -3:1:0`` through; argparse would read ``-3:1:0`` as a flag."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if a in ("--snr", "--delta") and len(nxt) > 1 and nxt[0] == "-" and nxt[1] in "0123456789.":
            out.append(f"{a}={nxt}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        return _emit_error("usage", str(exc), EXIT_USAGE)
    except (PolarError, ValueError) as exc:
        return _emit_error(type(exc).__name__, str(exc), EXIT_DOMAIN)
    except OSError as exc:
        return _emit_error("io", str(exc), EXIT_DOMAIN)
    return 0


if __name__ == "__main__":
    sys.exit(main())
