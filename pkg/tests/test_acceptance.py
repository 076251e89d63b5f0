"""Acceptance suite: twelve end-to-end criteria, one status line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also repeated in the terminal summary.
"""
import math
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from grid import grid_configs
from nrpolar.config import RmMode, select_params
from nrpolar.construct import (SubchannelAllocation, assemble_u, build_frozen_set,
                               compute_pc_bits, default_sequence, pc_bits_closed_form)
from nrpolar.decode import DecoderPolicy, correlation, ml_decode_bruteforce, sc_decode_bec, scl_decode
from nrpolar.interleave import (channel_deinterleave, channel_interleave,
                                channel_interleaver_pattern, input_deinterleave, input_interleave,
                                input_interleaver_pattern, is_permutation, sub_block_deinterleave,
                                sub_block_interleave, sub_block_map)
from nrpolar.kernel import dense_gn, dense_transform, polar_transform
from nrpolar.pipeline import decode, default_policy, encode
from nrpolar.ratematch import ERASED
from nrpolar.sim import ChannelModel, Modulation, bec_polarize, frame_rng, run_bler, run_far

RESULTS = {}


def report(capsys, n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    with capsys.disabled():
        print("\n" + line)
    return ok


def toy(N, K):
    order = [q for q in default_sequence() if q < N]
    return SubchannelAllocation.from_frozen(N, order[:N - K])


def test_01_encode_vector(capsys):
    alloc = SubchannelAllocation.from_frozen(8, {0, 1, 2, 4})
    msg = [1, 0, 1, 1]
    polar_transform(assemble_u(alloc, msg))
    best = math.inf
    for _ in range(50):
        t0 = time.perf_counter()
        u = assemble_u(alloc, msg)
        d = polar_transform(u)
        best = min(best, time.perf_counter() - t0)
    ok = (u.tolist() == [0, 0, 0, 1, 0, 0, 1, 1] and d.tolist() == [1, 0, 1, 0, 0, 1, 0, 1]
          and best < 1e-3)
    assert report(capsys, 1, ok, f"d={d.tolist()} in {best * 1e6:.1f} us")


def test_02_bec_decode(capsys):
    e = ERASED
    u = sc_decode_bec([e, 0, e, 0, e, 1, 0, 1], {0, 1, 2, 4})
    ok = u.tolist() == [0, 0, 0, 1, 0, 0, 1, 1]
    assert report(capsys, 2, ok, f"u_hat={u.tolist()}")


@pytest.mark.xfail(strict=True, reason="the two extreme printed labels (0.99, 0.01) are 0.0061 "
                                       "from the exact values 0.9961 and 0.0039")
def test_03_bec_reliabilities(capsys):
    printed = np.array([0.99, 0.88, 0.81, 0.32, 0.68, 0.19, 0.12, 0.01])
    z = np.array(bec_polarize(0.5, 3))
    diff = np.abs(z - printed)
    ok = bool(np.all(diff <= 0.005))
    report(capsys, 3, ok, f"max |delta - printed| = {diff.max():.4f} at indices "
                          f"{np.flatnonzero(diff > 0.005).tolist()} (tolerance 0.005)")
    assert ok


def test_04_transform(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    bad = 0
    for n in range(5, 11):
        N = 1 << n
        G = dense_gn(n)
        u = rng.integers(0, 2, (10_000, N), dtype=np.uint8)
        d = polar_transform(u)
        bad += int(np.any(polar_transform(d) != u, axis=1).sum())
        bad += int(np.any(dense_transform(u, G) != d, axis=1).sum())
    dt = time.perf_counter() - t0
    assert report(capsys, 4, bad == 0 and dt < 30, f"{bad} mismatches, {dt:.1f} s")


def test_05_round_trip(capsys):
    t0 = time.perf_counter()
    grid = grid_configs()
    modes = {cfg.rm_mode for _, cfg in grid}
    labels = {label for label, _ in grid}
    seg = {cfg.n_segments > 1 for _, cfg in grid}
    pc = {cfg.n_pc > 0 for _, cfg in grid}
    assert len(grid) >= 60 and modes == set(RmMode) and seg == pc == {True, False}
    assert labels == {"pucch", "pusch", "pdcch", "pbch"}
    failed = []
    for i, (label, cfg) in enumerate(grid):
        policy = default_policy(cfg, 8)
        for k in range(200):
            m = frame_rng(5, i, k).integers(0, 2, cfg.A, dtype=np.uint8)
            g = encode(cfg.channel, cfg.A, cfg.G, m, cfg.rnti, config=cfg).g
            llr = ChannelModel(Modulation.BPSK, math.inf).llr(g, None)
            res = decode(cfg.channel, cfg.A, cfg.G, llr, policy, cfg.rnti, config=cfg)
            if not (res.crc_ok and np.array_equal(res.message, m)):
                failed.append((label, cfg.A, cfg.G, k))
    dt = time.perf_counter() - t0
    ok = not failed and dt < 300
    assert report(capsys, 5, ok, f"{len(grid)} configs x 200 frames, {len(failed)} failures, "
                                 f"{dt:.1f} s")


def test_06_pc_closed_form(capsys):
    G_points = np.linspace(40, 1000, 20).astype(int)
    rng = np.random.default_rng(6)
    bad = checked = 0
    for A in range(12, 20):
        for G in G_points:
            alloc = build_frozen_set(select_params("pucch", A, int(G)))
            assert alloc.pc
            for _ in range(100):
                u = np.zeros(alloc.N, np.uint8)
                u[list(alloc.msg_positions)] = rng.integers(0, 2, alloc.K)
                a = compute_pc_bits(u, alloc)
                b = pc_bits_closed_form(u, alloc)
                bad += not np.array_equal(a, b)
                checked += 1
    assert report(capsys, 6, bad == 0, f"{bad}/{checked} disagreements")


def _round_trips(rng, n, fwd, inv, perm):
    x = rng.integers(0, 1 << 20, n)
    y = fwd(x)
    return (np.array_equal(inv(y), x) and np.array_equal(y, x[perm])
            and np.array_equal(fwd(inv(x)), x))


def test_07_interleavers(capsys):
    rng = np.random.default_rng(7)
    classes = {
        "input short": lambda: int(rng.integers(1, 33)),
        "input mid": lambda: int(rng.integers(33, 140)),
        "input max": lambda: int(rng.integers(140, 165)),
        "sub-block short": lambda: 1 << int(rng.integers(5, 7)),
        "sub-block mid": lambda: 1 << int(rng.integers(7, 9)),
        "sub-block long": lambda: 1 << int(rng.integers(9, 11)),
        "channel short": lambda: int(rng.integers(1, 64)),
        "channel mid": lambda: int(rng.integers(64, 1024)),
        "channel long": lambda: int(rng.integers(1024, 8193)),
    }
    fails = 0
    for name, draw in classes.items():
        for _ in range(1000):
            n = draw()
            if name.startswith("input"):
                perm = input_interleaver_pattern(n)
                ok = _round_trips(rng, n, lambda v: input_interleave(v, n),
                                  lambda v: input_deinterleave(v, n), perm)
            elif name.startswith("sub-block"):
                perm = sub_block_map(n)
                ok = _round_trips(rng, n, sub_block_interleave, sub_block_deinterleave, perm)
            else:
                perm = channel_interleaver_pattern(n)
                ok = _round_trips(rng, n, lambda v: channel_interleave(v, n),
                                  lambda v: channel_deinterleave(v, n), perm)
            fails += not (ok and is_permutation(perm, n))
    assert report(capsys, 7, fails == 0,
                  f"{len(classes)} length classes x 1000 vectors, {fails} failures")


def test_08_shorten_tail(capsys):
    configs = [cfg for _, cfg in grid_configs() if cfg.rm_mode is RmMode.SHORTEN]
    bad = 0
    for i, cfg in enumerate(configs):
        for k in range(1000):
            m = frame_rng(8, i, k).integers(0, 2, cfg.A, dtype=np.uint8)
            tr = encode(cfg.channel, cfg.A, cfg.G, m, cfg.rnti, config=cfg)
            bad += sum(int(s.y[cfg.E:].any()) for s in tr.segments)
    assert report(capsys, 8, bad == 0 and len(configs) > 0,
                  f"{len(configs)} shorten configs x 1000 frames, {bad} nonzero tails")


def test_09_ml_agreement(capsys):
    details, total_bad = [], 0
    for N, K in [(8, 4), (16, 8)]:
        alloc = toy(N, K)
        policy = DecoderPolicy(list_size=2 ** K)
        ch = ChannelModel(Modulation.BPSK, 2.0)
        bad = ties = 0
        for k in range(1000):
            rng = frame_rng(9, N, k)
            m = rng.integers(0, 2, K, dtype=np.uint8)
            llr = ch.llr(polar_transform(assemble_u(alloc, m)), rng)
            scl = scl_decode(llr, alloc, policy).message
            ml = ml_decode_bruteforce(llr, alloc)
            if np.array_equal(scl, ml):
                continue
            a = correlation(polar_transform(assemble_u(alloc, scl)), llr)
            b = correlation(polar_transform(assemble_u(alloc, ml)), llr)
            if math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-9):
                ties += 1
            else:
                bad += 1
        total_bad += bad
        details.append(f"({N},{K}) {bad} disagreements, {ties} ties")
    assert report(capsys, 9, total_bad == 0, "; ".join(details))


def test_10_list_gain(capsys):
    cfg = select_params("pucch", 32, 108)
    ch = [ChannelModel(Modulation.BPSK, -2.0)]
    frames = 10_000
    sc = run_bler([cfg], ch, DecoderPolicy(1), frames, 10)[0].bler
    scl = run_bler([cfg], ch, DecoderPolicy(8), frames, 10)[0].bler
    sigma = math.sqrt((sc * (1 - sc) + scl * (1 - scl)) / frames)
    ok = 0.05 <= sc <= 0.2 and sc - scl > 3 * sigma
    assert report(capsys, 10, ok, f"-2 dB: SC BLER {sc:.4f}, SCL8+CRC BLER {scl:.4f}, "
                                  f"gap {(sc - scl) / sigma:.1f} sigma")


def test_11_false_alarm(capsys):
    cfg = select_params("pucch", 32, 108)
    assert cfg.crc_poly.length == 11
    r = run_far(cfg, DecoderPolicy(1), 100_000, 11)
    expect = 2.0 ** -11
    ok = expect / 3 <= r.far <= expect * 3
    assert report(capsys, 11, ok, f"FAR {r.far:.2e} vs {expect:.2e} "
                                  f"({r.false_alarms} alarms in {r.frames} frames)")


def test_12_reproducible_csv(capsys, tmp_path):
    argv = [sys.executable, "-m", "nrpolar", "simulate", "--channel", "pucch", "--A", "32",
            "--G", "108", "--snr", "-3:1:0", "--frames", "300", "--seed", "12", "--list", "8"]
    outs = []
    for k in range(2):
        path = tmp_path / f"run{k}.csv"
        subprocess.run(argv + ["--out", str(path)], check=True, env=dict(os.environ))
        outs.append(Path(path).read_bytes())
    ok = outs[0] == outs[1] and outs[0].count(b"\n") == 5
    assert report(capsys, 12, ok, f"{len(outs[0])} bytes, identical={outs[0] == outs[1]}")
