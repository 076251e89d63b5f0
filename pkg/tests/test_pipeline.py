import json
import os
import subprocess
import sys

import numpy as np
import pytest

from grid import grid_configs
from nrpolar.config import RmMode, select_params
from nrpolar.decode import DecoderPolicy
from nrpolar.errors import LengthMismatch
from nrpolar.interleave import sub_block_interleave
from nrpolar.pipeline import (decode, default_policy, encode, join_segments,
                              prepare_decoder_input, segment_message)

JSON_KEYS = {"channel", "A", "G", "rnti", "msg", "a_prime", "c", "c_prime", "u", "d", "y", "e",
             "f", "g"}


def _check_lengths(tr):
    cfg = tr.config
    assert len(tr.a) == cfg.A and len(tr.g) == cfg.G
    for s in tr.segments:
        assert len(s.a_prime) == cfg.A_prime
        assert len(s.c) == len(s.c_prime) == cfg.K
        assert len(s.u) == len(s.d) == len(s.y) == cfg.N
        assert len(s.e) == len(s.f) == cfg.E


def test_pbch_trace():
    msg = np.random.default_rng(0).integers(0, 2, 32)
    tr = encode("pbch", 32, 864, msg)
    assert len(tr.g) == 864 and len(tr.segments) == 1
    _check_lengths(tr)


@pytest.mark.parametrize("label,cfg", grid_configs(), ids=lambda x: getattr(x, "channel", x))
def test_trace_lengths_grid(label, cfg):
    msg = np.random.default_rng(cfg.A).integers(0, 2, cfg.A)
    _check_lengths(encode(cfg.channel, cfg.A, cfg.G, msg, cfg.rnti, config=cfg))


def test_segmentation_split():
    msg = np.random.default_rng(1).integers(0, 2, 1200).astype(np.uint8)
    tr = encode("pusch", 1200, 4000, msg)
    assert len(tr.segments) == 2
    assert np.array_equal(tr.segments[0].a_prime, msg[:600])
    assert np.array_equal(tr.segments[1].a_prime, msg[600:])

    msg = np.random.default_rng(2).integers(0, 2, 1201).astype(np.uint8)
    tr = encode("pusch", 1201, 4001, msg)
    assert tr.segments[0].a_prime.tolist() == [0] + msg[:600].tolist()
    assert np.array_equal(tr.segments[1].a_prime, msg[600:])
    assert tr.g[-1] == 0 and len(tr.g) == 4001


def test_segment_join_round_trip():
    for ch, A, G in [("pusch", 1201, 4001), ("pusch", 1200, 4000), ("pdcch", 5, 100),
                     ("pucch", 40, 100)]:
        for pad_mode in ("append", "prepend"):
            if ch != "pdcch" and pad_mode == "prepend":
                continue
            cfg = select_params(ch, A, G, pad_mode=pad_mode)
            m = np.random.default_rng(A).integers(0, 2, A).astype(np.uint8)
            parts = segment_message(cfg, m)
            assert all(len(p) == cfg.A_prime for p in parts)
            assert np.array_equal(join_segments(cfg, parts), m)


def test_dci_padding_placement():
    m = np.ones(5, np.uint8)
    assert encode("pdcch", 5, 100, m).segments[0].a_prime.tolist() == [1] * 5 + [0] * 7
    cfg = select_params("pdcch", 5, 100, pad_mode="prepend")
    assert encode("pdcch", 5, 100, m, config=cfg).segments[0].a_prime.tolist() == [0] * 7 + [1] * 5


def test_zero_message_uci():
    tr = encode("pucch", 40, 200, np.zeros(40, np.uint8))
    assert not tr.segments[0].u.any() and not tr.g.any()


def test_determinism():
    m = np.random.default_rng(3).integers(0, 2, 40)
    a = encode("pdcch", 40, 300, m, rnti=0x1234).to_json()
    b = encode("pdcch", 40, 300, m, rnti=0x1234).to_json()
    assert a == b


def test_bad_message():
    with pytest.raises(LengthMismatch):
        encode("pucch", 40, 200, np.zeros(39, np.uint8))
    with pytest.raises(LengthMismatch):
        encode("pucch", 40, 200, np.full(40, 2))
    with pytest.raises(LengthMismatch):
        prepare_decoder_input("pucch", 40, 200, np.zeros(199))


@pytest.mark.parametrize("ch,A,G", [("pucch", 32, 100), ("pucch", 64, 120), ("pbch", 32, 864),
                                    ("pusch", 1201, 4001)])
def test_decoder_input_reencodes(ch, A, G):
    m = np.random.default_rng(4).integers(0, 2, A)
    tr = encode(ch, A, G, m)
    cfg = tr.config
    inputs = prepare_decoder_input(ch, A, G, 1.0 - 2.0 * tr.g)
    assert len(inputs) == cfg.n_segments
    for inp, seg in zip(inputs, tr.segments):
        assert len(inp.llr) == cfg.N
        y_llr = sub_block_interleave(inp.llr)
        hard = (y_llr < 0).astype(np.uint8)
        if cfg.rm_mode is RmMode.PUNCTURE:
            assert not y_llr[:cfg.U].any() and np.all(y_llr[cfg.U:] != 0)
            assert np.array_equal(hard[cfg.U:], seg.y[cfg.U:])
        else:
            assert np.array_equal(hard, seg.y)


def test_golden_json():
    tr = encode("pdcch", 20, 100, np.arange(20) % 2, rnti=0xABCD)
    d = json.loads(tr.to_json())
    assert JSON_KEYS <= set(d)
    assert d["rnti"] == 0xABCD and d["msg"] == (np.arange(20) % 2).tolist()
    assert len(d["c_prime"]) == 44 and len(d["g"]) == 100
    seg = json.loads(encode("pusch", 1201, 4001, np.zeros(1201)).to_json())
    assert len(seg["u"]) == 2 and len(seg["u"][0]) == select_params("pusch", 1201, 4001).N


@pytest.mark.parametrize("label,cfg", grid_configs()[::7], ids=lambda x: getattr(x, "channel", x))
def test_noiseless_sc_round_trip(label, cfg):
    rng = np.random.default_rng(5)
    policy = DecoderPolicy(list_size=1)
    for _ in range(20):
        m = rng.integers(0, 2, cfg.A).astype(np.uint8)
        g = encode(cfg.channel, cfg.A, cfg.G, m, cfg.rnti, config=cfg).g
        res = decode(cfg.channel, cfg.A, cfg.G, 1.0 - 2.0 * g, policy, config=cfg)
        assert res.crc_ok and np.array_equal(res.message, m)


def test_default_policy():
    assert default_policy(select_params("pucch", 40, 100)).crc_mode is None
    p = default_policy(select_params("pbch", 32, 864), 4)
    assert p.list_size == 4 and p.early_termination


def test_pure_python_round_trip():
    code = (
        "import numpy as np; from nrpolar.pipeline import encode, decode;"
        "from nrpolar._backend import IMPLEMENTATION as I;"
        "m = np.arange(40) % 3 == 0; g = encode('pdcch', 40, 200, m, rnti=9).g;"
        "r = decode('pdcch', 40, 200, 1 - 2.0 * g, rnti=9);"
        "print(I, r.crc_ok, bool((r.message == m).all()))"
    )
    env = dict(os.environ, NRPOLAR_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.split() == ["python", "True", "True"], out.stderr
