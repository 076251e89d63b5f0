"""Compare the compiled decoder core against the numpy fallback.

    python benchmarks/bench_core.py [--repeat 20]
"""
import argparse
import importlib
import timeit

import numpy as np

from nrpolar import _pycore
from nrpolar.config import select_params
from nrpolar.construct import build_frozen_set
from nrpolar.decode import DecoderPolicy, _plan

CASES = [("pucch", 32, 108), ("pucch", 200, 600), ("pdcch", 40, 432), ("pbch", 32, 864)]


def _load_compiled():
    try:
        return importlib.import_module("nrpolar._core")
    except ImportError:
        return None


def _inputs(channel, A, G, seed=0):
    cfg = select_params(channel, A, G)
    alloc = build_frozen_set(cfg)
    rng = np.random.default_rng(seed)
    llr = 2.0 * (1.0 + rng.normal(0, 0.8, cfg.N)) / 0.64
    return cfg, alloc, llr


def bench(core, repeat):
    rows = []
    for channel, A, G in CASES:
        cfg, alloc, llr = _inputs(channel, A, G)
        plan = _plan(alloc, None, DecoderPolicy().pc_mode, None)
        mask = alloc.frozen_mask()
        u = np.random.default_rng(1).integers(0, 2, (64, cfg.N), dtype=np.uint8)
        jobs = {
            "transform x64": lambda: core.polar_transform(u),
            "sc": lambda: core.sc_decode_llr(llr, mask),
            "scl L=8": lambda: core.scl_core(llr, plan.kind, plan.check_of, plan.ptr, plan.deps,
                                             plan.const, plan.mode, 8, False),
        }
        for name, fn in jobs.items():
            t = min(timeit.repeat(fn, number=1, repeat=repeat))
            rows.append((f"{channel} A={A} G={G} N={cfg.N}", name, t))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    compiled = _load_compiled()
    py = bench(_pycore, args.repeat)
    cy = bench(compiled, args.repeat) if compiled else [(c, n, float("nan")) for c, n, _ in py]
    print(f"{'case':<28}{'kernel':<16}{'python ms':>12}{'compiled ms':>14}{'speedup':>10}")
    for (case, name, tp), (_, _, tc) in zip(py, cy):
        print(f"{case:<28}{name:<16}{tp * 1e3:>12.3f}{tc * 1e3:>14.3f}{tp / tc:>10.1f}")
    if compiled is None:
        print("compiled core not built; run `python setup.py build_ext --inplace`")


if __name__ == "__main__":
    main()
