#!/usr/bin/env python3
"""Benchmark the numba kernels against their numpy fallbacks.

Usage:
    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs once to compile (numba caches to disk, so later sessions
skip this), then ``repeat`` timed runs. The table reports the best time per
backend, the speedup and the max difference between the two outputs.
"""

import argparse
import time

import numpy as np

from weylkit import kernels
from weylkit.magnetic import MagneticSystem, SampledLineGrid, VectorPotential
from weylkit.phase_space import tables
from weylkit.weyl_core import WeylSystem


def _crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _best(func, args, repeat):
    out = func(*args)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(rng):
    t = tables(9, 1)
    b = _crandn(rng, 81 * 1)
    yield "character_sum N=9 d=1", "character_sum", (b, t.sigma, t.roots, 1 / 9)
    t = tables(5, 2)
    yield "character_sum N=5 d=2", "character_sum", (_crandn(rng, 625), t.sigma, t.roots, 1 / 25)
    ws = WeylSystem(9)
    tw = (_crandn(rng, ws.P), _crandn(rng, ws.P), ws.t.phase_sub, ws.t.sigma, ws._roots_h, ws.w)
    yield "twisted_convolution N=9", "twisted_convolution", tw
    ws = WeylSystem(5, 2)
    C = _crandn(rng, ws.P, ws.P)
    yield "row_gather N=5 d=2", "row_gather", (C, ws.t.phase_add)
    s = MagneticSystem(SampledLineGrid(2, 4.0, 32), VectorPotential.symmetric_gauge(1.0))
    src = np.ascontiguousarray(s.t.sub)
    vals = _crandn(rng, s.D, s.D)
    yield "translation_scatter n=32 d=2", "translation_scatter", (vals, s.gamma, src, 1.0)
    yield "translation_gather n=32 d=2", "translation_gather", (vals, s.gamma, src)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':32s} {'numba [s]':>11s} {'numpy [s]':>11s} {'speedup':>8s} {'max diff':>10s}")
    for label, name, kargs in cases(rng):
        t_nb, o_nb = _best(getattr(kernels, name + "_nb"), kargs, args.repeat)
        t_np, o_np = _best(getattr(kernels, name + "_np"), kargs, args.repeat)
        diff = float(np.max(np.abs(o_nb - o_np)))
        print(f"{label:32s} {t_nb:11.2e} {t_np:11.2e} {t_np / t_nb:8.1f} {diff:10.1e}")


if __name__ == "__main__":
    main()
