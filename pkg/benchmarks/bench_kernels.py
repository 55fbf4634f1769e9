#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the alignment scorer on batches of text-pair matrices and the pairwise
hinge trainer on synthetic preference pairs, then prints both backends side
by side with the measured agreement.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from cqarank._kernels import pure

try:
    from cqarank._kernels import _native
except ImportError:
    _native = None


def unit_rows(rng, n, d):
    mat = rng.normal(size=(n, d))
    mat /= np.linalg.norm(mat, axis=1, keepdims=True)
    return np.ascontiguousarray(mat)


def bench_cwasa(backend, pairs, repeats):
    best = float("inf")
    value = 0.0
    for _ in range(repeats):
        started = time.perf_counter()
        value = 0.0
        for a, b in pairs:
            value += backend.cwasa_match_total(a, b)
        best = min(best, time.perf_counter() - started)
    return best, value


def bench_trainer(backend, diffs, orders, cost, repeats):
    best = float("inf")
    w_out = None
    for _ in range(repeats):
        w = np.zeros(diffs.shape[1])
        t = 0
        started = time.perf_counter()
        for order in orders:
            t = backend.rank_hinge_epoch(w, diffs, order, cost, t)
        best = min(best, time.perf_counter() - started)
        w_out = w
    return best, w_out


def fmt_row(name, pure_s, native_s):
    if native_s is None:
        return f"{name:<28} {pure_s * 1e3:>10.1f} ms {'-':>12} {'-':>8}"
    return (
        f"{name:<28} {pure_s * 1e3:>10.1f} ms {native_s * 1e3:>9.1f} ms "
        f"{pure_s / native_s:>7.1f}x"
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=300, help="text pairs to align")
    parser.add_argument("--tokens", type=int, default=25, help="tokens per text")
    parser.add_argument("--dim", type=int, default=200, help="vector dimensions")
    parser.add_argument("--train-pairs", type=int, default=2000)
    parser.add_argument("--features", type=int, default=40)
    parser.add_argument("--epochs", type=int, default=200)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(99)
    align_pairs = [
        (unit_rows(rng, args.tokens, args.dim), unit_rows(rng, args.tokens, args.dim))
        for _ in range(args.pairs)
    ]
    diffs = np.ascontiguousarray(rng.normal(size=(args.train_pairs, args.features)))
    orders = [
        rng.permutation(args.train_pairs).astype(np.int64) for _ in range(args.epochs)
    ]

    print(f"{'kernel':<28} {'pure':>13} {'native':>12} {'speedup':>8}")
    label_cwasa = f"cwasa {args.pairs}x({args.tokens}x{args.dim})"
    pure_time, pure_total = bench_cwasa(pure, align_pairs, args.repeats)
    if _native is not None:
        native_time, native_total = bench_cwasa(_native, align_pairs, args.repeats)
        print(fmt_row(label_cwasa, pure_time, native_time))
        print(f"{'':<28} agreement: max diff {abs(pure_total - native_total):.2e}")
    else:
        print(fmt_row(label_cwasa, pure_time, None))

    label_train = f"trainer {args.epochs}x{args.train_pairs}p"
    pure_time, w_pure = bench_trainer(pure, diffs, orders, 4.0, args.repeats)
    if _native is not None:
        native_time, w_native = bench_trainer(_native, diffs, orders, 4.0, args.repeats)
        print(fmt_row(label_train, pure_time, native_time))
        diff = float(np.max(np.abs(w_pure - w_native)))
        print(f"{'':<28} agreement: max |w| diff {diff:.2e}")
    else:
        print(fmt_row(label_train, pure_time, None))

    if _native is None:
        print("\ncompiled extension not available; showing the fallback only")


if __name__ == "__main__":
    main()
