#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel under both backends on identical inputs, checks the
outputs agree exactly, and prints timing plus speedup. The numba backend
is skipped (with a note) when numba is not importable.

Usage: python3 benchmarks/kernel_benchmark.py [--rounds N] [--networks N]
"""

from __future__ import annotations

import argparse
import importlib
import time

import numpy as np

from prnet.behavior import philox_words
from prnet.packed import pack_network
from prnet.search import class_arrays, enumerate_response_classes
from prnet.strategy import sample_random_network

ORDER = np.array([2, 0, 1], dtype=np.int64)  # Charlie, Alice, Bob


def _unpack(packed):
    return (
        packed.counts, packed.n_own, packed.slot_box, packed.slot_side,
        packed.slot_pair, packed.slot_index, packed.roots, packed.node_slot,
        packed.node_input, packed.node_child0, packed.node_child1,
        packed.table_off, packed.out_bits,
    )


def bench(name, fn_by_backend, check_equal):
    results = {}
    for backend, fn in fn_by_backend.items():
        fn()  # warm-up (numba compiles here)
        t0 = time.perf_counter()
        results[backend] = fn()
        elapsed = time.perf_counter() - t0
        results[backend + "_time"] = elapsed
        print(f"  {backend:>6}: {elapsed * 1000:9.2f} ms")
    if "numba" in fn_by_backend and "numpy" in fn_by_backend:
        check_equal(results["numba"], results["numpy"])
        speedup = results["numpy_time"] / results["numba_time"]
        print(f"  outputs identical; numba speedup {speedup:.1f}x")
    print(f"[{name}] done\n")


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--rounds", type=int, default=1_000_000)
    parser.add_argument("--networks", type=int, default=2_000)
    args = parser.parse_args()

    backends = {"numpy": importlib.import_module("prnet.kernels.numpy_impl")}
    try:
        backends["numba"] = importlib.import_module("prnet.kernels.numba_impl")
    except ImportError:
        print("numba not importable; benchmarking the numpy fallback only\n")

    network = sample_random_network((2, 2, 2), seed=1)
    packed_args = _unpack(pack_network(network))

    print(f"[behavior_counts] {args.networks} networks at counts (1,1,1)")
    packed_list = [
        _unpack(pack_network(sample_random_network((1, 1, 1), s)))
        for s in range(args.networks)
    ]
    bench(
        "behavior_counts",
        {
            name: (lambda impl=impl: [impl.behavior_counts(*p, ORDER) for p in packed_list])
            for name, impl in backends.items()
        },
        lambda a, b: [np.testing.assert_array_equal(x, y) for x, y in zip(a, b)],
    )

    print(f"[mc_counts] {args.rounds} rounds at counts (2,2,2)")
    words = (philox_words(7, args.rounds) & np.uint64((1 << 63) - 1)).astype(np.int64)
    bench(
        "mc_counts",
        {
            name: (lambda impl=impl: impl.mc_counts(*packed_args, ORDER, words))
            for name, impl in backends.items()
        },
        lambda a, b: (
            np.testing.assert_array_equal(a[0], b[0]),
            np.testing.assert_array_equal(a[1], b[1]),
        ),
    )

    print("[search tables] 192-class response tables + exhaustive totals")
    inputs, outcomes = class_arrays(enumerate_response_classes())

    def search_pass(impl):
        ac, ab, par = impl.response_tables(inputs, outcomes)
        return impl.exhaustive_totals(ac, ab, par)

    bench(
        "search_tables",
        {name: (lambda impl=impl: search_pass(impl)) for name, impl in backends.items()},
        lambda a, b: np.testing.assert_array_equal(a, b),
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
