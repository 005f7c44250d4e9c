#!/usr/bin/env python3
"""
Benchmark tau table construction, the disk cache and coefficient lookups
"""

import random
import sys
import tempfile
import time

import eigenforms
from eigenforms import CoefficientSequence


def benchmark_build(n_max):
    """Time compute_tau from scratch"""
    start = time.time()
    table = eigenforms.compute_tau(n_max)
    end = time.time()

    print(f"Table Build Performance:")
    print(f"  - n_max: {n_max:,}")
    print(f"  - Build time: {(end - start):.2f}s")
    print(f"  - tau(n_max): {table[n_max]}")
    return table


def benchmark_cache(table):
    """Time a save/load round through the v1 cache file"""
    with tempfile.TemporaryDirectory() as tmp:
        path = eigenforms.cache_path(tmp)
        start = time.time()
        eigenforms.save_table(table, path)
        saved = time.time()
        loaded = eigenforms.load_table(path)
        end = time.time()
        size = path.stat().st_size

    print(f"\nCache Performance:")
    print(f"  - File size: {size / 1e6:.1f}MB")
    print(f"  - Save time: {(saved - start) * 1000:.1f}ms")
    print(f"  - Load + checksum time: {(end - saved) * 1000:.1f}ms")
    print(f"  - Tables equal: {loaded.tau == table.tau}")


def benchmark_lookups(table, num_lookups=10000):
    """Scalar versus vectorised coefficient lookups"""
    hecke = CoefficientSequence("hecke", table)
    ns = [random.randint(1, table.n_max) for _ in range(num_lookups)]

    start = time.time()
    for n in ns:
        _ = hecke(n)
    end = time.time()
    scalar = (end - start) / num_lookups * 1_000_000  # microseconds

    start = time.time()
    _ = hecke.at(ns)
    end = time.time()
    vector = (end - start) / num_lookups * 1_000_000

    print(f"\nLookup Performance (hecke):")
    print(f"  - Scalar lookup: {scalar:.3f} microseconds")
    print(f"  - Vectorised lookup: {vector:.3f} microseconds per entry")


if __name__ == "__main__":
    n_max = int(float(sys.argv[1])) if len(sys.argv) > 1 else 100_000
    print("Tau Table Performance Analysis")
    print("=" * 50)

    table = benchmark_build(n_max)
    benchmark_cache(table)
    benchmark_lookups(table)
