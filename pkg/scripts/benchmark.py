#!/usr/bin/env python3
"""Enumeration-space benchmark: PTOP search against total-order search.

Runs both exhaustive solvers on unsatisfiable instances, where each must
visit its whole scaffold space, and reports leaves, wall time and the
leaf and speed ratios.  With --random it also runs the seeded bench suite
and prints the per-size summary table.

Usage:
    python scripts/benchmark.py [--n 10] [--instances 1] [--random 4..7]
"""

import argparse
import os
import sys
import time
from math import factorial

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from potsolver.algebra import LT
from potsolver.bench import BenchPlan, leaf_ratio_table, parse_size_range, run_bench
from potsolver.network import Instance
from potsolver.orders import ptop_count
from potsolver.solver import solve


def unsatisfiable_instance(n: int, offset: int) -> Instance:
    """Strict 3-cycle on three of the ``n`` variables; the rest are free.

    Args:
        n: Number of variables (at least 3)
        offset: Shifts which variables carry the cycle

    Returns:
        An instance no partial order satisfies
    """
    a, b, c = (offset % n, (offset + 1) % n, (offset + 2) % n)
    return Instance(n).add(a, b, LT).add(b, c, LT).add(c, a, LT)


def benchmark_exhaustion(n: int, instances: int) -> dict:
    """Time both scaffold enumerations to exhaustion.

    Args:
        n: Number of variables
        instances: Number of unsatisfiable instances

    Returns:
        Dictionary with benchmark results
    """
    print(f"🔬 Exhausting scaffolds for n={n} over {instances} instance(s)...")
    results = {'n': n, 'ptop_leaves': 0, 'total_leaves': 0, 'ptop_seconds': 0.0, 'total_seconds': 0.0}

    for idx in range(instances):
        ins = unsatisfiable_instance(n, idx)
        for algo in ('ptop', 'total'):
            print(f"   instance {idx}: {algo}...")
            start = time.perf_counter()
            answer = solve(ins, algo)
            results[f'{algo}_seconds'] += time.perf_counter() - start
            results[f'{algo}_leaves'] += answer.stats.leaves
            if answer.is_yes:
                raise RuntimeError(f"{algo} reported a model for an unsatisfiable instance")

    results['leaf_ratio'] = results['total_leaves'] / results['ptop_leaves']
    results['speedup'] = results['total_seconds'] / results['ptop_seconds']
    return results


def print_results(results: dict, instances: int):
    """Print benchmark results.

    Args:
        results: Benchmark results dictionary
        instances: Number of instances the totals cover
    """
    n = results['n']
    print("\n" + "=" * 70)
    print("📊 Benchmark Results")
    print("=" * 70)

    print(f"\n📦 Scaffold spaces (n={n}):")
    print(f"   PTOPs per instance: {ptop_count(n):,}")
    print(f"   Total orders per instance: {factorial(n):,}")

    print(f"\n🌲 Leaves visited:")
    print(f"   ptop:  {results['ptop_leaves'] // instances:,} per instance")
    print(f"   total: {results['total_leaves'] // instances:,} per instance")
    print(f"   ratio: {results['leaf_ratio']:.2f} (expected {2 ** (n // 2)})")

    print(f"\n⏱️  Wall time:")
    print(f"   ptop:  {results['ptop_seconds']:.2f}s")
    print(f"   total: {results['total_seconds']:.2f}s")
    print(f"   speedup: {results['speedup']:.2f}x")

    print("\n" + "=" * 70)


def main():
    """Main entry point."""
    parser = argparse.ArgumentParser(
        description="Compare PTOP and total-order enumeration"
    )
    parser.add_argument(
        '--n',
        type=int,
        default=10,
        help='Number of variables (default: 10)'
    )
    parser.add_argument(
        '--instances',
        type=int,
        default=1,
        help='Number of unsatisfiable instances (default: 1)'
    )
    parser.add_argument(
        '--random',
        default=None,
        help='Also run the seeded bench suite over this size range, e.g. 4..7'
    )

    args = parser.parse_args()

    print("🚀 potsolver Enumeration Benchmark")
    print("=" * 70)

    results = benchmark_exhaustion(args.n, args.instances)
    print_results(results, args.instances)

    if args.random:
        plan = BenchPlan(algos=['ptop', 'total'], sizes=parse_size_range(args.random), per_size=20)
        print(leaf_ratio_table(run_bench(plan)).to_string())

    print("\n✅ Benchmark complete!")


if __name__ == "__main__":
    main()
