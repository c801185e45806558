"""Random contracts: generation, checking, and CSV accounting.

Run from the repository root:  python3 demos/05_random_benchmark.py
"""
import sys

from rclcheck import oracle_verdict, check, render
from rclcheck.bench import BenchGroup, bench, write_csv
from rclcheck.generator import generate

# Generation is deterministic in the seed, so any failure replays.
spec = generate(individuals=3, actions=3, clauses=2, max_depth=3, seed=7)
print("--- a generated contract --------------------------------------")
print(render(spec))

# Small instances can be cross-checked against the exhaustive oracle,
# which re-decomposes from the root along every bounded trace.
spec = generate(individuals=2, actions=2, clauses=2, max_depth=3, seed=3)
print("engine:", check(spec).kind.value)
print("oracle:", "conflicts" if oracle_verdict(spec).conflict else "conflict-free")

# Benchmark groups record every run; out-of-budget checks show up as
# finished=False rather than disappearing from the numbers.
print("--- a tiny benchmark -------------------------------------------")
rows = bench(
    [BenchGroup(individuals=4, actions=4), BenchGroup(individuals=5, actions=4)],
    runs_per_group=3,
    budget=5_000,
)
write_csv(rows, sys.stdout)
