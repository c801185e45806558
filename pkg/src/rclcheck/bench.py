"""Randomized benchmark runs with CSV accounting.

Every run is recorded, including the ones that exhaust their budget: an
unfinished check is a data point, not a dropped sample.
"""
from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from typing import IO, Iterable

from .automaton import BuildOptions
from .conflicts import VerdictKind, run_check
from .generator import generate

try:
    import resource
except ImportError:  # pragma: no cover - non-posix platforms
    resource = None


@dataclass(frozen=True)
class BenchGroup:
    """One experiment group: every run draws a fresh seed at these sizes."""

    individuals: int
    actions: int
    clauses: int = 3
    max_depth: int = 3
    label: str = ""

    def name(self) -> str:
        return self.label or f"i{self.individuals}-a{self.actions}"


CSV_FIELDS = (
    "group",
    "seed",
    "individuals",
    "actions",
    "clauses",
    "max_depth",
    "verdict",
    "conflicts",
    "states",
    "transitions",
    "time_s",
    "peak_rss_kb",
    "finished",
)


def _peak_rss_kb() -> int | None:
    if resource is None:
        return None
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss


def bench(
    groups: Iterable[BenchGroup],
    runs_per_group: int,
    base_seed: int = 0,
    budget: int | None = None,
    time_limit: float | None = None,
    complete: bool = False,
) -> list[dict]:
    """Generate, check and measure ``runs_per_group`` contracts per group."""
    rows: list[dict] = []
    seed = base_seed
    for group in groups:
        for _ in range(runs_per_group):
            spec = generate(
                individuals=group.individuals,
                actions=group.actions,
                clauses=group.clauses,
                max_depth=group.max_depth,
                seed=seed,
            )
            options = BuildOptions(
                complete=complete,
                max_states=budget if budget is not None else BuildOptions().max_states,
                max_transitions=(
                    budget if budget is not None else BuildOptions().max_transitions
                ),
                time_limit=time_limit,
            )
            started = time.perf_counter()
            outcome = run_check(spec, options)
            elapsed = time.perf_counter() - started
            verdict = outcome.verdict
            rss = _peak_rss_kb()
            rows.append(
                {
                    "group": group.name(),
                    "seed": seed,
                    "individuals": group.individuals,
                    "actions": group.actions,
                    "clauses": group.clauses,
                    "max_depth": group.max_depth,
                    "verdict": verdict.kind.value,
                    "conflicts": len(verdict.reports),
                    "states": outcome.automaton.n_states,
                    "transitions": len(outcome.automaton.transitions),
                    "time_s": f"{elapsed:.4f}",
                    "peak_rss_kb": rss if rss is not None else "",
                    "finished": verdict.kind is not VerdictKind.INCONCLUSIVE,
                }
            )
            seed += 1
    return rows


def write_csv(rows: list[dict], out: IO[str]) -> None:
    writer = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
