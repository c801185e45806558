"""Parsing RCL text and rendering it back.

Run from the repository root:  python3 demos/01_parsing_and_rendering.py
"""
from pathlib import Path

from rclcheck import parse, render, render_formula

CONTRACT = Path(__file__).resolve().parent.parent / "contracts" / "simple-example.rcl"

text = CONTRACT.read_text()
print("--- input ---------------------------------------------------")
print(text)

result = parse(text)
for diag in result.diagnostics:
    print("diagnostic:", diag)
spec = result.spec

# The alphabet is inferred from the clauses and the conflict header;
# nothing is declared up front.
print("--- alphabet ------------------------------------------------")
print("individuals:", ", ".join(sorted(spec.individuals)))
print("actions:    ", ", ".join(sorted(spec.actions)))
print("global conflict pairs:     ",
      sorted(tuple(sorted(p)) for p in spec.conflicts.global_pairs))
print("relativized conflict pairs:",
      sorted(tuple(sorted(p)) for p in spec.conflicts.relativized_pairs))

# Rendering emits canonical text that parses back to an equal spec.
print("--- canonical rendering --------------------------------------")
print(render(spec))

round_trip = parse(render(spec))
print("round-trip parses:", round_trip.ok)

# Individual clauses render too, e.g. for reports.
print("first clause:", render_formula(spec.clauses[0]))
