"""Unary addition as a constellation, and what happens when it diverges."""

from pathlib import Path

from stellar.diagram import fuse_all
from stellar.execution import Limits, execute, is_strongly_normalising
from stellar.syntax import parse_constellation, serialize

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

add = parse_constellation((FIXTURES / "add22.stellar").read_text())
res = execute(add)
print("2 + 2 ->", serialize(res.normal_form).strip(), f"({res.status})")

# the single saturated diagram, fused one edge at a time
(d,) = res.diagrams
_, steps = fuse_all(d)
print("\n".join(steps))

loop = parse_constellation((FIXTURES / "example7.stellar").read_text())
for k in (8, 16, 32):
    r = execute(loop, Limits(max_occurrences=k))
    print(f"cap {k:2}: {r.diagram_count} diagrams, {r.status}")
print("strongly normalising?", is_strongly_normalising(loop, Limits(max_occurrences=16)))
