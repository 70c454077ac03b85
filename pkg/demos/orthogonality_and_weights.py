"""Orthogonality, weights and the additive neutrals."""

from pathlib import Path

from stellar import orthogonality as orth
from stellar.syntax import parse_constellation as P

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

program = P("+add(0, Y, Y); -add(X, Y, Z) +add(s(X), Y, s(Z));")
query = P("-add(s(s(0)), s(s(0)), R) R;")
for tag in orth.Tag:
    if tag is orth.Tag.STRUCTURAL:
        continue
    print(f"{tag.value:>9}:", orth.orthogonal(program, query, orth.OrthRel(tag)))
print("structural:", orth.structural_orthogonal(P("+a(X);"), P("X -a(f(Y));")))

for name in ("tensor", "par"):
    c = P((FIXTURES / f"{name}.stellar").read_text())
    print(f"weight of {name}: {orth.weight(c)}")

for name, which in [("top_unary", "top"), ("top_binary", "top"), ("zero", "zero")]:
    c = P((FIXTURES / f"{name}.stellar").read_text())
    print(f"{name} as {which}: {orth.check_neutral(c, which)}")
