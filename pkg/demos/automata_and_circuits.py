"""Words, automata and boolean circuits compiled to stars."""

import itertools
from pathlib import Path

from stellar import encode
from stellar.execution import Limits, execute, filter_coloured
from stellar.syntax import serialize

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
CLOSED = Limits(exclude_open=True)

nfa = encode.parse_nfa((FIXTURES / "ends00.nfa").read_text())
machine = encode.encode_nfa(nfa)
for n in range(4):
    for w in map("".join, itertools.product("01", repeat=n)):
        res = execute(machine + encode.encode_word(w), CLOSED)
        verdict = "accept" if filter_coloured(res.normal_form).stars else "reject"
        print(f"{w or 'ε':>4} {verdict}")

circ = encode.parse_circuit((FIXTURES / "em.circ").read_text())
res = execute(encode.encode_circuit(circ) + encode.pl_module(), Limits(exclude_open=True, exclude_covers=True))
print("X or not X:")
print(serialize(res.normal_form, brackets=True), end="")
