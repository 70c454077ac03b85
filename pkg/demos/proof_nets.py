"""Proof-structures: translation, tests against switchings, cut elimination."""

from pathlib import Path

from stellar import mll
from stellar.syntax import serialize

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(name):
    return mll.parse_ps((FIXTURES / f"{name}.ps").read_text(), name)


for name in ("example8", "example9", "identity"):
    ps = load(name)
    verdict = mll.check_correctness(ps, stop_early=False)
    print(f"{name}: {verdict}")
    for r in verdict.results:
        print(f"  {r.test.name}: {'pass' if r.passed else 'fail'} ({r.status})")

ps = load("example6")
print("vehicle:")
print(serialize(mll.vehicle(ps)), end="")
res = mll.cut_elimination(ps)
print("after cuts:", serialize(res.normal_form).strip())

# how many small structures are correct, by two different routes
family = list(mll.small_structures(max_axioms=2, max_connectives=4))
agree = sum(mll.check_correctness(p).correct == mll.dr_graph_oracle(p) for p in family)
print(f"{agree}/{len(family)} small structures agree with Danos-Regnier")
