"""Orthogonality, finite behaviour samples, neutral test batteries and weights.

Behaviours proper are infinite, so everything here works on finite samples:
a :class:`BehaviourSample` is just a list of constellations and no
biorthogonal closure is ever computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import networkx as nx

from stellar.core import (
    Constellation,
    Fn,
    Kind,
    Star,
    canonical_constellation,
    classify,
    is_epure,
    is_polarised,
    matchable,
    structure_profile,
)
from stellar.execution import Limits, execute, filter_coloured, is_strongly_normalising
from stellar.syntax import parse_constellation


class Truth(Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value

    @classmethod
    def of(cls, b: bool) -> "Truth":
        return cls.TRUE if b else cls.FALSE


class Tag(Enum):
    FINITE = "finite"
    SINGLETON = "singleton"
    NONEMPTY = "nonempty"
    STRUCTURAL = "structural"


@dataclass(frozen=True)
class OrthRel:
    tag: Tag = Tag.FINITE
    limits: Limits = field(default_factory=Limits)
    down: bool = False  # keep only uncoloured stars before judging


class PreconditionError(ValueError):
    """The pair is outside the domain of the relation."""


def orthogonal(c1: Constellation, c2: Constellation, rel: Optional[OrthRel] = None) -> Truth:
    rel = rel or OrthRel()
    if rel.tag is Tag.STRUCTURAL:
        return structural_orthogonal(c1, c2, rel.limits)
    union = c1 + c2
    res = execute(union, rel.limits)
    nf = filter_coloured(res.normal_form) if rel.down else res.normal_form
    if rel.tag is Tag.NONEMPTY:
        if nf.stars:
            return Truth.TRUE
        return Truth.FALSE if res.exhaustive else Truth.UNKNOWN
    if not res.exhaustive:
        # a pumping witness settles infinity; otherwise we cannot tell
        verdict = is_strongly_normalising(union, rel.limits)
        return Truth.FALSE if verdict.kind == "No" else Truth.UNKNOWN
    if rel.tag is Tag.SINGLETON:
        return Truth.of(len(nf.stars) == 1)
    return Truth.TRUE


# ---------------------------------------------------------------- structural


def _retint(c: Constellation, polarity: str) -> Constellation:
    def one(r):
        return Fn("t", r.args, polarity) if is_polarised(r) else r

    return Constellation(tuple(Star(tuple(one(r) for r in s.rays)) for s in c.stars))


def reference_side(c1: Constellation, c2: Constellation) -> tuple:
    """Index (0 or 1) of the constellation whose roots are the target, and
    whether picking it needed a tie-break.

    When both sides are rooted the one with a nonempty root star wins, then
    the first argument.
    """
    p1, p2 = structure_profile(c1), structure_profile(c2)
    if p1.coloured_ray_count != p2.coloured_ray_count:
        raise PreconditionError(
            f"coloured ray counts differ ({p1.coloured_ray_count} vs {p2.coloured_ray_count})"
        )
    if not (p1.rooted or p2.rooted):
        raise PreconditionError("neither constellation is rooted")
    if p1.rooted != p2.rooted:
        return (0 if p1.rooted else 1), False
    if bool(p1.roots.rays) != bool(p2.roots.rays):
        return (0 if p1.roots.rays else 1), True
    return 0, True


def structural_orthogonal(c1: Constellation, c2: Constellation, lim: Optional[Limits] = None) -> Truth:
    """Recolour to ``+t`` / ``-t`` and compare the normal form with the roots."""
    side, _ = reference_side(c1, c2)
    roots = structure_profile((c1, c2)[side]).roots
    res = execute(_retint(c1, "+") + _retint(c2, "-"), lim or Limits())
    target = canonical_constellation(Constellation((roots,)))
    if canonical_constellation(res.normal_form) == target:
        return Truth.TRUE if res.exhaustive else Truth.UNKNOWN
    return Truth.FALSE if res.exhaustive else Truth.UNKNOWN


# ---------------------------------------------------------------- samples

BehaviourSample = list  # of Constellation


def tensor_pair(a: BehaviourSample, b: BehaviourSample) -> BehaviourSample:
    """Every ``x + y`` with ``x`` from ``a`` and ``y`` from ``b``; closure is not taken."""
    for x in a:
        for y in b:
            for s in x.stars:
                for r in s.rays:
                    for s2 in y.stars:
                        for r2 in s2.rays:
                            if matchable(r, r2):
                                raise PreconditionError(f"samples interact: {r} meets {r2}")
    return [x + y for x in a for y in b]


def dependency_graph(c: Constellation) -> nx.MultiGraph:
    """Stars as nodes, one edge per matchable pair of rays."""
    g = nx.MultiGraph()
    for k, s in enumerate(c.stars):
        g.add_node(k, arity=len(s.polarised()))
    slots = [(k, r) for k, s in enumerate(c.stars) for r in s.rays if is_polarised(r)]
    for x, (k, r) in enumerate(slots):
        for l, r2 in slots[x + 1:]:
            if matchable(r, r2):
                g.add_edge(k, l)
    return g


def equivalent(c1: Constellation, c2: Constellation) -> bool:
    """Same dependency structure once uncoloured rays are ignored."""
    same = nx.algorithms.isomorphism.categorical_node_match("arity", None)
    return nx.is_isomorphic(dependency_graph(c1), dependency_graph(c2), node_match=same)


# ---------------------------------------------------------------- weights


def weight(c: Constellation) -> int:
    return 2 * len(c.stars) - sum(len(s.polarised()) for s in c.stars)


@dataclass(frozen=True)
class Const:
    """The atom type, of weight one."""


@dataclass(frozen=True)
class Lit:
    value: int


@dataclass(frozen=True)
class WTensor:
    left: "WeightExpr"
    right: "WeightExpr"


@dataclass(frozen=True)
class WPar:
    left: "WeightExpr"
    right: "WeightExpr"


@dataclass(frozen=True)
class Dual:
    body: "WeightExpr"


@dataclass(frozen=True)
class Lolli:
    left: "WeightExpr"
    right: "WeightExpr"


WeightExpr = Union[Const, Lit, WTensor, WPar, Dual, Lolli]


def formula_weight(e: WeightExpr) -> int:
    if isinstance(e, Const):
        return 1
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, WTensor):
        return formula_weight(e.left) + formula_weight(e.right)
    if isinstance(e, WPar):
        return formula_weight(e.left) + formula_weight(e.right) - 2
    if isinstance(e, Dual):
        return 2 - formula_weight(e.body)
    if isinstance(e, Lolli):
        return formula_weight(e.right) - formula_weight(e.left)
    raise TypeError(f"not a weight expression: {e!r}")


def visible(x) -> bool:
    if isinstance(x, Constellation):
        return weight(x) >= 0
    if isinstance(x, int):
        return x >= 0
    return formula_weight(x) >= 0


# ---------------------------------------------------------------- neutrals


class Neutral(Enum):
    PASSES_AND_CORRECT = "PassesAndCorrect"
    PASSES_NOT_CORRECT = "PassesNotCorrect"
    FAILS = "Fails"

    def __str__(self):
        return self.value


_NEUTRAL = {"top": "p_top", "zero": "p_zero"}


def neutral_ray(which: str, kind: str, pol: str, x: str = "X") -> str:
    """``C``, ``L`` or ``R`` for ⊤ (``top``) or 0 (``zero``) as source text."""
    body = {"C": f"c:{x}", "L": f"-t(l:{x})", "R": f"-t(r:{x})"}[kind]
    return f"{pol}t.{_NEUTRAL[which]}({body})"


def neutral_tests(which: str) -> list:
    """The test battery of a neutral as ``(constellation, cancelling)`` pairs."""
    p = _NEUTRAL[which]

    def test(*groups):
        stars = [" ".join([neutral_ray(which, k, "-") for k in g] + [f"{p}(X)"]) for g in groups]
        return parse_constellation("; ".join(stars) + ";")

    if which == "top":
        return [(test("CL", "R"), False), (test("CL"), True)]
    return [(test("C", "LR"), False), (test("L", "CR"), False), (test("R"), False)]


@dataclass
class NeutralReport:
    verdict: Neutral
    outcomes: list  # (test index, passed, ExecResult)


def _passes(res, cancelling: bool, name: str) -> bool:
    if not res.exhaustive:
        return False
    nf = res.normal_form.stars
    if cancelling:
        return not nf
    return len(nf) == 1 and bool(nf[0].rays) and all(
        not is_polarised(r) and isinstance(r, Fn) and r.name == name for r in nf[0].rays
    )


def neutral_report(candidate: Constellation, which: str, lim: Optional[Limits] = None) -> NeutralReport:
    base = lim or Limits()
    lim = Limits(base.max_occurrences, base.max_diagrams, True, True, base.exclude_covers, base.workers)
    outcomes = []
    for n, (t, cancelling) in enumerate(neutral_tests(which)):
        res = execute(candidate + t, lim)
        outcomes.append((n, _passes(res, cancelling, _NEUTRAL[which]), res))
    if not all(ok for _, ok, _ in outcomes):
        return NeutralReport(Neutral.FAILS, outcomes)
    objective = [s for s in candidate.stars if classify(s) is Kind.OBJECTIVE]
    correct = is_epure(candidate) and all(len(s.rays) == 2 for s in objective)
    return NeutralReport(Neutral.PASSES_AND_CORRECT if correct else Neutral.PASSES_NOT_CORRECT, outcomes)


def check_neutral(candidate: Constellation, which: str, lim: Optional[Limits] = None) -> Neutral:
    return neutral_report(candidate, which, lim).verdict
