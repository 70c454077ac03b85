"""Multiplicative proof-structures (with the exponential ⋉ and ⊙) as constellations.

A proof-structure is translated into a *vehicle* (its axioms), its *cuts*, and
a *format*: one test constellation per switching of its par-like nodes.  The
structure is correct when the vehicle, recoloured for typing, passes every
test.  :func:`dr_graph_oracle` is the classical Danos-Regnier check kept as an
independent reference.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass, field
from typing import Optional, Union

import networkx as nx

from stellar.core import (
    Constellation,
    Fn,
    Star,
    Term,
    Var,
    glue,
    neg,
    pos,
    same_star,
)
from stellar.execution import Limits, Status, execute

# ------------------------------------------------------------------ formulas


@dataclass(frozen=True)
class Atom:
    name: str
    neg: bool = False


@dataclass(frozen=True)
class Tensor:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Par:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ExPar:
    """``A ⋉ B``, read as ``?A ℘ B``."""

    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ExTensor:
    """``A ⊙ B``, read as ``!A ⊗ B``."""

    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Tensor, Par, ExPar, ExTensor]
_BINARY = (Tensor, Par, ExPar, ExTensor)
_DUAL = {Tensor: Par, Par: Tensor, ExPar: ExTensor, ExTensor: ExPar}
_TOKEN = {Tensor: "ten", Par: "par", ExPar: "xpar", ExTensor: "xten"}
_SYMBOL = {Tensor: "⊗", Par: "℘", ExPar: "⋉", ExTensor: "⊙"}
_SEXPR = {"tensor": Tensor, "par": Par, "expar": ExPar, "extensor": ExTensor}


def dual(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.name, not f.neg)
    return _DUAL[type(f)](dual(f.left), dual(f.right))


@functools.lru_cache(maxsize=None)
def label(f: Formula) -> str:
    """Injective Polish-notation name, usable inside a colour."""
    if isinstance(f, Atom):
        return ("n" if f.neg else "") + f.name
    return f"{_TOKEN[type(f)]}_{label(f.left)}_{label(f.right)}"


def show(f: Formula, top: bool = True) -> str:
    if isinstance(f, Atom):
        return f.name + ("⊥" if f.neg else "")
    s = f"{show(f.left, False)} {_SYMBOL[type(f)]} {show(f.right, False)}"
    return s if top else f"({s})"


def connectives(f: Formula) -> int:
    return 0 if isinstance(f, Atom) else 1 + connectives(f.left) + connectives(f.right)


def subformula(f: Formula, path: str) -> Formula:
    for step in path:
        if isinstance(f, Atom):
            raise KeyError(path)
        f = f.left if step == "l" else f.right
    return f


def nodes(f: Formula, path: str = "") -> list:
    """``(path, subformula)`` in prefix order."""
    out = [(path, f)]
    if not isinstance(f, Atom):
        out += nodes(f.left, path + "l") + nodes(f.right, path + "r")
    return out


def parse_formula(text: str) -> Formula:
    """S-expressions: ``(tensor (atom A) (natom A))``, ``par``, ``expar``, ``extensor``."""
    toks = re.findall(r"\(|\)|[^\s()]+", text)
    f, rest = _sexpr(toks)
    if rest:
        raise ValueError(f"trailing tokens in formula: {' '.join(rest)}")
    return f


def _sexpr(toks):
    if len(toks) < 3 or toks[0] != "(":
        raise ValueError("malformed formula")
    head = toks[1]
    if head in ("atom", "natom"):
        if toks[3:4] != [")"]:
            raise ValueError("malformed atom")
        return Atom(toks[2], head == "natom"), toks[4:]
    if head not in _SEXPR:
        raise ValueError(f"unknown connective {head!r}")
    left, rest = _sexpr(toks[2:])
    right, rest = _sexpr(rest)
    if not rest or rest[0] != ")":
        raise ValueError("malformed formula")
    return _SEXPR[head](left, right), rest[1:]


def sexpr(f: Formula) -> str:
    if isinstance(f, Atom):
        return f"({'natom' if f.neg else 'atom'} {f.name})"
    name = {v: k for k, v in _SEXPR.items()}[type(f)]
    return f"({name} {sexpr(f.left)} {sexpr(f.right)})"


# ---------------------------------------------------------- proof-structures


@dataclass(frozen=True)
class Conclusion:
    id: str
    formula: Formula
    nonlinear: bool = False


@dataclass(frozen=True)
class Occurrence:
    """An atom occurrence: conclusion id, path of l/r steps, contraction copy."""

    concl: str
    path: str = ""
    copy: Optional[str] = None

    @classmethod
    def parse(cls, text: str) -> "Occurrence":
        m = re.fullmatch(r"([^.#\s]+)(?:\.([lr]*))?(?:#([lr]))?", text)
        if not m:
            raise ValueError(f"bad occurrence path {text!r}")
        return cls(m.group(1), m.group(2) or "", m.group(3))

    def __str__(self):
        s = self.concl + ("." + self.path if self.path else "")
        return s + (f"#{self.copy}" if self.copy else "")


@dataclass(frozen=True)
class Exp:
    kind: str  # "der", "weak", "contract", "box"
    side: Optional[str] = None  # contraction copy
    depth: int = 0  # box nesting


@dataclass(frozen=True)
class ProofStructure:
    conclusions: tuple
    axioms: tuple = ()  # pairs of Occurrence
    cuts: tuple = ()  # pairs of conclusion ids
    exp: tuple = ()  # (Occurrence, Exp) pairs
    name: str = ""

    def __post_init__(self):
        self.validate()

    # lookups
    def conclusion(self, cid: str) -> Conclusion:
        for c in self.conclusions:
            if c.id == cid:
                return c
        raise KeyError(f"no conclusion {cid!r}")

    def annotation(self, occ: Occurrence) -> Optional[Exp]:
        for o, e in self.exp:
            if o == occ:
                return e
        if occ.copy:
            return Exp("contract", occ.copy)
        return None

    @property
    def weakened(self) -> list:
        return [o for o, e in self.exp if e.kind == "weak"]

    def atom(self, occ: Occurrence) -> Atom:
        f = subformula(self.conclusion(occ.concl).formula, occ.path)
        if not isinstance(f, Atom):
            raise ValueError(f"{occ} is not an atom")
        return f

    def in_exponential_part(self, cid: str, path: str) -> bool:
        c = self.conclusion(cid)
        if c.nonlinear:
            return True
        f = c.formula
        for i, step in enumerate(path):
            if isinstance(f, (ExPar, ExTensor)) and step == "l":
                return True
            f = f.left if step == "l" else f.right
        return False

    def exponential_side(self, cid: str, path: str) -> Optional[type]:
        """Type of the innermost ⋉/⊙ whose left side contains ``path``."""
        c = self.conclusion(cid)
        f, found = c.formula, None
        for step in path:
            if isinstance(f, (ExPar, ExTensor)) and step == "l":
                found = type(f)
            f = f.left if step == "l" else f.right
        return found

    @functools.cached_property
    def labels(self) -> dict:
        counts: dict = {}
        for c in self.conclusions:
            counts[label(c.formula)] = counts.get(label(c.formula), 0) + 1
        return {
            c.id: label(c.formula) + (f"_{c.id}" if counts[label(c.formula)] > 1 else "")
            for c in self.conclusions
        }

    @property
    def is_exponential(self) -> bool:
        return bool(self.exp) or any(
            isinstance(f, (ExPar, ExTensor)) or c.nonlinear
            for c in self.conclusions for _, f in nodes(c.formula)
        )

    def cut_ids(self) -> set:
        return {x for pair in self.cuts for x in pair}

    def validate(self):
        ids = [c.id for c in self.conclusions]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate conclusion id")
        for a, b in self.cuts:
            if dual(self.conclusion(a).formula) != self.conclusion(b).formula:
                raise ValueError(f"cut {a} {b} is not between dual formulas")
        if len(self.cut_ids()) != 2 * len(self.cuts):
            raise ValueError("a conclusion is cut twice")
        used: dict = {}
        for a, b in self.axioms:
            if self.atom(a) != dual(self.atom(b)):
                raise ValueError(f"axiom {a} {b} does not link dual atoms")
            for o in (a, b):
                used[o] = used.get(o, 0) + 1
        for o in self.weakened:
            self.atom(o)
            used[o] = used.get(o, 0) + 1
        if any(n > 1 for n in used.values()):
            raise ValueError("an atom occurrence is used twice")
        leaves = {
            (c.id, p) for c in self.conclusions for p, f in nodes(c.formula) if isinstance(f, Atom)
        }
        covered = {(o.concl, o.path) for o in used}
        if covered != leaves:
            missing = sorted(leaves - covered)
            raise ValueError(f"atom occurrences not linked: {missing}")
        for o in used:
            e = self.annotation(o)
            side = self.exponential_side(o.concl, o.path)
            nonlinear = self.conclusion(o.concl).nonlinear
            if e is None:
                if side is not None:
                    raise ValueError(f"{o} sits in an exponential part but has no annotation")
                continue
            if e.kind in ("der", "weak", "contract") and not (side is ExPar or nonlinear):
                raise ValueError(f"{e.kind} on {o} outside the left of a ⋉")
            if e.kind == "box" and not (side is ExTensor or nonlinear):
                raise ValueError(f"box on {o} outside the left of a ⊙ or a non-linear conclusion")


# ------------------------------------------------------------------ addresses

X = Var("X")


def path_term(path: str, tail: Term = X) -> Term:
    return glue(*[Fn(s) for s in path], tail)


def _layer(t: Term, u: Term) -> Term:
    return Fn(":", (t, u))


def address(occ: Occurrence, ps: ProofStructure) -> Term:
    """Address of an atom below its conclusion, with its exponential layer."""
    ps.atom(occ)
    t = path_term(occ.path)
    e = ps.annotation(occ)
    if e is None:
        return t
    if e.kind == "der":
        return _layer(t, Fn("d"))
    if e.kind == "contract":
        return _layer(t, _layer(Fn(e.side), Var("Y")))
    if e.kind == "weak":
        return _layer(t, Var("Y"))
    for k in range(1, max(e.depth, 1) + 1):
        t = _layer(t, Var(f"Y{k}"))
    return t


def _outer(addr: Term, occ: Occurrence, ps: ProofStructure) -> Term:
    """The exponential layer of an address (the part after the path)."""
    return addr.args[1] if ps.annotation(occ) else None


# ------------------------------------------------------------------ translation


@dataclass
class ProofTriple:
    vehicle: Constellation
    cuts: Constellation
    format: list  # of Test


@dataclass
class Test:
    name: str
    constellation: Constellation
    cancelling: bool
    switching: dict


def _p(ps: ProofStructure, cid: str) -> str:
    return "c.p_" + ps.labels[cid]


def vehicle(ps: ProofStructure, plug: bool = False) -> Constellation:
    stars = [
        Star((pos(_p(ps, a.concl), address(a, ps)), pos(_p(ps, b.concl), address(b, ps))))
        for a, b in ps.axioms
    ]
    for o in ps.weakened:
        ray = pos(_p(ps, o.concl), address(o, ps))
        if plug:
            stars.append(Star((ray,)))
        else:
            w = "w_" + ps.labels[o.concl]
            u = Var("U")
            stars.append(Star((ray, neg(w, u), pos(w, glue(Fn("l"), u)))))
    return Constellation(tuple(stars))


def cut_stars(ps: ProofStructure) -> Constellation:
    return Constellation(tuple(Star((neg(_p(ps, a), X), neg(_p(ps, b), X))) for a, b in ps.cuts))


def translate(ps: ProofStructure, plug: bool = False) -> ProofTriple:
    return ProofTriple(vehicle(ps, plug), cut_stars(ps), tests(ps))


def switchings(ps: ProofStructure) -> list:
    """All maps from par-like nodes ``(conclusion id, path)`` to ``"L"``/``"R"``."""
    pars = [
        (c.id, p)
        for c in ps.conclusions
        for p, f in nodes(c.formula)
        if isinstance(f, (Par, ExPar))
    ]
    return [dict(zip(pars, choice)) for choice in itertools.product("LR", repeat=len(pars))]


def _variants(ps: ProofStructure) -> list:
    exts = [(c.id, p) for c in ps.conclusions for p, f in nodes(c.formula) if isinstance(f, ExTensor)]
    return [dict(zip(exts, choice)) for choice in itertools.product("x1", repeat=len(exts))]


def _q(ps, cid, path) -> str:
    return f"c.q{path}_{ps.labels[cid]}"


def test_of_switching(ps: ProofStructure, sw: dict, variant: Optional[dict] = None) -> Constellation:
    variant = variant or {}
    y = Var("Y")
    g = glue(Fn("g"), X)
    xy = _layer(X, y)

    def body(cid, path):
        return xy if ps.in_exponential_part(cid, path) else g

    stars = []
    # atom pickups
    occs = [o for pair in ps.axioms for o in pair] + list(ps.weakened)
    for o in sorted(occs, key=str):
        addr = address(o, ps)
        out = g if ps.annotation(o) is None else _layer(X, addr.args[1])
        stars.append(Star((neg("t.p_" + ps.labels[o.concl], addr), pos(_q(ps, o.concl, o.path), out))))
    # connective nodes
    for c in ps.conclusions:
        for path, f in nodes(c.formula):
            if isinstance(f, Atom):
                continue
            q, ql, qr = _q(ps, c.id, path), _q(ps, c.id, path + "l"), _q(ps, c.id, path + "r")
            bl, br, bn = body(c.id, path + "l"), body(c.id, path + "r"), body(c.id, path)
            if isinstance(f, Tensor):
                stars.append(Star((neg(ql, bl), neg(qr, br), pos(q, bn))))
            elif isinstance(f, Par):
                keep, drop = ((ql, bl), (qr, br)) if sw[(c.id, path)] == "L" else ((qr, br), (ql, bl))
                stars.append(Star((neg(*keep), pos(q, bn))))
                stars.append(Star((neg(*drop),)))
            elif isinstance(f, ExTensor):
                shape = X if variant.get((c.id, path), "x") == "x" else Fn("1")
                stars.append(Star((neg(ql, _layer(X, shape)), neg(qr, br), pos(q, bn))))
            elif sw[(c.id, path)] == "L":
                loop = f"loop{path}_{ps.labels[c.id]}"
                stars.append(Star((neg(ql, xy), pos(q, bn))))
                stars.append(Star((neg(qr, br), pos(loop, X), neg(loop, glue(Fn("l"), X)))))
            else:
                stars.append(Star((neg(qr, br), pos(q, bn))))
                stars.append(Star((neg(ql, xy),)))
    # roots
    cut = ps.cut_ids()
    for a, b in ps.cuts:
        ba = g if not ps.conclusion(a).nonlinear else X
        bb = g if not ps.conclusion(b).nonlinear else X
        stars.append(Star((neg(_q(ps, a, ""), ba), neg(_q(ps, b, ""), bb))))
    for c in ps.conclusions:
        if c.id in cut:
            continue
        if c.nonlinear:
            stars.append(Star((neg(_q(ps, c.id, ""), X),)))
        else:
            stars.append(Star((neg(_q(ps, c.id, ""), g), Fn("p_" + ps.labels[c.id], (X,)))))
    return Constellation(tuple(stars))


def _test_name(sw: dict, variant: dict) -> str:
    parts = [f"{cid}.{p or 'ε'}={v}" for (cid, p), v in sorted(sw.items())]
    parts += [f"{cid}.{p or 'ε'}:{v}" for (cid, p), v in sorted(variant.items())]
    return " ".join(parts) or "default"


def tests(ps: ProofStructure) -> list:
    out = []
    for sw in switchings(ps):
        cancelling = any(
            v == "L" and isinstance(subformula(ps.conclusion(cid).formula, p), ExPar)
            for (cid, p), v in sw.items()
        )
        for variant in _variants(ps):
            out.append(Test(_test_name(sw, variant), test_of_switching(ps, sw, variant), cancelling, sw))
    return out


def conclusion_star(ps: ProofStructure) -> Star:
    cut = ps.cut_ids()
    return Star(tuple(
        Fn("p_" + ps.labels[c.id], (X,))
        for c in ps.conclusions
        if c.id not in cut and not c.nonlinear
    ))


# ------------------------------------------------------------------ correctness


@dataclass
class TestResult:
    test: Test
    normal_form: Constellation
    status: Status
    passed: bool


@dataclass
class MllVerdict:
    correct: bool
    results: list = field(default_factory=list)
    approximate: bool = False

    @property
    def failing(self) -> Optional[TestResult]:
        return next((r for r in self.results if not r.passed), None)

    def __str__(self):
        if self.correct:
            return "Correct" + (" (approximate)" if self.approximate else "")
        f = self.failing
        return f"Incorrect ({f.test.name})" if f else "Incorrect"


def test_vehicle(ps: ProofStructure, plug: bool = False) -> Constellation:
    """The vehicle with its ``c.`` colours switched to ``t.`` for testing."""

    def one(r):
        if r.pol and r.name.startswith("c."):
            return Fn("t." + r.name[2:], r.args, r.pol)
        return r

    return Constellation(tuple(Star(tuple(one(r) for r in s.rays)) for s in vehicle(ps, plug).stars))


def run_test(ps: ProofStructure, t: Test, lim: Optional[Limits] = None, allow_mix: bool = False) -> TestResult:
    lim = lim or Limits()
    cap = lim.max_diagrams if allow_mix else (1 if t.cancelling else 2)
    run_lim = Limits(
        max_occurrences=lim.max_occurrences,
        max_diagrams=min(cap, lim.max_diagrams),
        exclude_open=True,
        workers=lim.workers,
    )
    res = execute(test_vehicle(ps) + t.constellation, run_lim)
    nf = res.normal_form
    if allow_mix:
        ok = res.exhaustive and (t.cancelling or _same_rays(nf, conclusion_star(ps)))
    elif t.cancelling:
        ok = res.exhaustive and not nf.stars
    else:
        ok = res.exhaustive and len(nf.stars) == 1 and same_star(nf.stars[0], conclusion_star(ps))
    return TestResult(t, nf, res.status, ok)


def _same_rays(nf: Constellation, expected: Star) -> bool:
    got = sorted(r.name for s in nf.stars for r in s.rays)
    return got == sorted(r.name for r in expected.rays)


def check_correctness(
    ps: ProofStructure,
    lim: Optional[Limits] = None,
    allow_mix: bool = False,
    stop_early: bool = True,
) -> MllVerdict:
    results = []
    for t in tests(ps):
        r = run_test(ps, t, lim, allow_mix)
        results.append(r)
        if not r.passed and stop_early:
            break
    approximate = any(
        isinstance(f, ExPar) for c in ps.conclusions for _, f in nodes(c.formula)
    )
    return MllVerdict(all(r.passed for r in results), results, approximate)


def cut_elimination(ps: ProofStructure, lim: Optional[Limits] = None, plug: bool = False):
    """Execute the vehicle against the cuts."""
    return execute(vehicle(ps, plug) + cut_stars(ps), lim or Limits())


# ------------------------------------------------------------------ Danos-Regnier


def switching_graph(ps: ProofStructure, sw: dict) -> nx.MultiGraph:
    """Classical switching graph: atoms, connective nodes, cut nodes."""
    g = nx.MultiGraph()
    for c in ps.conclusions:
        for path, f in nodes(c.formula):
            g.add_node((c.id, path))
            if isinstance(f, Atom):
                continue
            if isinstance(f, Par) or isinstance(f, ExPar):
                kept = "l" if sw[(c.id, path)] == "L" else "r"
                g.add_edge((c.id, path + kept), (c.id, path))
            else:
                g.add_edge((c.id, path + "l"), (c.id, path))
                g.add_edge((c.id, path + "r"), (c.id, path))
    for a, b in ps.axioms:
        g.add_edge((a.concl, a.path), (b.concl, b.path))
    for n, (a, b) in enumerate(ps.cuts):
        g.add_edge((a, ""), ("cut", n))
        g.add_edge((b, ""), ("cut", n))
    return g


def dr_graph_oracle(ps: ProofStructure) -> bool:
    """Danos-Regnier: every switching graph is connected and acyclic."""
    if ps.is_exponential:
        raise ValueError("the switching criterion here covers pure MLL only")
    return all(nx.is_tree(switching_graph(ps, sw)) for sw in switchings(ps))


def stellar_switching_graph(ps: ProofStructure, sw: dict) -> nx.MultiGraph:
    """The switching graph drawn the way a test wires it (pure MLL).

    Axioms, atom pickups, connective nodes, the sink left behind by each
    switched par, conclusion collectors and cut nodes are the vertices.
    """
    g = nx.MultiGraph()
    cut = ps.cut_ids()
    for n, (a, b) in enumerate(ps.axioms):
        for o in (a, b):
            g.add_edge(("ax", n), ("pick", o.concl, o.path))
            g.add_edge(("pick", o.concl, o.path), ("node", o.concl, o.path))
    for c in ps.conclusions:
        for path, f in nodes(c.formula):
            if isinstance(f, Par):
                kept = "l" if sw[(c.id, path)] == "L" else "r"
                dropped = "r" if kept == "l" else "l"
                g.add_edge(("node", c.id, path + kept), ("node", c.id, path))
                g.add_edge(("node", c.id, path + dropped), ("sink", c.id, path))
            elif not isinstance(f, Atom):
                g.add_edge(("node", c.id, path + "l"), ("node", c.id, path))
                g.add_edge(("node", c.id, path + "r"), ("node", c.id, path))
        if c.id not in cut:
            g.add_edge(("node", c.id, ""), ("collect", c.id))
    for n, (a, b) in enumerate(ps.cuts):
        g.add_edge(("node", a, ""), ("cut", n))
        g.add_edge(("node", b, ""), ("cut", n))
    # atoms are relays between pickup and parent: contract them away
    for c in ps.conclusions:
        for path, f in nodes(c.formula):
            if isinstance(f, Atom):
                node = ("node", c.id, path)
                (pick,) = [v for v in g.neighbors(node) if v[0] == "pick"]
                others = [v for _, v in g.edges(node) if v != pick]
                g.remove_node(node)
                for v in others:
                    g.add_edge(pick, v)
    return g


# ------------------------------------------------------------------ file format


def parse_ps(text: str, name: str = "") -> ProofStructure:
    """Line format for proof-structures.

    ::

        concl c1 (par (natom A) (atom A))
        concl z ?(natom B)          # non-linear conclusion
        ax c1.l c1.r
        cut c1 c2
        der c1.l
        weak c1.l
        contract c1.l#l l
        box c2.l 1
    """
    concls, axioms, cuts, exp = [], [], [], []
    for n, raw in enumerate(text.splitlines(), 1):
        line = re.sub(r"(^|\s)#.*$", "", raw).strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head == "concl":
                cid, _, f = rest.partition(" ")
                f = f.strip()
                nonlinear = f.startswith("?")
                concls.append(Conclusion(cid, parse_formula(f.lstrip("?")), nonlinear))
            elif head == "ax":
                a, b = rest.split()
                axioms.append((Occurrence.parse(a), Occurrence.parse(b)))
            elif head == "cut":
                a, b = rest.split()
                cuts.append((a, b))
            elif head in ("der", "weak"):
                exp.append((Occurrence.parse(rest), Exp(head)))
            elif head == "contract":
                o, side = rest.split()
                exp.append((Occurrence.parse(o), Exp("contract", side)))
            elif head == "box":
                o, depth = rest.split()
                exp.append((Occurrence.parse(o), Exp("box", depth=int(depth))))
            else:
                raise ValueError(f"unknown directive {head!r}")
        except ValueError as err:
            raise ValueError(f"line {n}: {err}") from None
    return ProofStructure(tuple(concls), tuple(axioms), tuple(cuts), tuple(exp), name)


def format_ps(ps: ProofStructure) -> str:
    lines = [f"concl {c.id} {'?' if c.nonlinear else ''}{sexpr(c.formula)}" for c in ps.conclusions]
    lines += [f"ax {a} {b}" for a, b in ps.axioms]
    lines += [f"cut {a} {b}" for a, b in ps.cuts]
    for o, e in ps.exp:
        if e.kind == "contract":
            lines.append(f"contract {o} {e.side}")
        elif e.kind == "box":
            lines.append(f"box {o} {e.depth}")
        else:
            lines.append(f"{e.kind} {o}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ small family


def _trees(n_leaves: int) -> list:
    """Canonical pure MLL formulas over atom A with ``n_leaves`` leaves.

    A tree is canonical when, at every node, the left premise does not come
    after the right one in :func:`sexpr` order, so each formula up to
    commuting premises appears once.
    """
    if n_leaves == 1:
        return [Atom("A"), Atom("A", True)]
    out = []
    for k in range(1, n_leaves // 2 + 1):
        for left in _trees(k):
            for right in _trees(n_leaves - k):
                if k == n_leaves - k and sexpr(right) < sexpr(left):
                    continue
                for kind in (Tensor, Par):
                    out.append(kind(left, right) if sexpr(left) <= sexpr(right) else kind(right, left))
    return sorted(set(out), key=sexpr)


def _canon(f: Formula) -> tuple:
    """Canonical form of ``f`` and the map from its leaf paths to the new ones."""
    if isinstance(f, Atom):
        return f, {"": ""}
    left, ml = _canon(f.left)
    right, mr = _canon(f.right)
    swap = sexpr(right) < sexpr(left)
    a, b = ("r", "l") if swap else ("l", "r")
    moves = {"l" + k: a + v for k, v in ml.items()}
    moves.update({"r" + k: b + v for k, v in mr.items()})
    g = type(f)(right, left) if swap else type(f)(left, right)
    return g, moves


def _automorphisms(f: Formula) -> list:
    """Leaf-path permutations of a canonical tree that fix it."""
    if isinstance(f, Atom):
        return [{"": ""}]
    out = []
    for a in _automorphisms(f.left):
        for b in _automorphisms(f.right):
            m = {"l" + k: "l" + v for k, v in a.items()}
            m.update({"r" + k: "r" + v for k, v in b.items()})
            out.append(m)
            if f.left == f.right:
                out.append({("r" if k[0] == "l" else "l") + k[1:]: v for k, v in m.items()})
    return out


def _forest_symmetries(forms: tuple) -> list:
    """Symmetries of a sorted forest as (conclusion permutation, leaf map) pairs.

    The leaf map sends ``(conclusion index, leaf path)`` to its image.
    """
    per_tree = [_automorphisms(f) for f in forms]
    perms = [
        p for p in itertools.permutations(range(len(forms)))
        if all(forms[i] == forms[p[i]] for i in range(len(forms)))
    ]
    out = []
    for p in perms:
        for choice in itertools.product(*per_tree):
            out.append((p, {(i, k): (p[i], v) for i, m in enumerate(choice) for k, v in m.items()}))
    return out


def canonical_key(ps: ProofStructure) -> tuple:
    """Isomorphism invariant of a pure MLL structure over one atom.

    Two structures get the same key exactly when one is obtained from the
    other by commuting premises of connectives and reordering conclusions.
    """
    canon = [(_canon(c.formula), c.id) for c in ps.conclusions]
    order = sorted(range(len(canon)), key=lambda i: sexpr(canon[i][0][0]))
    forms = tuple(canon[i][0][0] for i in order)
    where = {}
    for new, old in enumerate(order):
        (_, moves), cid = canon[old]
        for k, v in moves.items():
            where[(cid, k)] = (new, v)
    index = {canon[old][1]: new for new, old in enumerate(order)}
    links = [(where[(a.concl, a.path)], where[(b.concl, b.path)]) for a, b in ps.axioms]
    cuts = [(index[a], index[b]) for a, b in ps.cuts]
    best = None
    for perm, g in _forest_symmetries(forms):
        mapped_links = tuple(sorted(tuple(sorted((g[x], g[y]))) for x, y in links))
        mapped_cuts = tuple(sorted(tuple(sorted((perm[i], perm[j]))) for i, j in cuts))
        cand = (mapped_cuts, mapped_links)
        if best is None or cand < best:
            best = cand
    return (tuple(sexpr(f) for f in forms),) + best


def _flip(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.name, not f.neg)
    return type(f)(_flip(f.left), _flip(f.right))


def renamed_atoms(ps: ProofStructure) -> ProofStructure:
    """The same structure with the atom ``A`` renamed to its dual."""
    concls = tuple(Conclusion(c.id, _flip(c.formula), c.nonlinear) for c in ps.conclusions)
    return ProofStructure(concls, tuple((b, a) for a, b in ps.axioms), ps.cuts, ps.exp, ps.name)


def _forests(total: int, max_connectives: int):
    """Nondecreasing tuples of canonical trees with ``total`` leaves, half negative."""
    pool = sorted((t for k in range(1, total + 1) for t in _trees(k)), key=sexpr)
    atoms = [[f for _, f in nodes(t) if isinstance(f, Atom)] for t in pool]
    size = [len(x) for x in atoms]
    negs = [sum(f.neg for f in x) for x in atoms]
    half = total // 2

    def go(start, left, neg, acc):
        if left == 0:
            if neg == half:
                yield tuple(pool[i] for i in acc)
            return
        for i in range(start, len(pool)):
            if size[i] <= left and neg + negs[i] <= half and neg + negs[i] + left - size[i] >= half:
                yield from go(i, left - size[i], neg + negs[i], acc + [i])

    for forms in go(0, total, 0, []):
        if total - len(forms) <= max_connectives:
            yield forms


def small_structures(max_axioms: int = 3, max_connectives: int = 6, with_cuts: bool = True):
    """Every pure MLL proof-structure over one atom up to the given size.

    Structures are produced once per isomorphism class: commuting the
    premises of a connective, reordering conclusions and renaming the atom
    to its dual do not produce a new member.
    """
    seen = set()
    for n in range(1, max_axioms + 1):
        for forms in _forests(2 * n, max_connectives):
            concls = tuple(Conclusion(f"c{i}", f) for i, f in enumerate(forms))
            for cuts in _cut_choices(concls) if with_cuts else [()]:
                for axioms in _linkings(concls):
                    ps = ProofStructure(concls, axioms, cuts)
                    key = min(canonical_key(ps), canonical_key(renamed_atoms(ps)))
                    if key in seen:
                        continue
                    seen.add(key)
                    yield ps


def _cut_choices(concls):
    out = [()]
    ids = [c.id for c in concls]
    pairs = [
        (a.id, b.id)
        for a, b in itertools.combinations(concls, 2)
        if dual(a.formula) == b.formula
    ]
    for k in range(1, len(ids) // 2 + 1):
        for combo in itertools.combinations(pairs, k):
            flat = [x for p in combo for x in p]
            if len(flat) == len(set(flat)):
                out.append(tuple(combo))
    return out


def _linkings(concls):
    pos_occ, neg_occ = [], []
    for c in concls:
        for path, f in nodes(c.formula):
            if isinstance(f, Atom):
                (neg_occ if f.neg else pos_occ).append(Occurrence(c.id, path))
    for perm in itertools.permutations(neg_occ):
        yield tuple(zip(pos_occ, perm))
