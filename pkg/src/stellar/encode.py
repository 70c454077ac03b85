"""Compiling automata, boolean circuits and Horn clause programs to constellations."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from stellar.core import Constellation, Fn, Star, Term, Var, glue, neg, pos, variables
from stellar.syntax import parse_constellation, parse_term

EPS = Fn("eps")
ACCEPT = Fn("accept")
_SYMBOL = re.compile(r"[a-z0-9][A-Za-z0-9_]*\Z")


def _const(name: str) -> Fn:
    if not _SYMBOL.match(name):
        raise ValueError(f"{name!r} is not usable as a constant")
    return Fn(name)


# ------------------------------------------------------------------ words


def encode_word(w: Iterable[str], alphabet: Optional[Iterable[str]] = None) -> Constellation:
    letters = list(w)
    if alphabet is not None:
        sigma = set(alphabet)
        bad = [c for c in letters if c not in sigma]
        if bad:
            raise ValueError(f"letter {bad[0]!r} is not in the alphabet")
    body = glue(*[_const(c) for c in letters], EPS)
    return Constellation((Star((pos("i", body),)),))


def decode_word(c: Constellation) -> str:
    (s,) = c.stars
    (r,) = s.rays
    t = r.args[0]
    out = []
    while isinstance(t, Fn) and t.name == ":":
        out.append(t.args[0].name)
        t = t.args[1]
    if t != EPS:
        raise ValueError("not an encoded word")
    return "".join(out)


# ------------------------------------------------------------------ automata


@dataclass(frozen=True)
class Nfa:
    alphabet: tuple
    states: tuple
    initial: tuple
    final: tuple
    delta: tuple  # (q, c, q') triples

    def __post_init__(self):
        known = set(self.states)
        for q in self.initial + self.final:
            if q not in known:
                raise ValueError(f"undeclared state {q!r}")
        for q, c, q2 in self.delta:
            if q not in known or q2 not in known:
                raise ValueError(f"undeclared state in transition {(q, c, q2)}")
            if c not in self.alphabet:
                raise ValueError(f"letter {c!r} is not in the alphabet")

    def accepts(self, word: str) -> bool:
        """Direct subset simulation."""
        current = set(self.initial)
        for c in word:
            current = {q2 for q, a, q2 in self.delta if q in current and a == c}
        return bool(current & set(self.final))


def encode_nfa(a: Nfa) -> Constellation:
    w = Var("W")
    stars = [Star((neg("i", w), pos("a", w, _const(q)))) for q in a.initial]
    stars += [Star((neg("a", EPS, _const(q)), ACCEPT)) for q in a.final]
    stars += [
        Star((neg("a", glue(_const(c), w), _const(q)), pos("a", w, _const(q2))))
        for q, c, q2 in a.delta
    ]
    return Constellation(tuple(stars))


def parse_nfa(text: str) -> Nfa:
    """Line format: ``alphabet 0 1``, ``initial q0``, ``final q2``, ``trans q0 0 q1``."""
    alphabet, initial, final, delta = [], [], [], []
    states: list = []

    def note(*qs):
        for q in qs:
            if q not in states:
                states.append(q)

    for n, line in enumerate(text.splitlines(), 1):
        words = line.split("#", 1)[0].split()
        if not words:
            continue
        head, rest = words[0], words[1:]
        if head == "alphabet":
            alphabet += rest
        elif head == "states":
            note(*rest)
        elif head == "initial":
            note(*rest)
            initial += rest
        elif head == "final":
            note(*rest)
            final += rest
        elif head == "trans" and len(rest) == 3:
            note(rest[0], rest[2])
            delta.append(tuple(rest))
        else:
            raise ValueError(f"line {n}: cannot read {line.strip()!r}")
    return Nfa(tuple(alphabet), tuple(states), tuple(initial), tuple(final), tuple(delta))


# ------------------------------------------------------------------ circuits


def nat(n: int) -> Term:
    t: Term = Fn("n0")
    for _ in range(n):
        t = Fn("s", (t,))
    return t


@dataclass(frozen=True)
class Gate:
    kind: str  # VAR SHARE AND OR NEG CONST QUERY
    inputs: tuple = ()
    outputs: tuple = ()
    arg: Optional[str] = None  # variable name or bit


_ARITY = {"VAR": (0, 1), "SHARE": (1, 2), "AND": (2, 1), "OR": (2, 1), "NEG": (1, 1), "CONST": (0, 1), "QUERY": (1, 0)}


@dataclass(frozen=True)
class Circuit:
    gates: tuple

    def __post_init__(self):
        produced, consumed = set(), set()
        for g in self.gates:
            if g.kind not in _ARITY:
                raise ValueError(f"unknown gate {g.kind}")
            if (len(g.inputs), len(g.outputs)) != _ARITY[g.kind]:
                raise ValueError(f"{g.kind} has the wrong number of wires")
            for w in g.outputs:
                if w in produced:
                    raise ValueError(f"wire {w} produced twice")
                produced.add(w)
            for w in g.inputs:
                if w in consumed:
                    raise ValueError(f"wire {w} consumed twice; fan out through SHARE")
                consumed.add(w)
        dangling = consumed - produced
        if dangling:
            raise ValueError(f"dangling wire {sorted(dangling)[0]}")

    def wires(self) -> list:
        seen: list = []
        for g in self.gates:
            for w in g.outputs + g.inputs:
                if w not in seen:
                    seen.append(w)
        return seen

    def variables(self) -> list:
        return [g.arg for g in self.gates if g.kind == "VAR"]

    def evaluate(self, valuation: dict) -> dict:
        """Wire values under ``valuation``; QUERY gates are ignored."""
        values: dict = {}
        pending = list(self.gates)
        while pending:
            rest = []
            for g in pending:
                if any(w not in values for w in g.inputs):
                    rest.append(g)
                    continue
                ins = [values[w] for w in g.inputs]
                if g.kind == "VAR":
                    out = [valuation[g.arg]]
                elif g.kind == "CONST":
                    out = [int(g.arg)]
                elif g.kind == "SHARE":
                    out = ins * 2
                elif g.kind == "AND":
                    out = [ins[0] & ins[1]]
                elif g.kind == "OR":
                    out = [ins[0] | ins[1]]
                elif g.kind == "NEG":
                    out = [1 - ins[0]]
                else:
                    out = []
                values.update(zip(g.outputs, out))
            if len(rest) == len(pending):
                raise ValueError("circuit has a cycle")
            pending = rest
        return values


def encode_circuit(circuit: Circuit) -> Constellation:
    ids = {w: nat(i) for i, w in enumerate(circuit.wires())}
    x, y, r = Var("X"), Var("Y"), Var("R")

    def c(w, v):
        return ids[w], v

    stars = []
    for g in circuit.gates:
        i = [ids[w] for w in g.inputs]
        o = [ids[w] for w in g.outputs]
        if g.kind == "VAR":
            rays = (neg("val", x), Fn(g.arg, (x,)), pos("c", o[0], x))
        elif g.kind == "SHARE":
            rays = (neg("c", i[0], x), pos("c", o[0], x), pos("c", o[1], x))
        elif g.kind in ("AND", "OR"):
            rays = (neg("c", i[0], x), neg("c", i[1], y), neg(g.kind.lower(), x, y, r), pos("c", o[0], r))
        elif g.kind == "NEG":
            rays = (neg("c", i[0], x), neg("neg", x, r), pos("c", o[0], r))
        elif g.kind == "CONST":
            rays = (pos("c", o[0], _const(g.arg)),)
        else:
            k = _const(g.arg)
            rays = (neg("c", i[0], k), Fn("R", (k,)))
        stars.append(Star(rays))
    return Constellation(tuple(stars))


def pl_module() -> Constellation:
    """The propositional logic gate semantics as twelve facts."""
    return parse_constellation(
        "+val(0); +val(1); +neg(0, 1); +neg(1, 0);"
        "+and(0, 0, 0); +and(0, 1, 0); +and(1, 0, 0); +and(1, 1, 1);"
        "+or(0, 0, 0); +or(0, 1, 1); +or(1, 0, 1); +or(1, 1, 1);"
    )


_GATE_LINE = re.compile(r"^(\w+)\s*(.*?)\s*(->|<-)\s*(.*)$")


def parse_circuit(text: str) -> Circuit:
    """One gate per line: ``VAR X -> w0``, ``AND w1 w2 -> w3``, ``QUERY 1 <- w4``."""
    gates = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = _GATE_LINE.match(line)
        if not m:
            raise ValueError(f"line {n}: cannot read {line!r}")
        kind, left, arrow, right = m.group(1).upper(), m.group(2).split(), m.group(3), m.group(4).split()
        if kind == "QUERY":
            if arrow != "<-" or len(left) != 1:
                raise ValueError(f"line {n}: expected QUERY <bit> <- <wire>")
            gates.append(Gate("QUERY", tuple(right), (), left[0]))
        elif kind in ("VAR", "CONST"):
            if arrow != "->" or len(left) != 1:
                raise ValueError(f"line {n}: expected {kind} <arg> -> <wire>")
            gates.append(Gate(kind, (), tuple(right), left[0]))
        else:
            if arrow != "->":
                raise ValueError(f"line {n}: expected inputs -> outputs")
            gates.append(Gate(kind, tuple(left), tuple(right)))
    return Circuit(tuple(gates))


# ------------------------------------------------------------------ clauses


@dataclass(frozen=True)
class Clause:
    head: Fn
    body: tuple = ()


def encode_clauses(program: Iterable[Clause], query: Optional[Fn] = None) -> Constellation:
    """Each clause becomes ``[+head, -b1, ...]``; the query collects its variables."""
    stars = [
        Star((_polarise(cl.head, "+"),) + tuple(_polarise(b, "-") for b in cl.body))
        for cl in program
    ]
    if query is not None:
        answer = tuple(Var(v) for v in variables(query))
        stars.append(Star((_polarise(query, "-"),) + answer))
    return Constellation(tuple(stars))


def _polarise(atom: Term, p: str) -> Fn:
    if not isinstance(atom, Fn) or atom.pol is not None:
        raise ValueError(f"expected an unpolarised atom, got {atom}")
    return Fn(atom.name, atom.args, p)


def _split_top(text: str, sep: str) -> list:
    parts, depth, cur = [], 0, ""
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and text.startswith(sep, i):
            parts.append(cur)
            cur = ""
            i += len(sep)
            continue
        cur += ch
        i += 1
    parts.append(cur)
    return parts


def parse_program(text: str) -> tuple:
    """Read ``head :- b1, b2.`` clauses and at most one ``?- q(...).`` query.

    Variables follow the Prolog convention (uppercase initial).
    """
    text = "\n".join(line.split("%", 1)[0] for line in text.splitlines())
    clauses, query = [], None
    for chunk in _split_top(text, "."):
        chunk = chunk.strip()
        if not chunk:
            continue
        if chunk.startswith("?-") or chunk.startswith("?"):
            if query is not None:
                raise ValueError("more than one query")
            query = parse_term(chunk.lstrip("?-").strip())
            continue
        head, *body = _split_top(chunk, ":-")
        if len(body) > 1:
            raise ValueError(f"malformed clause {chunk!r}")
        atoms = [parse_term(b) for b in _split_top(body[0], ",")] if body else []
        clauses.append(Clause(parse_term(head.strip()), tuple(atoms)))
    return clauses, query
