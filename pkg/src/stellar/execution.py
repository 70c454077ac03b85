"""Execution: enumerate the correct saturated diagrams of a constellation.

The search grows diagrams one edge at a time from a seed occurrence, always
closing the first free ray that still has somewhere to go.  Unification is
done incrementally, so a branch dies as soon as its equations clash (an
incorrect diagram only has incorrect extensions).

Seeds are tried one base star at a time.  Phase ``k`` starts from star
``k`` and never uses the stars seeded in earlier phases, so each diagram is
built in exactly one phase.  Before every phase a small linear program over
occurrence counts asks whether any saturated diagram could exist at all
among the stars left; when it cannot, the remaining phases are skipped and
the search is known to be complete.  That is what lets recursive programs
such as unary addition finish with an exhaustive verdict even though they
admit unboundedly large partial diagrams.
"""

from __future__ import annotations

import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from stellar.core import (
    Constellation,
    Fn,
    Star,
    Var,
    canonical_constellation,
    is_polarised,
    matchable,
    resolve,
    suffix_vars,
    unify_into,
)
from stellar.diagram import Diagram, canonical_code, is_cover

sys.setrecursionlimit(max(10000, sys.getrecursionlimit()))


class Status(Enum):
    EXHAUSTIVE = "Exhaustive"
    BOUND_REACHED = "BoundReached"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Limits:
    max_occurrences: int = 64
    max_diagrams: int = 100000
    require_connected: bool = True
    exclude_open: bool = False
    exclude_covers: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.max_occurrences < 1 or self.max_diagrams < 1:
            raise ValueError("limits must be positive")


@dataclass
class ExecResult:
    normal_form: Constellation
    status: Status
    diagram_count: int
    diagrams: list = field(default_factory=list, repr=False)

    @property
    def exhaustive(self) -> bool:
        return self.status is Status.EXHAUSTIVE


def filter_coloured(c: Constellation) -> Constellation:
    """Drop every star that still has a polarised ray."""
    return Constellation(tuple(s for s in c.stars if not any(is_polarised(r) for r in s.rays)))


# ---------------------------------------------------------------- analysis


class _Base:
    """Precomputed partner tables for one constellation.

    With ``closed`` set (open diagrams are dropped anyway) a star carrying a
    polarised ray that can meet nothing is dead from the start.
    """

    def __init__(self, c: Constellation, closed: bool = False):
        self.c = c
        self.stars = c.stars
        n = len(c.stars)
        self.partners: dict = {}
        buckets: dict = {}
        for t in range(n):
            for q, r2 in enumerate(c.stars[t].rays):
                if is_polarised(r2):
                    buckets.setdefault((r2.name, r2.pol, len(r2.args)), []).append((t, q, r2))
        for s in range(n):
            for p, r in enumerate(c.stars[s].rays):
                if not is_polarised(r):
                    continue
                dual = buckets.get((r.name, "-" if r.pol == "+" else "+", len(r.args)), [])
                self.partners[(s, p)] = [(t, q) for t, q, r2 in dual if matchable(r, r2)]
        self.must = {k for k, v in self.partners.items() if v}
        self.must_of = [[p for p in range(len(c.stars[s].rays)) if (s, p) in self.must] for s in range(n)]
        self.dead = {s for (s, p), v in self.partners.items() if closed and not v}
        self._imbalance = [_imbalance(c.stars[s], self.must_of[s]) for s in range(n)]
        self.colours = sorted({k for im in self._imbalance for k in im}, key=repr)
        self._feasible: dict = {}

    def alive(self, allowed: set) -> set:
        """Largest subset of ``allowed`` whose must-connect rays all have partners inside it."""
        alive = set(allowed) - self.dead
        changed = True
        while changed:
            changed = False
            for s in sorted(alive):
                for p in self.must_of[s]:
                    if not any(t in alive for t, _ in self.partners[(s, p)]):
                        alive.discard(s)
                        changed = True
                        break
        return alive

    def branching(self, s: int, allowed: set) -> int:
        return sum(
            sum(1 for t, _ in self.partners[(s, p)] if t in allowed)
            for p in self.must_of[s]
        )

    def feasible(self, allowed: set, seed: Optional[int] = None) -> bool:
        """Rational relaxation of "some saturated diagram uses only ``allowed``".

        Unknowns are occurrence counts per star and edge counts per pair of
        partner positions.  Every must-connect position is used exactly once
        per occurrence, and for every colour the total size of positive ray
        bodies must equal the total size of negative ones.
        """
        stars = sorted(allowed)
        if not stars or (seed is not None and seed not in allowed):
            return False
        key = (tuple(stars), seed)
        if key not in self._feasible:
            self._feasible[key] = self._solve(stars, seed)
        return self._feasible[key]

    def _solve(self, stars: list, seed: Optional[int]) -> bool:
        allowed = set(stars)
        col = {s: i for i, s in enumerate(stars)}
        pairs = sorted({
            tuple(sorted([(s, p), (t, q)]))
            for s in stars for p in self.must_of[s]
            for t, q in self.partners[(s, p)] if t in allowed
        })
        nv = len(stars) + len(pairs)
        touching: dict = {}
        for e, (x, y) in enumerate(pairs):
            touching.setdefault(x, []).append(e)
            touching.setdefault(y, []).append(e)
        a_eq, b_eq, a_ub, b_ub = [], [], [], []
        for s in stars:
            for p in self.must_of[s]:
                row = np.zeros(nv)
                row[col[s]] = -1
                for e in touching.get((s, p), ()):
                    row[len(stars) + e] += 1
                a_eq.append(row)
                b_eq.append(0)
        for colour in self.colours:
            lo = np.zeros(nv)
            hi = np.zeros(nv)
            use_lo = use_hi = True
            for s in stars:
                low, high = self._imbalance[s].get(colour, (0, 0))
                if low == -np.inf:
                    use_lo = False
                else:
                    lo[col[s]] = low
                if high == np.inf:
                    use_hi = False
                else:
                    hi[col[s]] = -high
            if use_lo:
                a_ub.append(lo)
                b_ub.append(0)
            if use_hi:
                a_ub.append(hi)
                b_ub.append(0)
        start = np.zeros(nv)
        if seed is None:
            start[: len(stars)] = -1
        else:
            start[col[seed]] = -1
        a_ub.append(start)
        b_ub.append(-1)
        res = linprog(
            np.zeros(nv),
            A_ub=np.array(a_ub),
            b_ub=np.array(b_ub),
            A_eq=np.array(a_eq) if a_eq else None,
            b_eq=np.array(b_eq) if b_eq else None,
            bounds=[(0, None)] * nv,
            method="highs",
        )
        return res.status != 2


def _affine_size(t, sign, const, coef):
    if isinstance(t, Var):
        coef[t.name] = coef.get(t.name, 0) + sign
        return const
    const += sign
    for a in t.args:
        const = _affine_size(a, sign, const, coef)
    return const


def _imbalance(s: Star, must: list) -> dict:
    """Per colour, bounds on (positive body size minus negative body size).

    The key ``None`` sums over all colours, so a variable shared between
    rays of different colours cancels there.
    """
    acc: dict = {}
    for p in must:
        r = s.rays[p]
        sign = 1 if r.pol == "+" else -1
        for key in ((r.name, len(r.args)), None):
            const, coef = acc.get(key, (0, {}))
            for a in r.args:
                const = _affine_size(a, sign, const, coef)
            acc[key] = (const, coef)
    out = {}
    for key, (const, coef) in acc.items():
        base = const + sum(coef.values())
        low = -np.inf if any(v < 0 for v in coef.values()) else base
        high = np.inf if any(v > 0 for v in coef.values()) else base
        out[key] = (low, high)
    return out


def _seed_order(c: Constellation) -> list:
    def key(s):
        star = c.stars[s]
        nvars = sum(len(_var_occurrences(r)) for r in star.rays)
        total = sum(_term_size(r) for r in star.rays) or 1
        unpolarised = any(not is_polarised(r) for r in star.rays)
        return (Fraction(nvars, total), not unpolarised, s)

    return sorted(range(len(c.stars)), key=key)


def _var_occurrences(t, acc=None):
    acc = [] if acc is None else acc
    if isinstance(t, Var):
        acc.append(t.name)
    else:
        for a in t.args:
            _var_occurrences(a, acc)
    return acc


def _term_size(t):
    if isinstance(t, Var):
        return 1
    return 1 + sum(_term_size(a) for a in t.args)


# ------------------------------------------------------------------ search


@dataclass
class _PhaseOutcome:
    found: list  # (code, origins, edges, star)
    bound_hit: bool
    capped: bool


class _OutOfBudget(Exception):
    pass


class _Search:
    def __init__(self, base: _Base, allowed: set, lim: Limits, budget: Optional[int] = None):
        self.base = base
        self.allowed = allowed
        self.lim = lim
        self.budget = budget
        self.found: list = []
        self.codes: set = set()
        self.bound_hit = False
        self.capped = False

    def run(self, seed: int) -> _PhaseOutcome:
        occ = [seed]
        inst = [suffix_vars(self.base.stars[seed], "~0").rays]
        free = {(0, p) for p in range(len(inst[0]))}
        self._grow(occ, inst, free, [], {})
        return _PhaseOutcome(self.found, self.bound_hit, self.capped)

    def _grow(self, occ, inst, free, edges, bindings):
        if self.capped:
            return
        if self.budget is not None:
            self.budget -= 1
            if self.budget < 0:
                raise _OutOfBudget
        target = None
        for k in range(len(occ)):
            for p in self.base.must_of[occ[k]]:
                if (k, p) in free:
                    target = (k, p)
                    break
            if target:
                break
        if target is None:
            self._record(occ, inst, free, edges, bindings)
            return
        k, p = target
        s = occ[k]
        ray = inst[k][p]
        options = self.base.partners[(s, p)]
        option_set = set(options)
        # close the ray against a free ray already in the diagram
        for k2, p2 in sorted(free):
            if k2 == k or (occ[k2], p2) not in option_set:
                continue
            b = dict(bindings)
            if not unify_into(zip(ray.args, inst[k2][p2].args), b):
                continue
            self._grow(occ, inst, free - {(k, p), (k2, p2)}, edges + [((k, p), (k2, p2))], b)
            if self.capped:
                return
        # or against a fresh occurrence of an allowed star
        for t, q in options:
            if t not in self.allowed:
                continue
            if len(occ) >= self.lim.max_occurrences:
                self.bound_hit = True
                continue
            n = len(occ)
            rays = suffix_vars(self.base.stars[t], f"~{n}").rays
            b = dict(bindings)
            if not unify_into(zip(ray.args, rays[q].args), b):
                continue
            new_free = (free - {(k, p)}) | {(n, x) for x in range(len(rays)) if x != q}
            self._grow(occ + [t], inst + [rays], new_free, edges + [((k, p), (n, q))], b)
            if self.capped:
                return

    def _record(self, occ, inst, free, edges, bindings):
        if self.lim.exclude_open and any(is_polarised(inst[k][p]) for k, p in free):
            return
        d = Diagram(tuple(Star(r) for r in inst), tuple(edges), tuple(occ), len(occ))
        if self.lim.exclude_covers and is_cover(d):
            return
        code = canonical_code(d)
        if code in self.codes:
            return
        self.codes.add(code)
        out = Star(tuple(resolve(inst[k][p], bindings) for k, p in sorted(free)))
        self.found.append((code, tuple(occ), tuple(edges), out))
        if len(self.found) >= self.lim.max_diagrams:
            self.capped = True


def _run_phase(args, base: Optional[_Base] = None):
    """One search; a tuple of seeds means any of them alone is complete.

    Several mandatory seeds are raced on a growing step budget, and the
    first search that settles without reaching the occurrence cap wins.
    Searching outward from a bad seed can be exponentially slower.
    """
    c, allowed, seed, lim = args
    base = base or _Base(c, lim.exclude_open)
    if not isinstance(seed, tuple):
        return _Search(base, allowed, lim).run(seed)
    pending, settled = list(seed), {}
    budget = 256
    while pending:
        for s in list(pending):
            try:
                o = _Search(base, allowed, lim, budget).run(s)
            except _OutOfBudget:
                continue
            if not (o.bound_hit or o.capped):
                return o
            settled[s] = o
            pending.remove(s)
        budget *= 4
    return settled[seed[0]]


def _phases(base: _Base) -> list:
    """(allowed set, seed) per phase that might produce a diagram."""
    order = _seed_order(base.c)
    phases = []
    remaining = set(range(len(base.stars)))
    while True:
        alive = base.alive(remaining)
        if not base.feasible(alive):
            return phases
        candidates = [s for s in order if s in alive]
        # a star every remaining diagram must contain makes the last phase
        # any of them gives a complete search, least branching first
        must = [s for s in candidates if not base.feasible(base.alive(alive - {s}))]
        if must:
            must.sort(key=lambda s: base.branching(s, alive))
            phases.append((frozenset(alive), tuple(must) if len(must) > 1 else must[0]))
            return phases
        seed = next(s for s in candidates if base.feasible(alive, s))
        phases.append((frozenset(alive), seed))
        remaining = alive - {seed}


def _connected_diagrams(c: Constellation, lim: Limits):
    base = _Base(c, lim.exclude_open)
    phases = _phases(base)
    jobs = [(c, set(a), s, lim) for a, s in phases]
    if lim.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=lim.workers) as pool:
            outcomes = list(pool.map(_run_phase, jobs))
    else:
        outcomes = []
        total = 0
        for job in jobs:
            o = _run_phase(job, base)
            outcomes.append(o)
            total += len(o.found)
            if total >= lim.max_diagrams:
                break
    found = []
    bound = False
    capped = False
    for o in outcomes:
        found.extend(o.found)
        bound |= o.bound_hit
        capped |= o.capped
    if len(found) >= lim.max_diagrams:
        capped = capped or len(found) > lim.max_diagrams or len(outcomes) < len(jobs)
        found = found[: lim.max_diagrams]
    return found, bound or capped


def execute(c: Constellation, lim: Optional[Limits] = None) -> ExecResult:
    """Normal form of ``c``: actualisations of its correct saturated diagrams."""
    lim = lim or Limits()
    found, partial = _connected_diagrams(c, lim)
    diagrams = [
        Diagram(tuple(suffix_vars(c.stars[o], f"~{k}") for k, o in enumerate(origins)), edges, origins, len(origins))
        for _, origins, edges, _ in found
    ]
    stars = [s for *_, s in found]
    if not lim.require_connected and stars:
        stars, diagrams, partial = _combine(stars, diagrams, found, lim)
    status = Status.BOUND_REACHED if partial else Status.EXHAUSTIVE
    nf = canonical_constellation(Constellation(tuple(stars)))
    return ExecResult(nf, status, len(stars), diagrams)


def _combine(stars, diagrams, found, lim):
    """Disjoint unions of connected diagrams, up to the caps."""
    sizes = [len(origins) for _, origins, _, _ in found]
    out_stars, out_diagrams = [], []
    width = 1
    while len(out_stars) < lim.max_diagrams:
        grew = False
        for combo in combinations_with_replacement(range(len(stars)), width):
            if sum(sizes[i] for i in combo) > lim.max_occurrences:
                continue
            grew = True
            rays = tuple(r for n, i in enumerate(combo) for r in suffix_vars(stars[i], f"~c{n}").rays)
            out_stars.append(Star(rays))
            out_diagrams.append(tuple(diagrams[i] for i in combo))
            if len(out_stars) >= lim.max_diagrams:
                break
        if not grew:
            break
        width += 1
    return out_stars, out_diagrams, True


# -------------------------------------------------------- normalisation


@dataclass(frozen=True)
class Verdict:
    kind: str  # "Yes", "No" or "Unknown"
    witness: Optional[tuple] = None

    def __bool__(self):
        raise TypeError("a normalisation verdict is three-valued; compare .kind")

    def __str__(self):
        return self.kind


def _counts(origins, n):
    v = [0] * n
    for o in origins:
        v[o] += 1
    return v


def is_strongly_normalising(c: Constellation, lim: Optional[Limits] = None) -> Verdict:
    """Yes when the search is exhaustive, No with a pumping witness, else Unknown.

    The witness is a pair of found diagrams over the same stars whose
    occurrence counts are proportional with a factor of at least two: the
    larger one repeats the star cycle of the smaller one.
    """
    lim = lim or Limits()
    res = execute(c, lim)
    if res.exhaustive:
        return Verdict("Yes")
    n = len(c.stars)
    vecs = []
    for d in res.diagrams:
        if isinstance(d, Diagram):
            vecs.append((_counts(d.origins, n), d))
    vecs.sort(key=lambda x: sum(x[0]))
    for i, (a, da) in enumerate(vecs):
        for b, db in vecs[i + 1:]:
            m = _ratio(a, b)
            if m is not None and m >= 2:
                return Verdict("No", (da, db))
    return Verdict("Unknown")


def _ratio(a, b):
    m = None
    for x, y in zip(a, b):
        if x == 0 and y == 0:
            continue
        if x == 0 or y % x:
            return None
        if m is None:
            m = y // x
        elif y // x != m:
            return None
    return m
