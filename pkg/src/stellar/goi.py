"""Axioms and cuts over numeric loci, and orthogonality of partitions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import networkx as nx

from stellar.core import Constellation, Fn, Star, neg, pos


def _pairs(pairs) -> tuple:
    return tuple(tuple(sorted(p)) for p in pairs)


@dataclass(frozen=True)
class LociPermutation:
    axioms: tuple  # pairs covering every locus exactly once
    cuts: tuple = ()  # pairs, each locus at most once

    def __post_init__(self):
        object.__setattr__(self, "axioms", _pairs(self.axioms))
        object.__setattr__(self, "cuts", _pairs(self.cuts))
        seen: set = set()
        for a, b in self.axioms:
            if a == b or a in seen or b in seen:
                raise ValueError("axioms must be a fixpoint-free matching")
            seen |= {a, b}
        cut: set = set()
        for a, b in self.cuts:
            if a == b or a in cut or b in cut:
                raise ValueError("cuts must be a fixpoint-free matching")
            cut |= {a, b}
        if not cut <= seen:
            raise ValueError(f"cut on unknown loci {sorted(cut - seen)}")

    @property
    def loci(self) -> set:
        return {x for p in self.axioms for x in p}

    @property
    def cut_loci(self) -> set:
        return {x for p in self.cuts for x in p}


def _locus(i) -> Fn:
    return Fn(str(i))


def loci_to_constellation(p: LociPermutation) -> Constellation:
    """Axioms become positive stars, cuts negative ones; uncut loci stay inert."""
    cut = p.cut_loci
    stars = [
        Star(tuple(pos("c", _locus(i)) if i in cut else _locus(i) for i in pair))
        for pair in p.axioms
    ]
    stars += [Star((neg("c", _locus(i)), neg("c", _locus(j)))) for i, j in p.cuts]
    return Constellation(tuple(stars))


def permutation_to_partition(m) -> frozenset:
    """``{x: y, ...}`` (or a list of pairs) to the partition ``{{x, y}, ...}``."""
    items = m.items() if isinstance(m, dict) else m
    return frozenset(frozenset(pair) for pair in items)


def partition(*blocks: Iterable) -> frozenset:
    out = frozenset(frozenset(b) for b in blocks)
    if any(not b for b in out):
        raise ValueError("blocks must be nonempty")
    union = [x for b in out for x in b]
    if len(union) != len(set(union)):
        raise ValueError("blocks must be disjoint")
    return out


def partition_orthogonal(p: Iterable, q: Iterable) -> bool:
    """True iff the block adjacency multigraph of ``p`` and ``q`` is a tree."""
    p, q = list(map(frozenset, p)), list(map(frozenset, q))
    ground_p = set().union(*p) if p else set()
    ground_q = set().union(*q) if q else set()
    if ground_p != ground_q:
        raise ValueError("partitions cover different ground sets")
    g = nx.MultiGraph()
    g.add_nodes_from(("p", i) for i in range(len(p)))
    g.add_nodes_from(("q", j) for j in range(len(q)))
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            for _ in a & b:
                g.add_edge(("p", i), ("q", j))
    if g.number_of_nodes() == 0:
        return False
    return nx.is_tree(g)


def partition_to_constellation(blocks: Iterable, labels: Optional[dict] = None) -> Constellation:
    """A switching partition as negative stars, each optionally tagged with a conclusion label."""
    labels = labels or {}
    stars = []
    for b in sorted((sorted(b) for b in blocks), key=lambda b: b[0]):
        rays = tuple(neg("c", _locus(i)) for i in b)
        tag = labels.get(frozenset(b))
        stars.append(Star(rays + ((Fn(tag),) if tag else ())))
    return Constellation(tuple(stars))


def axioms_to_constellation(pairs) -> Constellation:
    return Constellation(tuple(Star(tuple(pos("c", _locus(i)) for i in pair)) for pair in _pairs(pairs)))
