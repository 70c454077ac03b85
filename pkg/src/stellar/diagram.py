"""Diagrams: star occurrences wired along matchable dual rays.

A :class:`Diagram` holds concrete stars whose variables are pairwise disjoint
(each occurrence of a base star is a fresh copy) and a tuple of edges, each
edge linking two ray positions ``(occurrence, ray index)`` of distinct
occurrences.  Every edge stands for one unification equation between the
bodies of the two rays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from stellar.core import (
    Constellation,
    Star,
    apply,
    is_polarised,
    matchable,
    resolve,
    suffix_vars,
    unify,
    unify_into,
)
from stellar.syntax import format_term

Pos = tuple  # (occurrence index, ray index)
Edge = tuple  # (Pos, Pos)


@dataclass(frozen=True)
class Diagram:
    stars: tuple = ()
    edges: tuple = ()
    origins: tuple = ()  # base star index per occurrence, None once fused
    fresh: int = 0  # counter for renaming new occurrences

    def ray(self, p: Pos):
        return self.stars[p[0]].rays[p[1]]

    def used(self) -> set:
        return {p for e in self.edges for p in e}

    def free_positions(self) -> list:
        used = self.used()
        return [(k, i) for k, s in enumerate(self.stars) for i in range(len(s.rays)) if (k, i) not in used]

    def equations(self) -> list:
        eqs = []
        for a, b in self.edges:
            eqs.extend(zip(self.ray(a).args, self.ray(b).args))
        return eqs

    def with_occurrence(self, base: Constellation, j: int) -> "Diagram":
        s = suffix_vars(base.stars[j], f"~{self.fresh}")
        return Diagram(self.stars + (s,), self.edges, self.origins + (j,), self.fresh + 1)

    def with_edge(self, a: Pos, b: Pos) -> "Diagram":
        e = (a, b) if a <= b else (b, a)
        return Diagram(self.stars, self.edges + (e,), self.origins, self.fresh)


def seed(base: Constellation, j: int) -> Diagram:
    return Diagram().with_occurrence(base, j)


def from_occurrences(base: Constellation, origins, edges) -> Diagram:
    """Build a diagram from base star indices and ``((k, i), (l, j))`` edges."""
    d = Diagram()
    for j in origins:
        d = d.with_occurrence(base, j)
    for a, b in edges:
        d = d.with_edge(tuple(a), tuple(b))
    return d


def extensions(d: Diagram, base: Constellation) -> list:
    """Every diagram obtained from ``d`` by adding exactly one edge.

    The new edge joins two free rays of distinct occurrences of ``d`` or a free
    ray of ``d`` with a ray of a fresh occurrence of a base star.  The empty
    diagram extends to the single-occurrence seeds.
    """
    if not d.stars:
        return [seed(base, j) for j in range(len(base.stars))]
    out = []
    free = [p for p in d.free_positions() if is_polarised(d.ray(p))]
    for x, a in enumerate(free):
        for b in free[x + 1:]:
            if a[0] != b[0] and matchable(d.ray(a), d.ray(b)):
                out.append(d.with_edge(a, b))
        for j, s in enumerate(base.stars):
            for i, r in enumerate(s.rays):
                if matchable(d.ray(a), r):
                    d2 = d.with_occurrence(base, j)
                    out.append(d2.with_edge(a, (len(d.stars), i)))
    return out


def is_saturated(d: Diagram, base: Constellation) -> bool:
    return bool(d.stars) and not extensions(d, base)


def components(d: Diagram) -> list:
    parent = list(range(len(d.stars)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, _), (b, _) in d.edges:
        parent[find(a)] = find(b)
    groups: dict = {}
    for k in range(len(d.stars)):
        groups.setdefault(find(k), []).append(k)
    return list(groups.values())


def is_connected(d: Diagram) -> bool:
    return len(components(d)) <= 1


def free_star(d: Diagram, subst=None) -> Star:
    used = d.used()
    rays = [r for k, s in enumerate(d.stars) for i, r in enumerate(s.rays) if (k, i) not in used]
    return Star(tuple(apply(subst or {}, r) for r in rays))


def actualise(d: Diagram) -> Optional[Star]:
    """Solve all edge equations at once; the star of free rays, or None."""
    bindings: dict = {}
    if not unify_into(d.equations(), bindings):
        return None
    used = d.used()
    return Star(tuple(
        resolve(r, bindings)
        for k, s in enumerate(d.stars)
        for i, r in enumerate(s.rays)
        if (k, i) not in used
    ))


def is_correct(d: Diagram) -> bool:
    return actualise(d) is not None


def fuse(d: Diagram, edge: Edge) -> Optional[Diagram]:
    """Resolve one edge: merge its endpoint stars, drop the two linked rays.

    Returns None when the edge equation has no unifier.  Fusing an edge whose
    endpoints were already merged by an earlier step just removes both rays.
    """
    (i, p), (j, q) = edge
    r1, r2 = d.ray((i, p)), d.ray((j, q))
    theta = unify(zip(r1.args, r2.args))
    if theta is None:
        return None
    if i > j:
        i, p, j, q = j, q, i, p
    remap: dict = {}
    if i == j:
        keep = [x for x in range(len(d.stars[i].rays)) if x not in (p, q)]
        merged = [d.stars[i].rays[x] for x in keep]
        for n, x in enumerate(keep):
            remap[(i, x)] = (i, n)
    else:
        keep_i = [x for x in range(len(d.stars[i].rays)) if x != p]
        keep_j = [x for x in range(len(d.stars[j].rays)) if x != q]
        merged = [d.stars[i].rays[x] for x in keep_i] + [d.stars[j].rays[x] for x in keep_j]
        for n, x in enumerate(keep_i):
            remap[(i, x)] = (i, n)
        for n, x in enumerate(keep_j):
            remap[(j, x)] = (i, len(keep_i) + n)
    stars = []
    origins = []
    index: dict = {}
    for k, s in enumerate(d.stars):
        if k == j and i != j:
            continue
        index[k] = len(stars)
        stars.append(Star(tuple(merged)) if k == i else s)
        origins.append(None if k == i else (d.origins[k] if d.origins else None))
    index[j] = index[i]
    stars = [apply(theta, s) for s in stars]

    def move(pos):
        k, x = remap.get(pos, pos)
        return (index[k], x)

    edges = []
    for e in d.edges:
        if e == ((i, p), (j, q)) or e == ((j, q), (i, p)):
            continue
        a, b = move(e[0]), move(e[1])
        edges.append((a, b) if a <= b else (b, a))
    return Diagram(tuple(stars), tuple(edges), tuple(origins), d.fresh)


def fuse_all(d: Diagram, order=None) -> tuple:
    """Fuse edges one at a time in ``order`` (indices into the original edges).

    Returns ``(star or None, trace lines)``; the star is only defined for a
    diagram that collapses to a single occurrence.
    """
    order = list(range(len(d.edges))) if order is None else list(order)
    # track original edges through renumbering by fusing the first remaining
    # edge that corresponds to the next requested one
    labelled = Diagram(d.stars, d.edges, d.origins, d.fresh)
    tags = list(range(len(d.edges)))
    trace = []
    for want in order:
        idx = tags.index(want)
        e = labelled.edges[idx]
        r1, r2 = labelled.ray(e[0]), labelled.ray(e[1])
        theta = unify(zip(r1.args, r2.args))
        nxt = fuse(labelled, e)
        trace.append(format_fuse(e, theta))
        if nxt is None:
            return None, trace
        tags = tags[:idx] + tags[idx + 1:]
        labelled = nxt
    if len(labelled.stars) != 1:
        return None, trace
    return labelled.stars[0], trace


def format_fuse(edge: Edge, theta) -> str:
    (i, p), (j, q) = edge
    if theta is None:
        body = "FAIL"
    else:
        body = "{" + ", ".join(f"{v}↦{format_term(t)}" for v, t in sorted(theta.items())) + "}"
    return f"FUSE o{i}.{p} ~ o{j}.{q} θ={body}"


def canonical_code(d: Diagram) -> tuple:
    """Isomorphism-invariant code of a connected diagram with known origins."""
    n = len(d.stars)
    if n == 0:
        return ()
    adj: dict = {}
    for a, b in d.edges:
        adj[a] = b
        adj[b] = a
    lo = min(d.origins)
    best = None
    for root in range(n):
        if d.origins[root] != lo:
            continue
        order = [root]
        seen = {root: 0}
        h = 0
        code = []
        while h < len(order):
            k = order[h]
            h += 1
            row = []
            for x in range(len(d.stars[k].rays)):
                other = adj.get((k, x))
                if other is None:
                    row.append((-1, -1))
                    continue
                o, y = other
                if o not in seen:
                    seen[o] = len(order)
                    order.append(o)
                row.append((seen[o], y))
            code.append((d.origins[k], tuple(row)))
        code = tuple(code)
        if best is None or code < best:
            best = code
    return best


def quotient_classes(d: Diagram) -> list:
    """Coarsest partition of occurrences that respects origins and wiring.

    Two occurrences share a class when they come from the same base star and,
    position by position, are wired to the same ray of occurrences in the same
    class.  Mapping each class to one occurrence is then a covering map.
    """
    adj: dict = {}
    for a, b in d.edges:
        adj[a] = b
        adj[b] = a
    cls = {k: (d.origins[k],) for k in range(len(d.stars))}
    while True:
        sig = {}
        for k in range(len(d.stars)):
            row = []
            for x in range(len(d.stars[k].rays)):
                other = adj.get((k, x))
                row.append(None if other is None else (cls[other[0]], other[1]))
            sig[k] = (cls[k], tuple(row))
        ids = {s: n for n, s in enumerate(sorted(set(sig.values()), key=repr))}
        new = {k: (ids[sig[k]],) for k in sig}
        if len(set(new.values())) == len(set(cls.values())):
            break
        cls = new
    groups: dict = {}
    for k, c in sorted(cls.items()):
        groups.setdefault(c, []).append(k)
    return sorted(groups.values())


def is_cover(d: Diagram) -> bool:
    """True when ``d`` is a k-fold (k >= 2) covering of a smaller diagram.

    The smaller diagram is the quotient by :func:`quotient_classes`; it must
    itself be a diagram, so a quotient that would wire an occurrence to
    itself does not count.
    """
    classes = quotient_classes(d)
    if len(classes) == len(d.stars):
        return False
    where = {k: n for n, g in enumerate(classes) for k in g}
    return all(where[a[0]] != where[b[0]] for a, b in d.edges)
