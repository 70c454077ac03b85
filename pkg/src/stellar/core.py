"""Terms, rays, substitutions, unification, stars and constellations.

A ray is simply a term.  When the outermost symbol carries a polarity the ray
is *polarised*: the symbol name is its colour and the arguments are its body.
Polarity tags on inner symbols are allowed too; they do not drive connexion,
they only make a ray *subjective*.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping, Optional, Union

POS = "+"
NEG = "-"


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Fn:
    """Compound term (or constant when ``args`` is empty)."""

    name: str
    args: tuple = ()
    pol: Optional[str] = None

    def __str__(self) -> str:
        from stellar.syntax import format_term

        return format_term(self)


Term = Union[Var, Fn]
Ray = Term
Substitution = dict


def fn(name: str, *args: Term, pol: Optional[str] = None) -> Fn:
    return Fn(name, tuple(args), pol)


def pos(colour: str, *args: Term) -> Fn:
    return Fn(colour, tuple(args), POS)


def neg(colour: str, *args: Term) -> Fn:
    return Fn(colour, tuple(args), NEG)


def glue(*parts: Term) -> Term:
    """Right-associative binary ``:`` gluing of ``parts``."""
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Fn(":", (p, out))
    return out


def is_polarised(ray: Ray) -> bool:
    return isinstance(ray, Fn) and ray.pol is not None


def opposite(p: str) -> str:
    return NEG if p == POS else POS


def variables(t: Term, acc: Optional[list] = None) -> list:
    """Variable names of ``t`` in leftmost order (with repetitions)."""
    if acc is None:
        acc = []
    if isinstance(t, Var):
        acc.append(t.name)
    else:
        for a in t.args:
            variables(a, acc)
    return acc


def occurs(name: str, t: Term) -> bool:
    if isinstance(t, Var):
        return t.name == name
    return any(occurs(name, a) for a in t.args)


def size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(size(a) for a in t.args)


# --------------------------------------------------------------------------
# substitutions and unification


def apply(subst: Mapping[str, Term], target):
    """Apply ``subst`` to a term/ray, a Star or a Constellation."""
    if isinstance(target, Star):
        return Star(tuple(apply(subst, r) for r in target.rays))
    if isinstance(target, Constellation):
        return Constellation(tuple(apply(subst, s) for s in target.stars))
    if not subst:
        return target
    return _apply_term(subst, target)


def _apply_term(subst, t):
    if isinstance(t, Var):
        return subst.get(t.name, t)
    if not t.args:
        return t
    return Fn(t.name, tuple(_apply_term(subst, a) for a in t.args), t.pol)


def walk(t: Term, bindings: Mapping[str, Term]) -> Term:
    while isinstance(t, Var) and t.name in bindings:
        t = bindings[t.name]
    return t


def resolve(t: Term, bindings: Mapping[str, Term]) -> Term:
    """Fully dereference ``t`` through triangular ``bindings``."""
    t = walk(t, bindings)
    if isinstance(t, Var) or not t.args:
        return t
    return Fn(t.name, tuple(resolve(a, bindings) for a in t.args), t.pol)


def _occurs_bound(name, t, bindings) -> bool:
    t = walk(t, bindings)
    if isinstance(t, Var):
        return t.name == name
    return any(_occurs_bound(name, a, bindings) for a in t.args)


def unify_into(equations: Iterable[tuple], bindings: dict) -> bool:
    """Extend triangular ``bindings`` in place; False on clash or occurs-check.

    ``bindings`` may be left partially extended on failure, so callers pass a
    copy they can throw away.
    """
    stack = list(equations)
    while stack:
        a, b = stack.pop()
        a = walk(a, bindings)
        b = walk(b, bindings)
        if isinstance(a, Var):
            if isinstance(b, Var) and a.name == b.name:
                continue
            if _occurs_bound(a.name, b, bindings):
                return False
            bindings[a.name] = b
        elif isinstance(b, Var):
            if _occurs_bound(b.name, a, bindings):
                return False
            bindings[b.name] = a
        else:
            if a.name != b.name or a.pol != b.pol or len(a.args) != len(b.args):
                return False
            stack.extend(zip(a.args, b.args))
    return True


def unify(equations) -> Optional[Substitution]:
    """Most general unifier of a set of term equations, or None if none exists.

    >>> unify([(fn("f", Var("X")), fn("f", fn("a")))])
    {'X': Fn(name='a', args=(), pol=None)}
    """
    bindings: dict = {}
    if not unify_into(equations, bindings):
        return None
    return {v: resolve(t, bindings) for v, t in bindings.items()}


def compose(first: Mapping[str, Term], second: Mapping[str, Term]) -> Substitution:
    """Substitution equivalent to applying ``first`` then ``second``."""
    out = {v: apply(second, t) for v, t in first.items()}
    for v, t in second.items():
        out.setdefault(v, t)
    return {v: t for v, t in out.items() if t != Var(v)}


# --------------------------------------------------------------------------
# stars and constellations


@dataclass(frozen=True, slots=True)
class Star:
    rays: tuple = ()

    def __iter__(self) -> Iterator[Ray]:
        return iter(self.rays)

    def __len__(self) -> int:
        return len(self.rays)

    def __str__(self) -> str:
        from stellar.syntax import format_star

        return format_star(self)

    def variables(self) -> list:
        acc: list = []
        for r in self.rays:
            variables(r, acc)
        return acc

    def polarised(self) -> list:
        return [r for r in self.rays if is_polarised(r)]

    def unpolarised(self) -> list:
        return [r for r in self.rays if not is_polarised(r)]

    def canonical(self) -> "Star":
        return canonical_star(self)


@dataclass(frozen=True, slots=True)
class Constellation:
    stars: tuple = ()

    def __iter__(self) -> Iterator[Star]:
        return iter(self.stars)

    def __len__(self) -> int:
        return len(self.stars)

    def __add__(self, other: "Constellation") -> "Constellation":
        return Constellation(self.stars + other.stars)

    def __str__(self) -> str:
        from stellar.syntax import serialize

        return serialize(self)

    def canonical(self) -> "Constellation":
        return canonical_constellation(self)

    def key(self) -> tuple:
        """Hashable canonical key: sorted canonical star strings."""
        return tuple(sorted(star_key(s) for s in self.stars))


def star(*rays: Ray) -> Star:
    return Star(tuple(rays))


def constellation(*stars) -> Constellation:
    return Constellation(tuple(s if isinstance(s, Star) else Star(tuple(s)) for s in stars))


def union(*cs: Constellation) -> Constellation:
    """Multiset union of constellations."""
    return Constellation(tuple(itertools.chain.from_iterable(c.stars for c in cs)))


def rename(t: Term, mapping) -> Term:
    """Rename variables by a dict (missing names kept) or a callable."""
    f = mapping if callable(mapping) else (lambda v: mapping.get(v, v))
    return _rename(t, f)


def _rename(t, f):
    if isinstance(t, Var):
        return Var(f(t.name))
    if not t.args:
        return t
    return Fn(t.name, tuple(_rename(a, f) for a in t.args), t.pol)


def suffix_vars(s: Star, tag: str) -> Star:
    return Star(tuple(rename(r, lambda v: v + tag) for r in s.rays))


def _number_vars(rays, start=0):
    mapping: dict = {}
    for r in rays:
        for v in variables(r):
            if v not in mapping:
                mapping[v] = f"X{start + len(mapping)}"
    return mapping


def _blind(t: Term) -> str:
    from stellar.syntax import format_term

    return format_term(t, blind=True)


_PERM_BUDGET = 720


def canonical_star(s: Star, start: int = 0) -> Star:
    """Canonical representative of ``s`` up to variable renaming and ray order.

    Rays are first ordered by their variable-blind rendering; ties are broken
    by trying every arrangement of tied rays when that is cheap, otherwise by a
    greedy refinement.
    """
    from stellar.syntax import format_term

    rays = list(s.rays)
    if not rays:
        return Star(())
    rays.sort(key=_blind)
    groups = [list(g) for _, g in itertools.groupby(rays, key=_blind)]
    n_arr = 1
    for g in groups:
        for k in range(2, len(g) + 1):
            n_arr *= k

    def render(order):
        m = _number_vars(order, start)
        renamed = [rename(r, m) for r in order]
        return renamed, tuple(format_term(r) for r in renamed)

    if n_arr <= _PERM_BUDGET:
        best = None
        for combo in itertools.product(*(itertools.permutations(g) for g in groups)):
            order = [r for g in combo for r in g]
            renamed, key = render(order)
            if best is None or key < best[0]:
                best = (key, renamed)
        return Star(tuple(best[1]))
    # greedy: iterate numbering and full-rendering sort to a fixpoint
    order = rays
    for _ in range(4):
        renamed, _ = render(order)
        idx = sorted(range(len(order)), key=lambda i: (_blind(order[i]), format_term(renamed[i])))
        new = [order[i] for i in idx]
        if new == order:
            break
        order = new
    return Star(tuple(render(order)[0]))


def star_key(s: Star) -> str:
    from stellar.syntax import format_star

    return format_star(canonical_star(s))


def canonical_constellation(c: Constellation) -> Constellation:
    """Stars canonicalised, sorted, with constellation-wide distinct variables."""
    stars = sorted((canonical_star(s) for s in c.stars), key=star_key)
    out = []
    n = 0
    for s in stars:
        m = _number_vars(s.rays, n)
        n += len(m)
        out.append(Star(tuple(rename(r, m) for r in s.rays)))
    return Constellation(tuple(out))


def rename_apart(c: Constellation) -> Constellation:
    """Fresh per-star variable numbering so that no two stars share a variable."""
    out = []
    n = 0
    for s in c.stars:
        m = _number_vars(s.rays, n)
        n += len(m)
        out.append(Star(tuple(rename(r, m) for r in s.rays)))
    return Constellation(tuple(out))


def same_star(a: Star, b: Star) -> bool:
    return star_key(a) == star_key(b)


def same_constellation(a: Constellation, b: Constellation) -> bool:
    return a.key() == b.key()


def matchable(r1: Ray, r2: Ray) -> bool:
    """Dual polarised rays of equal colour whose bodies unify (renamed apart)."""
    if not (is_polarised(r1) and is_polarised(r2)):
        return False
    if r1.name != r2.name or r1.pol == r2.pol or len(r1.args) != len(r2.args):
        return False
    r2 = rename(r2, lambda v: v + "'")
    return unify(zip(r1.args, r2.args)) is not None


# --------------------------------------------------------------------------
# classification


class Kind(Enum):
    OBJECTIVE = "objective"
    SUBJECTIVE = "subjective"
    ANIMIST = "animist"


def _inner_polarised(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    return any(isinstance(a, Fn) and (a.pol is not None or _inner_polarised(a)) for a in t.args)


def is_subjective(ray: Ray) -> bool:
    """True iff some non-top-level symbol of ``ray`` carries a polarity."""
    return _inner_polarised(ray)


def classify(s: Star) -> Kind:
    subj = [is_subjective(r) for r in s.rays]
    if all(subj) and subj:
        return Kind.SUBJECTIVE
    if not any(subj):
        return Kind.OBJECTIVE
    return Kind.ANIMIST


def is_epure(c: Constellation) -> bool:
    return all(classify(s) is not Kind.ANIMIST for s in c.stars)


@dataclass(frozen=True)
class Profile:
    rooted: bool
    roots: Star
    coloured_ray_count: int


def structure_profile(c: Constellation) -> Profile:
    roots = [r for s in c.stars for r in s.rays if not is_polarised(r)]
    rooted = all(len(s.unpolarised()) <= 1 for s in c.stars)
    count = sum(len(s.polarised()) for s in c.stars)
    return Profile(rooted, Star(tuple(roots)), count)


def recolour(c: Constellation, colour: str, polarity: str) -> Constellation:
    """Replace the colour prefix and polarity of every polarised ray.

    A dotted colour ``c.pA`` keeps its suffix (``t.pA``); plain colours become
    ``colour`` outright.  Unpolarised rays are left alone.
    """

    def one(r):
        if not is_polarised(r):
            return r
        head, dot, rest = r.name.partition(".")
        return Fn(colour + dot + rest, r.args, polarity)

    return Constellation(tuple(Star(tuple(one(r) for r in s.rays)) for s in c.stars))
