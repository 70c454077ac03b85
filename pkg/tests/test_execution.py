import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from helpers import fixture
from stellar.core import Constellation, Fn, Star, Var, canonical_constellation, neg, pos, rename_apart, same_constellation
from stellar.diagram import Diagram, actualise, canonical_code, extensions
from stellar.execution import Limits, Status, execute, filter_coloured, is_strongly_normalising
from stellar.syntax import parse_constellation, serialize

ADD = parse_constellation(fixture("add22.stellar"))
EX7 = parse_constellation(fixture("example7.stellar"))


def test_addition_is_exhaustive():
    res = execute(ADD)
    assert res.status is Status.EXHAUSTIVE and res.exhaustive
    assert serialize(res.normal_form) == "s(s(s(s(0))));\n"
    assert res.diagram_count == 1


def test_empty_constellation():
    res = execute(Constellation())
    assert res.exhaustive and res.normal_form == Constellation()


def test_lonely_positive_ray_is_kept_or_dropped():
    c = parse_constellation("+a(X) X;")
    assert same_constellation(execute(c).normal_form, c)
    assert execute(c, Limits(exclude_open=True)).normal_form == Constellation()


@pytest.mark.parametrize("k", [8, 16, 32])
def test_example7_grows_with_the_bound(k):
    res = execute(EX7, Limits(max_occurrences=k))
    assert res.status is Status.BOUND_REACHED
    assert res.diagram_count == k
    assert all(s == Star(()) for s in res.normal_form.stars)


def test_monotone_in_the_bound():
    small = execute(EX7, Limits(max_occurrences=6)).diagrams
    big = execute(EX7, Limits(max_occurrences=10)).diagrams
    assert {canonical_code(d) for d in small} <= {canonical_code(d) for d in big}


def test_filter_coloured():
    c = parse_constellation("+a(X) X; Y; [];")
    assert filter_coloured(c) == parse_constellation("Y; [];")
    assert filter_coloured(filter_coloured(c)) == filter_coloured(c)


@given(st.lists(st.sampled_from(["+a(X) X;", "Y;", "[];", "-b(0);", "c(Z) -a(Z);"]), max_size=6))
def test_filter_coloured_is_idempotent(parts):
    c = parse_constellation(" ".join(parts))
    once = filter_coloured(c)
    assert filter_coloured(once) == once
    assert len(once) <= len(c)


def test_limits_are_validated():
    with pytest.raises(ValueError):
        Limits(max_occurrences=0)
    with pytest.raises(ValueError):
        Limits(max_diagrams=0)


def test_diagram_cap_reports_bound():
    res = execute(EX7, Limits(max_occurrences=16, max_diagrams=3))
    assert res.diagram_count == 3 and not res.exhaustive


# ---------------------------------------------------------------- normalisation


def test_terminating_program_is_normalising():
    assert is_strongly_normalising(ADD).kind == "Yes"


def test_cycle_has_a_pumping_witness():
    v = is_strongly_normalising(EX7, Limits(max_occurrences=8))
    assert v.kind == "No"
    small, big = v.witness
    assert len(big.stars) >= 2 * len(small.stars)


def test_long_chain_is_unknown_under_a_small_bound():
    chain = " ".join(f"-a{i}(X) +a{i + 1}(X);" for i in range(10))
    c = parse_constellation(chain + " +a0(0); -a10(X) X;")
    assert is_strongly_normalising(c, Limits(max_occurrences=5)).kind == "Unknown"
    assert serialize(execute(c).normal_form) == "0;\n"


def test_verdict_refuses_truthiness():
    with pytest.raises(TypeError):
        bool(is_strongly_normalising(ADD))


# ---------------------------------------------------------------- variants


def test_workers_do_not_change_the_answer():
    for c, lim in [(ADD, {}), (EX7, {"max_occurrences": 8})]:
        one = execute(c, Limits(workers=1, **lim))
        two = execute(c, Limits(workers=2, **lim))
        assert serialize(one.normal_form) == serialize(two.normal_form)
        assert one.status is two.status and one.diagram_count == two.diagram_count


def test_disconnected_unions():
    c = parse_constellation("+a(X) X; -a(0);")
    res = execute(c, Limits(require_connected=False, max_occurrences=4))
    assert res.status is Status.BOUND_REACHED
    assert canonical_constellation(res.normal_form) == canonical_constellation(parse_constellation("0; 0 0;"))


def _renamed(c):
    def go(t):
        if isinstance(t, Var):
            return Var(t.name + "_r")
        return Fn(t.name, tuple(go(a) for a in t.args), t.pol)

    return Constellation(tuple(Star(tuple(go(r) for r in s.rays)) for s in c.stars))


def test_renaming_variables_changes_nothing():
    for c in (ADD, rename_apart(ADD)):
        assert serialize(execute(_renamed(c)).normal_form) == serialize(execute(ADD).normal_form)


# ---------------------------------------------------------------- oracle


def brute_force(c: Constellation, max_edges: int):
    """Saturated correct diagrams reachable in at most ``max_edges`` edges, as
    ``(occurrences, star)`` pairs."""
    found, seen = [], set()
    level = extensions(Diagram(), c)
    for _ in range(max_edges + 1):
        nxt = []
        for d in level:
            code = canonical_code(d)
            if code in seen:
                continue
            seen.add(code)
            exts = extensions(d, c)
            if not exts:
                star = actualise(d)
                if star is not None:
                    found.append((len(d.stars), star))
            nxt += exts
        level = nxt
    return found


NAMES = ["a", "b"]
_body = st.sampled_from([Var("X"), Var("Y"), Fn("0"), Fn("s", (Var("X"),)), Fn("s", (Fn("0"),))])


@st.composite
def small_constellations(draw):
    stars = []
    for _ in range(draw(st.integers(1, 3))):
        rays = []
        for _ in range(draw(st.integers(0, 2))):
            kind = draw(st.sampled_from(["+", "-", ""]))
            body = draw(_body)
            if kind == "+":
                rays.append(pos(draw(st.sampled_from(NAMES)), body))
            elif kind == "-":
                rays.append(neg(draw(st.sampled_from(NAMES)), body))
            else:
                rays.append(body)
        stars.append(Star(tuple(rays)))
    return Constellation(tuple(stars))


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(small_constellations())
def test_matches_brute_force(c):
    # stars have at most two rays, so five edges reach every diagram of five
    # occurrences and some of six
    res = execute(c, Limits(max_occurrences=5))
    found = brute_force(c, 5)
    small = canonical_constellation(Constellation(tuple(s for n, s in found if n <= 5)))
    assert res.normal_form == small
    if res.exhaustive:
        assert all(n <= 5 for n, _ in found)
