"""Shared fixtures paths and hypothesis strategies for the test suite."""

from pathlib import Path

from hypothesis import strategies as st

from stellar.core import Fn, Var

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture(name: str) -> str:
    return (FIXTURES / name).read_text()


VAR_NAMES = ["X", "Y", "Z", "W"]


def terms(max_leaves: int = 8, var_names=VAR_NAMES):
    """Small first-order terms over a fixed signature."""
    leaf = st.one_of(
        st.sampled_from([Var(v) for v in var_names]),
        st.sampled_from([Fn("a"), Fn("b"), Fn("0")]),
    )

    def grow(children):
        return st.one_of(
            st.builds(lambda t: Fn("s", (t,)), children),
            st.builds(lambda l, r: Fn("f", (l, r)), children, children),
            st.builds(lambda l, r: Fn(":", (l, r)), children, children),
        )

    return st.recursive(leaf, grow, max_leaves=max_leaves)


def ground_terms(max_leaves: int = 6):
    return st.recursive(
        st.sampled_from([Fn("a"), Fn("b"), Fn("0")]),
        lambda c: st.one_of(
            st.builds(lambda t: Fn("s", (t,)), c),
            st.builds(lambda l, r: Fn("f", (l, r)), c, c),
        ),
        max_leaves=max_leaves,
    )


def rays(max_leaves: int = 6, colours=("a", "b")):
    """Polarised or plain rays whose bodies come from :func:`terms`."""
    polarised = st.builds(
        lambda name, pol, body: Fn(name, (body,), pol),
        st.sampled_from(list(colours)),
        st.sampled_from(["+", "-"]),
        terms(max_leaves),
    )
    return st.one_of(polarised, terms(max_leaves))


def fixture_constellations() -> dict:
    """The constellations behind acceptance fixtures 1 to 8, by name."""
    from stellar import encode, goi, mll
    from stellar.cli import parse_loci
    from stellar.syntax import parse_constellation

    out = {
        "add22": parse_constellation(fixture("add22.stellar")),
        "example7": parse_constellation(fixture("example7.stellar")),
        "ends00+000": encode.encode_nfa(encode.parse_nfa(fixture("ends00.nfa"))) + encode.encode_word("000"),
        "em": encode.encode_circuit(encode.parse_circuit(fixture("em.circ"))) + encode.pl_module(),
        "loci": goi.loci_to_constellation(parse_loci(fixture("paths.loci"))),
    }
    for name in ["example6", "weakening", "contraction", "dereliction"]:
        ps = mll.parse_ps(fixture(f"{name}.ps"))
        out[name] = mll.vehicle(ps) + mll.cut_stars(ps)
    for name in ["example8", "example9", "identity"]:
        ps = mll.parse_ps(fixture(f"{name}.ps"))
        for k, t in enumerate(mll.tests(ps)):
            out[f"{name}/test{k}"] = mll.test_vehicle(ps) + t.constellation
    return out


def small_diagrams(c, max_edges: int) -> list:
    """Every connected diagram over ``c`` with at most ``max_edges`` edges, up to isomorphism."""
    from stellar.diagram import Diagram, canonical_code, extensions

    level = extensions(Diagram(), c)
    out = list(level)
    for _ in range(max_edges):
        nxt, seen = [], set()
        for d in level:
            for e in extensions(d, c):
                code = canonical_code(e)
                if code not in seen:
                    seen.add(code)
                    nxt.append(e)
        out += nxt
        level = nxt
    return out
