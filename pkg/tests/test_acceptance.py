"""The thirteen acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line straight to the
terminal, whatever pytest's capture mode.  Run this file as a script to get
the same lines without pytest.
"""

import io
import itertools
import os
import random
import subprocess
import sys
import time
from pathlib import Path

from helpers import FIXTURES, fixture, fixture_constellations, small_diagrams
from stellar import encode, goi, mll
from stellar import orthogonality as orth
from stellar.cli import main, parse_loci
from stellar.core import Constellation, Fn, Star, Var, canonical_constellation, matchable, neg, pos
from stellar.diagram import actualise, from_occurrences, fuse, fuse_all
from stellar.execution import Limits, Status, execute, filter_coloured, is_strongly_normalising
from stellar.syntax import parse_constellation

P = parse_constellation
CLOSED = Limits(exclude_open=True)


def criterion(n, title):
    def wrap(fn):
        def run(request):
            start = time.perf_counter()
            try:
                detail = fn()
            except AssertionError as e:
                _say(request, f"criterion {n}: FAIL {title} ({e or 'assertion failed'})")
                raise
            _say(request, f"criterion {n}: PASS {title} ({detail}, {time.perf_counter() - start:.1f}s)")

        run.__name__, run.__doc__, run.number = fn.__name__, fn.__doc__, n
        return run

    return wrap


def _say(request, line):
    if request is None:
        print(line, flush=True)
        return
    capture = request.config.pluginmanager.getplugin("capturemanager")
    with capture.global_and_fixture_disabled():
        print("\n" + line, flush=True)


def nf_of(text):
    return canonical_constellation(P(text))


# ---------------------------------------------------------------- 1 to 8: fixtures


@criterion(1, "addition")
def test_addition():
    res = execute(P(fixture("add22.stellar")))
    assert res.status is Status.EXHAUSTIVE, res.status
    assert res.normal_form == nf_of("s(s(s(s(0))));"), res.normal_form
    out = io.StringIO()
    assert main(["run", str(FIXTURES / "add22.stellar")], out) == 0
    assert out.getvalue().startswith("[s(s(s(s(0))))];\nstatus: exhaustive\n")
    return "[s(s(s(s(0))))], exhaustive"


@criterion(2, "divergence")
def test_divergence():
    c = P(fixture("example7.stellar"))
    counts = []
    for k in (8, 16, 32):
        res = execute(c, Limits(max_occurrences=k))
        assert res.status is Status.BOUND_REACHED, (k, res.status)
        assert all(s == Star(()) for s in res.normal_form.stars)
        counts.append(res.diagram_count)
    assert counts[0] < counts[1] < counts[2], counts
    return f"diagram counts {counts}"


def _simulate(nfa, word):
    """Subset simulation written independently of the encoder."""
    states = set(nfa.initial)
    for ch in word:
        states = {q2 for (q1, a, q2) in nfa.delta if q1 in states and a == ch}
    return bool(states & set(nfa.final))


@criterion(3, "automaton")
def test_automaton():
    nfa = encode.parse_nfa(fixture("ends00.nfa"))
    a = encode.encode_nfa(nfa)
    yes = execute(a + encode.encode_word("000"), CLOSED)
    no = execute(a + encode.encode_word("010"), CLOSED)
    assert yes.exhaustive and no.exhaustive
    assert filter_coloured(yes.normal_form) == nf_of("accept;"), yes.normal_form
    assert filter_coloured(no.normal_form) == Constellation(), no.normal_form
    assert _simulate(nfa, "000") and not _simulate(nfa, "010")
    return "000 gives [accept], 010 gives nothing, as simulation says"


@criterion(4, "circuit")
def test_circuit():
    circ = encode.parse_circuit(fixture("em.circ"))
    res = execute(encode.encode_circuit(circ) + encode.pl_module(), Limits(exclude_open=True, exclude_covers=True))
    # the circuit computes X or not X, by hand
    want = " ".join(f"X({x}) R({int(bool(x) or not x)});" for x in (0, 1))
    assert res.normal_form == nf_of(want), res.normal_form
    return f"[X(0) R(1)] + [X(1) R(1)], {res.status.value}"


@criterion(5, "loci")
def test_loci():
    res = execute(goi.loci_to_constellation(parse_loci(fixture("paths.loci"))), Limits(exclude_covers=True))
    assert res.exhaustive
    assert res.normal_form == nf_of("5 6; 7 8;"), res.normal_form
    return "[5 6] + [7 8]"


@criterion(6, "cut elimination")
def test_cut_elimination():
    res = mll.cut_elimination(mll.parse_ps(fixture("example6.ps")))
    assert res.exhaustive and res.diagram_count == 1, (res.status, res.diagram_count)
    assert res.normal_form == nf_of("+c.p_nA(X) +c.p_A(X);"), res.normal_form
    return "one diagram, [+c.p_nA(X) +c.p_A(X)]"


@criterion(7, "MLL correctness")
def test_mll_correctness():
    ex8 = mll.check_correctness(mll.parse_ps(fixture("example8.ps")), stop_early=False)
    assert ex8.correct
    want = nf_of("p_ten_A_B(X) p_par_nA_nB(X);")
    assert all(canonical_constellation(r.normal_form) == want for r in ex8.results)
    ps9 = mll.parse_ps(fixture("example9.ps"))
    ex9 = mll.check_correctness(ps9)
    assert not ex9.correct and ex9.failing.status is Status.BOUND_REACHED
    (t,) = mll.tests(ps9)
    sn = is_strongly_normalising(mll.test_vehicle(ps9) + t.constellation, Limits(max_occurrences=16, exclude_open=True))
    assert sn.kind == "No", sn
    return f"example8.ps Correct over {len(ex8.results)} tests, example9.ps {ex9} and not normalising"


def _box_stars(c):
    return [s for s in c.stars if any(r.name == "c.p_nA" for r in s.rays)]


@criterion(8, "exponentials")
def test_exponentials():
    ident = mll.check_correctness(mll.parse_ps(fixture("identity.ps")), stop_early=False)
    assert ident.correct
    cancel, keep = ident.results
    assert cancel.normal_form == Constellation()
    assert keep.normal_form == nf_of("p_xpar_nB_B(X);"), keep.normal_form
    weak = mll.cut_elimination(mll.parse_ps(fixture("weakening.ps")))
    assert weak.exhaustive and not _box_stars(weak.normal_form), weak.normal_form
    ps = mll.parse_ps(fixture("contraction.ps"))
    contr = mll.cut_elimination(ps)
    before, after = len(_box_stars(mll.vehicle(ps))), len(_box_stars(contr.normal_form))
    assert contr.exhaustive and (before, after) == (1, 2), (before, after)
    return "identity Correct, weakening erases the box, contraction copies it 1 to 2"


# ---------------------------------------------------------------- 9 to 11: properties


@criterion(9, "oracle equivalence")
def test_oracle_equivalence():
    total = correct = 0
    bad = []
    for p in mll.small_structures(max_axioms=3, max_connectives=6):
        total += 1
        ours, theirs = mll.check_correctness(p).correct, mll.dr_graph_oracle(p)
        correct += theirs
        if ours != theirs:
            bad.append(mll.format_ps(p))
    assert not bad, f"{len(bad)} disagreements, first:\n{bad[0]}"
    return f"{total} structures, {correct} correct, all agree"


@criterion(10, "fusion order")
def test_fusion_orders():
    diagrams = orders = 0
    for name, c in fixture_constellations().items():
        for d in small_diagrams(c, 5):
            whole = actualise(d)
            diagrams += 1
            for order in itertools.permutations(range(len(d.edges))):
                star, _ = fuse_all(d, order)
                orders += 1
                assert (star is None) == (whole is None), (name, d.edges, order)
                if star is not None:
                    assert canonical_constellation(Constellation((star,))) == \
                        canonical_constellation(Constellation((whole,))), (name, d.edges, order)
    return f"{diagrams} diagrams, {orders} orders"


def _term(rng, depth):
    if depth == 0 or rng.random() < 0.35:
        return Var(rng.choice("XYZ")) if rng.random() < 0.6 else Fn(rng.choice(["a", "b", "0"]))
    if rng.random() < 0.5:
        return Fn("s", (_term(rng, depth - 1),))
    return Fn(rng.choice(["f", ":"]), (_term(rng, depth - 1), _term(rng, depth - 1)))


def _ray(rng):
    if rng.random() < 0.3:
        return _term(rng, 2)
    return Fn(rng.choice("ab"), (_term(rng, 2),), rng.choice("+-"))


def _fusible_pair(rng):
    while True:
        left, right = _term(rng, 3), _term(rng, 3)
        s1 = [_ray(rng) for _ in range(rng.randint(0, 3))]
        s2 = [_ray(rng) for _ in range(rng.randint(0, 3))]
        i, j = rng.randint(0, len(s1)), rng.randint(0, len(s2))
        s1.insert(i, pos("k", left))
        s2.insert(j, neg("k", right))
        d = from_occurrences(Constellation((Star(tuple(s1)), Star(tuple(s2)))), [0, 1], [((0, i), (1, j))])
        if matchable(d.ray((0, i)), d.ray((1, j))):
            return d


@criterion(11, "weights")
def test_weights():
    assert orth.weight(P(fixture("tensor.stellar"))) == 2
    assert orth.weight(P(fixture("par.stellar"))) == 0
    e = orth.WTensor(orth.Lit(-2), orth.Lit(2))
    assert orth.formula_weight(e) == 0 and orth.visible(e)
    rng = random.Random(20240611)
    for _ in range(1000):
        d = _fusible_pair(rng)
        fused = fuse(d, d.edges[0])
        assert fused is not None
        assert orth.weight(Constellation(fused.stars)) == orth.weight(Constellation(d.stars)), d.stars
    return "2 and 0, A⊗B from -2 and 2 weighs 0 and is visible, 1000 random fusions keep weight"


# ---------------------------------------------------------------- 12, 13


@criterion(12, "additive neutrals")
def test_neutrals():
    got = [orth.check_neutral(P(fixture(f"{n}.stellar")), w) for n, w in
           [("top_unary", "top"), ("top_binary", "top"), ("zero", "zero")]]
    want = [orth.Neutral.PASSES_NOT_CORRECT, orth.Neutral.PASSES_AND_CORRECT, orth.Neutral.PASSES_NOT_CORRECT]
    assert got == want, got
    return ", ".join(g.value for g in got)


def _cli_jobs(tmp: Path):
    ends = tmp / "ends00_000.stellar"
    circ = tmp / "em.stellar"
    out = io.StringIO()
    main(["encode", "nfa", str(FIXTURES / "ends00.nfa"), "--word", "000"], out)
    ends.write_text(out.getvalue())
    out = io.StringIO()
    main(["encode", "circuit", str(FIXTURES / "em.circ")], out)
    circ.write_text(out.getvalue())
    f = lambda name: str(FIXTURES / name)  # noqa: E731
    return [
        ["run", f("add22.stellar")],
        ["run", f("example7.stellar"), "--max-occ", "16"],
        ["encode", "nfa", f("ends00.nfa"), "--word", "000"],
        ["run", str(ends), "--exclude-open", "--filter-coloured"],
        ["encode", "circuit", f("em.circ")],
        ["run", str(circ), "--exclude-open", "--exclude-covers"],
        ["goi", f("paths.loci"), "--exclude-covers"],
        ["cut-elim", f("example6.ps")],
        ["check-mll", f("example8.ps"), "--all-tests"],
        ["check-mll", f("example9.ps")],
        ["check-mll", f("identity.ps"), "--all-tests"],
        ["cut-elim", f("weakening.ps")],
        ["cut-elim", f("contraction.ps")],
        ["cut-elim", f("dereliction.ps")],
    ]


def _cli(args, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    start = time.perf_counter()
    p = subprocess.run([sys.executable, "-m", "stellar.cli", *args], capture_output=True, env=env)
    return p.returncode, p.stdout, time.perf_counter() - start


@criterion(13, "determinism")
def test_determinism():
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        slowest = 0.0
        jobs = _cli_jobs(Path(d))
        for args in jobs:
            first = _cli(args, 0)
            again = _cli(args, 1)
            if args[0] == "encode":
                many = again
            else:
                many = _cli(args + ["--workers", "3"], 2)
            assert first[:2] == again[:2] == many[:2], f"output differs for {' '.join(args)}"
            slowest = max(slowest, first[2], again[2], many[2])
        assert slowest < 5, f"slowest invocation took {slowest:.1f}s"
    return f"{len(jobs)} invocations byte-identical over two runs and 1 vs 3 workers, slowest {slowest:.1f}s"


if __name__ == "__main__":
    tests = sorted((v for v in list(globals().values()) if hasattr(v, "number")), key=lambda t: t.number)
    failed = 0
    for t in tests:
        try:
            t(None)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
