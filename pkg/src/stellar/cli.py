"""Command line front end.

Exit codes: 0 success (Correct, True), 1 usage or parse error, 2 failed
precondition, 3 bound reached or Unknown, 4 Incorrect or False.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from stellar import encode, goi, mll
from stellar import orthogonality as orth
from stellar.diagram import fuse_all
from stellar.execution import Limits, Status, execute, filter_coloured
from stellar.syntax import format_star, parse_constellation, serialize

OK, USAGE, PRECONDITION, UNKNOWN, NEGATIVE = 0, 1, 2, 3, 4


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise _Usage(f"cannot read {path}: {e.strerror}")


def _parsed(fn, path: str):
    try:
        return fn(_read(path))
    except ValueError as e:
        raise _Usage(f"{path}: {e}")


def _limits(a, exclude_open=None) -> Limits:
    if exclude_open is None:
        exclude_open = getattr(a, "exclude_open", False)
    return Limits(
        max_occurrences=a.max_occ,
        max_diagrams=a.max_diagrams,
        exclude_open=exclude_open,
        exclude_covers=a.exclude_covers,
        workers=a.workers,
    )


def _status(s: Status) -> str:
    return "exhaustive" if s is Status.EXHAUSTIVE else "bound-reached"


def _emit_result(res, out, down=False):
    nf = filter_coloured(res.normal_form) if down else res.normal_form
    out.write(serialize(nf, brackets=True))
    out.write(f"status: {_status(res.status)}\n")
    out.write(f"diagrams: {res.diagram_count}\n")
    return OK if res.exhaustive else UNKNOWN


def _trace(res, out):
    for k, d in enumerate(res.diagrams):
        out.write(f"# diagram {k}\n")
        _, lines = fuse_all(d)
        for line in lines:
            out.write(line + "\n")


# ---------------------------------------------------------------- verbs


def cmd_run(a, out):
    c = _parsed(parse_constellation, a.file)
    res = execute(c, _limits(a))
    if a.trace:
        _trace(res, out)
    return _emit_result(res, out, a.filter_coloured)


def _dot(d, k) -> str:
    lines = [f"graph d{k} {{"]
    for i, s in enumerate(d.stars):
        label = format_star(s).replace('"', '\\"')
        lines.append(f'  o{i} [label="{label}"];')
    for (i, p), (j, q) in d.edges:
        lines.append(f'  o{i} -- o{j} [label="{p}-{q}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_diagrams(a, out):
    c = _parsed(parse_constellation, a.file)
    res = execute(c, _limits(a))
    for k, d in enumerate(res.diagrams):
        if a.dot:
            out.write(_dot(d, k))
            continue
        out.write(f"diagram {k}: {len(d.stars)} occurrences, {len(d.edges)} edges\n")
        for i, o in enumerate(d.origins):
            out.write(f"  o{i} = star {o}: [{format_star(c.stars[o])}]\n")
        for (i, p), (j, q) in d.edges:
            out.write(f"  edge o{i}.{p} ~ o{j}.{q}\n")
        star, lines = fuse_all(d)
        if a.trace:
            for line in lines:
                out.write(f"  {line}\n")
        out.write(f"  result [{format_star(star)}]\n" if star is not None else "  result none\n")
    out.write(f"status: {_status(res.status)}\n")
    return OK if res.exhaustive else UNKNOWN


def cmd_encode(a, out):
    if a.kind == "nfa":
        c = encode.encode_nfa(_parsed(encode.parse_nfa, a.file))
        if a.word is not None:
            c = c + encode.encode_word(a.word)
    elif a.kind == "circuit":
        c = encode.encode_circuit(_parsed(encode.parse_circuit, a.file))
        if not a.no_pl:
            c = c + encode.pl_module()
    else:
        program, query = _parsed(encode.parse_program, a.file)
        c = encode.encode_clauses(program, query)
    out.write(serialize(c, canonical=False))
    return OK


def parse_loci(text: str) -> goi.LociPermutation:
    """Lines ``ax 1 2`` and ``cut 2 3``; ``#`` starts a comment."""
    axioms, cuts = [], []
    for n, line in enumerate(text.splitlines(), 1):
        words = line.split("#", 1)[0].split()
        if not words:
            continue
        if words[0] not in ("ax", "cut") or len(words) != 3:
            raise ValueError(f"line {n}: cannot read {line.strip()!r}")
        try:
            pair = (int(words[1]), int(words[2]))
        except ValueError:
            raise ValueError(f"line {n}: loci must be integers")
        (axioms if words[0] == "ax" else cuts).append(pair)
    return goi.LociPermutation(tuple(axioms), tuple(cuts))


def cmd_goi(a, out):
    p = _parsed(parse_loci, a.file)
    return _emit_result(execute(goi.loci_to_constellation(p), _limits(a)), out)


def cmd_cut_elim(a, out):
    ps = _parsed(mll.parse_ps, a.file)
    return _emit_result(mll.cut_elimination(ps, _limits(a), plug=a.plug), out)


def cmd_check_mll(a, out):
    ps = _parsed(mll.parse_ps, a.file)
    verdict = mll.check_correctness(ps, _limits(a), allow_mix=a.allow_mix, stop_early=not a.all_tests)
    for r in verdict.results:
        mark = "cancelling " if r.test.cancelling else ""
        state = "pass" if r.passed else "fail"
        out.write(f"test {r.test.name} ({mark}{_status(r.status)}): {state}\n")
        for line in serialize(r.normal_form, brackets=True).splitlines():
            out.write(f"  {line}\n")
    out.write(f"verdict: {verdict}\n")
    return OK if verdict.correct else NEGATIVE


def _truth_code(t: orth.Truth) -> int:
    return {orth.Truth.TRUE: OK, orth.Truth.FALSE: NEGATIVE, orth.Truth.UNKNOWN: UNKNOWN}[t]


def cmd_ortho(a, out):
    c1 = _parsed(parse_constellation, a.a)
    c2 = _parsed(parse_constellation, a.b)
    rel = orth.OrthRel(orth.Tag(a.rel), _limits(a), a.down)
    t = orth.orthogonal(c1, c2, rel)
    out.write(f"orthogonal: {t}\n")
    out.write("closure: not computed\n")
    return _truth_code(t)


def cmd_weight(a, out):
    c = _parsed(parse_constellation, a.file)
    w = orth.weight(c)
    out.write(f"weight: {w}\n")
    out.write(f"visible: {'yes' if orth.visible(w) else 'no'}\n")
    return OK


def cmd_check_neutral(a, out):
    c = _parsed(parse_constellation, a.file)
    report = orth.neutral_report(c, a.which, _limits(a, exclude_open=True))
    for n, ok, res in report.outcomes:
        out.write(f"test {a.which}{n + 1} ({_status(res.status)}): {'pass' if ok else 'fail'}\n")
        for line in serialize(res.normal_form, brackets=True).splitlines():
            out.write(f"  {line}\n")
    out.write(f"verdict: {report.verdict}\n")
    return OK if report.verdict is orth.Neutral.PASSES_AND_CORRECT else NEGATIVE


# ---------------------------------------------------------------- parser


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--max-occ", type=_positive, default=64, help="occurrence cap per diagram")
    common.add_argument("--max-diagrams", type=_positive, default=100000)
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--exclude-covers", action="store_true",
                        help="drop diagrams that merely repeat a smaller one")

    opening = _Parser(add_help=False)
    g = opening.add_mutually_exclusive_group()
    g.add_argument("--keep-open", dest="exclude_open", action="store_false",
                   help="keep diagrams with free coloured rays (default)")
    g.add_argument("--exclude-open", dest="exclude_open", action="store_true")
    opening.set_defaults(exclude_open=False)

    p = _Parser(prog="stellar", description="Stellar resolution toolkit.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("run", parents=[common, opening], help="normal form of a constellation")
    s.add_argument("file")
    s.add_argument("--filter-coloured", action="store_true", help="keep only uncoloured stars")
    s.add_argument("--trace", action="store_true", help="print fusion steps per diagram")
    s.set_defaults(fn=cmd_run)

    s = sub.add_parser("diagrams", parents=[common, opening], help="list the diagrams found")
    s.add_argument("file")
    s.add_argument("--trace", action="store_true")
    s.add_argument("--dot", action="store_true", help="print Graphviz text instead")
    s.set_defaults(fn=cmd_diagrams)

    s = sub.add_parser("encode", help="compile to .stellar text")
    s.add_argument("kind", choices=["nfa", "circuit", "clauses"])
    s.add_argument("file")
    s.add_argument("--word", help="append an encoded word (nfa only)")
    s.add_argument("--no-pl", action="store_true", help="omit the gate semantics (circuit only)")
    s.set_defaults(fn=cmd_encode)

    s = sub.add_parser("goi", parents=[common, opening], help="normalise axioms against cuts over loci")
    s.add_argument("file")
    s.set_defaults(fn=cmd_goi)

    s = sub.add_parser("cut-elim", parents=[common, opening], help="vehicle against cuts of a .ps file")
    s.add_argument("file")
    s.add_argument("--plug", action="store_true", help="plug weakened boxes instead of the black hole")
    s.set_defaults(fn=cmd_cut_elim)

    s = sub.add_parser("check-mll", parents=[common], help="run the test battery of a .ps file")
    s.add_argument("file")
    s.add_argument("--allow-mix", action="store_true")
    s.add_argument("--all-tests", action="store_true", help="keep going after a failure")
    s.set_defaults(fn=cmd_check_mll)

    s = sub.add_parser("ortho", parents=[common], help="orthogonality of two constellations")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--rel", choices=[t.value for t in orth.Tag], default="finite")
    s.add_argument("--down", action="store_true", help="judge only uncoloured stars")
    s.set_defaults(fn=cmd_ortho, exclude_open=False)

    s = sub.add_parser("weight", help="weight and visibility")
    s.add_argument("file")
    s.set_defaults(fn=cmd_weight)

    s = sub.add_parser("check-neutral", parents=[common], help="additive neutral test battery")
    s.add_argument("file")
    s.add_argument("--which", choices=["top", "zero"], required=True)
    s.set_defaults(fn=cmd_check_neutral)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        a = build_parser().parse_args(argv)
        return a.fn(a, out)
    except _Usage as e:
        sys.stderr.write(f"stellar: {e}\n")
        return USAGE
    except ValueError as e:
        sys.stderr.write(f"stellar: {e}\n")
        return PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
