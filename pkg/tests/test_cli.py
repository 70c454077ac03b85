import io
import subprocess
import sys

import pytest

from helpers import FIXTURES
from stellar.cli import main


def run(*args):
    out = io.StringIO()
    code = main([str(a) for a in args], out)
    return code, out.getvalue()


def fx(name):
    return FIXTURES / name


def test_addition_golden():
    assert run("run", fx("add22.stellar")) == (0, "[s(s(s(s(0))))];\nstatus: exhaustive\ndiagrams: 1\n")


def test_empty_golden():
    assert run("run", fx("empty.stellar")) == (0, "status: exhaustive\ndiagrams: 0\n")


def test_divergence_exits_3():
    code, text = run("run", fx("example7.stellar"), "--max-occ", 8)
    assert code == 3
    assert text.endswith("status: bound-reached\ndiagrams: 8\n")


def test_goi_golden():
    assert run("goi", fx("paths.loci")) == (0, "[5 6];\n[7 8];\nstatus: exhaustive\ndiagrams: 2\n")


def test_cut_elimination_golden():
    code, text = run("cut-elim", fx("example6.ps"))
    assert code == 0 and text.startswith("[+c.p_A(X0) +c.p_nA(X0)];\n")


def test_incorrect_structure_names_the_failing_test():
    code, text = run("check-mll", fx("example9.ps"))
    assert code == 4
    assert "test default (bound-reached): fail" in text
    assert text.endswith("verdict: Incorrect (default)\n")


def test_correct_structure():
    code, text = run("check-mll", fx("example8.ps"))
    assert code == 0 and text.count(": pass") == 2 and text.endswith("verdict: Correct\n")


def test_encode_nfa_with_word():
    code, text = run("encode", "nfa", fx("ends00.nfa"), "--word", "000")
    assert code == 0
    assert text.splitlines()[-1] == "+i(0:0:0:eps);"


def test_encoded_text_runs(tmp_path):
    _, text = run("encode", "nfa", fx("ends00.nfa"), "--word", "100")
    f = tmp_path / "a.stellar"
    f.write_text(text)
    assert run("run", f, "--exclude-open", "--filter-coloured")[1].startswith("[accept];\n")


def test_encode_circuit_and_clauses():
    assert run("encode", "circuit", fx("em.circ"))[0] == 0
    code, text = run("encode", "clauses", fx("family.pl"))
    assert code == 0 and "+parent(d, j);" in text


def test_weight():
    assert run("weight", fx("tensor.stellar")) == (0, "weight: 2\nvisible: yes\n")
    assert run("weight", fx("par.stellar")) == (0, "weight: 0\nvisible: yes\n")


def test_neutral_verdicts():
    code, text = run("check-neutral", fx("top_binary.stellar"), "--which", "top")
    assert code == 0 and text.endswith("verdict: PassesAndCorrect\n")
    code, text = run("check-neutral", fx("zero.stellar"), "--which", "zero")
    assert code == 4 and text.endswith("verdict: PassesNotCorrect\n")


def test_ortho():
    code, text = run("ortho", fx("add22.stellar"), fx("empty.stellar"))
    assert code == 0 and text.startswith("orthogonal: True\n")


def test_trace_lines():
    _, text = run("diagrams", fx("add22.stellar"), "--trace")
    fuses = [l for l in text.splitlines() if l.strip().startswith("FUSE ")]
    assert len(fuses) == 3
    assert "result [s(s(s(s(0))))]" in text


def test_dot_output():
    _, text = run("diagrams", fx("add22.stellar"), "--dot")
    assert text.startswith("graph d0 {") and text.count(" -- ") == 3


@pytest.mark.parametrize("args", [
    ["run", "no-such-file.stellar"],
    ["run", "add22.stellar", "--bogus"],
    ["run", "add22.stellar", "--max-occ", "0"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_1(args, capsys):
    args = [str(fx(a)) if a.endswith(".stellar") and a != "no-such-file.stellar" else a for a in args]
    assert run(*args)[0] == 1
    assert capsys.readouterr().err.startswith("stellar: ")


def test_parse_error_exits_1(tmp_path):
    f = tmp_path / "bad.stellar"
    f.write_text("+a(X;")
    assert run("run", f)[0] == 1


def test_precondition_exits_2():
    assert run("ortho", fx("tensor.stellar"), fx("add22.stellar"), "--rel", "structural")[0] == 2


@pytest.mark.parametrize("args", [
    ["run", "example7.stellar", "--max-occ", "12"],
    ["check-mll", "identity.ps", "--all-tests"],
    ["cut-elim", "contraction.ps"],
])
def test_workers_do_not_change_output(args):
    args = [str(fx(a)) if "." in a else a for a in args]
    assert run(*args) == run(*args, "--workers", "2") == run(*args)


def test_console_entry_point():
    p = subprocess.run([sys.executable, "-m", "stellar.cli", "run", str(fx("add22.stellar"))],
                       capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.startswith("[s(s(s(s(0))))];")
