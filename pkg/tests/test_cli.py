import io
import subprocess
import sys
from pathlib import Path

import pytest

from spanlab.cli import run

DATA = Path(__file__).resolve().parents[1] / "demos" / "data" / "c2.txt"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    rc = run(list(argv), out, err)
    return rc, out.getvalue(), err.getvalue()


def test_marks_c2():
    rc, out, _ = call("marks", "--group", "C2")
    assert rc == 0
    assert "  2 0\n  1 1" in out


def test_marks_tsv():
    rc, out, _ = call("marks", "--group", "S3", "--format", "tsv")
    assert rc == 0 and "6\t0\t0\t0" in out and "1\t1\t1\t1" in out


def test_burnside_output_reparses(tmp_path):
    rc, out, _ = call("burnside", "--group", "S3")
    assert rc == 0 and "validation: pass" in out
    body = "\n".join(l for l in out.splitlines() if not l.startswith(("==", "validation")))
    f = tmp_path / "a.txt"
    f.write_text(body + "\n")
    rc2, out2, _ = call("mackey-check", "--in", str(f))
    assert rc2 == 0 and "result: pass" in out2


def test_mackey_check_failure_exit(tmp_path):
    bad = DATA.read_text().replace("tr 0,1 0\n2\n", "tr 0,1 0\n3\n")
    f = tmp_path / "bad.txt"
    f.write_text(bad)
    rc, out, _ = call("mackey-check", "FP", "--in", str(f))
    assert rc == 1 and "FAIL" in out


def test_span_compose():
    rc, out, _ = call("span-compose", "through_free", "through_free", "--in", str(DATA))
    assert rc == 0
    assert "apex orbits: 2" in out


def test_norm_demo():
    rc, out, _ = call("norm-demo", "--fold", "3")
    assert rc == 0
    assert "recursion depth: 2" in out and "identity: yes" in out
    rc, out, _ = call("norm-demo", "--map", "fold", "--in", str(DATA), "--ring", "Zmod:4")
    assert rc == 0


def test_class_check():
    rc, out, _ = call("class-check", "all", "isos", "surjective", "--size", "3")
    assert rc == 0 and "evidence only" in out
    rc, _, err = call("class-check", "bogus")
    assert rc == 2 and "unknown class" in err


def test_qfin_eval():
    rc, out, _ = call("qfin-eval", "{1:1, 2:1, 3:1, 6:1}", "--level", "6",
                      "--profunctor", "burnside")
    assert rc == 0
    rows = [l.split() for l in out.splitlines() if l.startswith("      ")]
    assert rows[-1] == ["6", "12"]
    assert "rank of A_Z<=6: 9" in out  # 4 + 3 + 1 + 1
    rc, _, _ = call("qfin-eval", "{5:1}", "--level", "6", "--profunctor", "fixed")
    assert rc == 2


def test_selftest():
    rc, out, _ = call("selftest")
    assert rc == 0 and "summary: 6/6 passed" in out


@pytest.mark.parametrize("argv", [
    ["marks", "--group", "Q8"],
    ["marks", "--group", "S4", "--bound", "10"],
    ["marks"],
    ["marks", "--group", "C2", "--ring", "R"],
    ["marks", "--group", "C2", "--in", "/nonexistent/file"],
    ["frobnicate"],
])
def test_input_errors_exit_2(argv):
    assert call(*argv)[0] == 2


def test_parse_error_reports_position(tmp_path):
    f = tmp_path / "x.txt"
    f.write_text("group G 2\n0 1\n1 x\n")
    rc, _, err = call("marks", "--group", "G", "--in", str(f))
    assert rc == 2 and "line 3, column 3" in err


def test_repeated_runs_identical():
    for argv in (["marks", "--group", "S3"], ["burnside", "--group", "C4"],
                 ["norm-demo", "--fold", "2"], ["selftest", "--seed", "3"]):
        assert call(*argv) == call(*argv)


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "spanlab.cli", "marks", "--group", "C3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "3 0" in res.stdout
