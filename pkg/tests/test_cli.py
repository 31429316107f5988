import io
import re

import pytest

from polyaut.cli import format_build, parse_build, run
from polyaut.family import FamilyParams, TargetTriangular, build_family
from polyaut.errors import ParseError


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


WORKED_TAU = "A: 2\nF: X - 8*Y^3 - 5*Y^4 - 2*Y^5\nG: Y\n"


def test_inverse():
    code, text = call("inverse", "--a", "1", "--b", "1", "--order", "2", "--at", "0,1")
    assert code == 0
    assert text.splitlines() == ["Z^0: Y", "Z^1: -Y", "Z^2: Y"]


def test_inverse_symbolic():
    code, text = call("inverse", "--a", "2", "--b", "2", "--order", "1")
    assert code == 0 and text.splitlines()[1].startswith("Z^1: -u2^2*Y^4")


def test_vseq():
    code, text = call("vseq", "--a", "2", "--b", "2", "--order", "1", "--at", "1,1,1")
    assert code == 0
    assert text.splitlines() == ["v_0: Y^2 + Y + 1", "v_1: -2*Y^5 - 5*Y^4 - 8*Y^3 - 7*Y^2 - 4*Y - 1"]


def test_wpoly_basis():
    code, text = call("wpoly", "--n", "2", "--lambda", "4", "--a", "2", "--basis")
    assert code == 0
    lines = text.splitlines()
    assert "q(0,2,0) = 4" in lines and "q(1,0,1) = 1" in lines


def test_lemma():
    assert call("lemma", "--n", "1", "--k", "2", "--m", "3", "--r", "1", "--a", "2", "--b", "2") == (0, "0\n")


def test_lemma_out_of_range():
    assert call("lemma", "--n", "0", "--k", "4", "--m", "3", "--r", "0", "--a", "2", "--b", "2")[0] == 3


def test_check_triangular(write):
    path = write("p.txt", "A: 2\nF: u2*Y^2 + u1*Y + u0\n")
    assert call("check-triangular", "--m", "1", "-f", path) == (0, "triangular m=1 d=2 q=(1,1,1)\n")
    bad = write("q.txt", "A: 2\nF: u2*Y^3 + u0*Y^2\n")
    assert call("check-triangular", "--m", "1", "-f", bad) == (1, "not triangular: ForbiddenLowVariable at l=2\n")
    assert call("check-triangular", "--m", "1", "--a", "3", "-f", path)[0] == 3


def test_polydegree(write):
    assert call("polydegree", "-f", write("t.txt", WORKED_TAU)) == (0, "(5)\n")
    assert call("polydegree", "-f", write("s.txt", "F: X^2\nG: Y\n"))[0] == 1


def test_compose(write):
    f1 = write("a.txt", "F: X + Y^3\nG: Y\n")
    f2 = write("b.txt", "F: Y\nG: X\n")
    code, text = call("compose", "-f", f1, "-f", f2)
    assert code == 0
    assert "F: X^3 + Y" in text and "G: X" in text
    assert call("compose", "-f", f1, "-f", write("c.txt", "A: 2\nF: X\nG: Y\n"))[0] == 3


def test_parse_error(write):
    assert call("polydegree", "-f", write("bad.txt", "F: X +* Y\nG: Y\n"))[0] == 2
    assert call("polydegree", "-f", "/nonexistent/file")[0] == 2
    assert call("inverse", "--a", "x")[0] == 2


def test_build_and_verify(write, tmp_path):
    code, built = call("build-family", "--a", "2", "--b", "2", "--c", "1", "--tau", write("tau.txt", WORKED_TAU))
    assert code == 0
    assert "x=1,1,1" in built and "E=-7*Y^2 - 4*Y - 1" in built
    code, report = call("verify-family", "-i", write("fam.txt", built))
    assert code == 0
    assert "overall=pass" in report
    assert report.count("=pass") == 8


def test_no_rational_root(write):
    tau = write("tau.txt", "A: 2\nF: X - 8*Y^3 - 5*Y^4 - 3*Y^5\nG: Y\n")
    assert call("build-family", "--a", "2", "--b", "2", "--c", "1", "--tau", tau)[0] == 3


def test_from_x_is_byte_stable(write):
    argv = ("build-family", "--a", "2", "--b", "3", "--c", "1", "--from-x", "1/2,-1,2", "--seed", "4")
    first, second = call(*argv), call(*argv)
    assert first == second and first[0] == 0
    code, report = call("verify-family", "-i", write("f.txt", first[1]), "--seed", "2")
    assert code == 0, report


def test_verify_detects_tampering(write):
    _, built = call("build-family", "--a", "2", "--b", "2", "--c", "1", "--tau", write("tau.txt", WORKED_TAU))
    tampered = re.sub(r"^(sigmaZ\.G=.*)$", r"\1 + Y^2", built, flags=re.M)
    assert tampered != built
    code, report = call("verify-family", "-i", write("bad.txt", tampered))
    assert code == 1 and "overall=fail" in report


def test_build_round_trip():
    res = build_family(FamilyParams(2, 2, 1), TargetTriangular(1, (0, 0, 0, -8, -5, -2), 1))
    again = parse_build(format_build(res))
    assert again == res


def test_parse_build_errors():
    with pytest.raises(ParseError):
        parse_build("a=2\n")
    with pytest.raises(ParseError):
        parse_build("nonsense\n")


def test_counterexample():
    code, text = call("counterexample", "--a", "2", "--c", "1")
    assert code == 0
    lines = text.splitlines()
    assert "source=(5)" in lines and "target=(2,2,2)" in lines
    assert "dim_source=11" in lines and "dim_target=12" in lines and "preceq=false" in lines
