import json
import subprocess
import sys

import pytest

from conftest import DATA, GOLDEN
from weilab.cli import main, render_json
from weilab.weil import AlgebraSpec

SPECS = ["example1", "example2", "counterexample", "nontrivial", "nondwindlable"]
COMMANDS = ["info", "basis", "socle", "classify", "weights", "fixed", "conjecture", "derivations"]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("spec", SPECS)
@pytest.mark.parametrize("command", COMMANDS)
def test_golden_outputs(capsys, spec, command):
    code, out, _ = run(capsys, command, DATA / f"{spec}.weil")
    assert code == 0
    assert out == (GOLDEN / "cli" / f"{spec}_{command}.txt").read_text()


def test_more_goldens(capsys):
    assert run(capsys, "multable", DATA / "example1.weil")[1] == (GOLDEN / "cli/example1_multable.txt").read_text()
    assert run(capsys, "aut-constraints", DATA / "example1.weil")[1] == \
        (GOLDEN / "cli/example1_aut-constraints.txt").read_text()
    assert run(capsys, "fixed", DATA / "example2.weil", "--json")[1] == \
        (GOLDEN / "cli/example2_fixed.json").read_text()


def test_documented_lines(capsys):
    assert run(capsys, "info", DATA / "example1.weil")[1] == "dim=9 order=4 width=2 socle_dim=2\n"
    out = run(capsys, "fixed", DATA / "example1.weil")[1]
    assert out.splitlines()[0] == "K' = span{1, x^2*y} (dim 2), status: upper bound"
    assert run(capsys, "nf", DATA / "example1.weil", "y^4")[1] == "-x^2*y\n"
    assert run(capsys, "nf", DATA / "example1.weil", "x^4")[1] == "0\n"


@pytest.mark.parametrize("spec", SPECS)
def test_json_agrees_with_text(capsys, spec):
    path = DATA / f"{spec}.weil"
    info = json.loads(run(capsys, "info", path, "--json")[1])
    text = run(capsys, "info", path)[1]
    assert text == f"dim={info['dim']} order={info['order']} width={info['width']} socle_dim={info['socle_dim']}\n"

    fixed = json.loads(run(capsys, "fixed", path, "--json")[1])
    lines = run(capsys, "fixed", path)[1].splitlines()
    assert lines[0].startswith("K' = span{" + ", ".join(fixed["kprime"]["basis"]) + "}")
    assert f"(dim {fixed['kprime']['dim']})" in lines[0]
    assert lines[1] == "K = span{" + ", ".join(fixed["kernel"]["basis"]) + "} (dim " + str(fixed["kernel"]["dim"]) + ")"
    assert lines[2] == f"dim Der(A) = {fixed['derivation_dim']}"

    cls = json.loads(run(capsys, "classify", path, "--json")[1])
    ctext = run(capsys, "classify", path)[1].splitlines()
    assert ctext[-1] == f"verdict: {cls['verdict']}"
    for line, cert in zip(ctext, cls["certificates"]):
        assert line.startswith(f"{cert['kind']}: {cert['outcome']}")


def test_json_round_trips_spec(capsys):
    d = json.loads(run(capsys, "info", DATA / "example1.weil", "--json")[1])
    spec = AlgebraSpec.from_dict(d["spec"])
    assert spec.to_dict() == d["spec"]
    assert list(d)[:2] == ["spec", "dim"]


def test_json_to_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "scan", "--seed", 42, "--k", 2, "--r", 4, "--count", 3, "--json", target)
    assert code == 0 and out.startswith("# weilab scan seed=42")
    data = json.loads(target.read_text())
    assert data["config"]["seed"] == 42 and len(data["records"]) == 3


def test_render_json_rationals():
    from fractions import Fraction
    assert render_json({"a": Fraction(1, 2), "b": [Fraction(3)]}) == '{\n  "a": "1/2",\n  "b": [\n    "3"\n  ]\n}\n'


def test_aut_verify(capsys):
    code, out, _ = run(capsys, "aut-verify", DATA / "example1.weil", "--map", "x -> -x; y -> y")
    assert code == 0
    assert out == ("well-defined: yes\nautomorphism: yes\nlinear part: -1 0; 0 1\n"
                   "det: -1 (orientation reversing)\nunipotent: no\n")
    code, out, _ = run(capsys, "aut-verify", DATA / "example1.weil", "--map", "y -> -y")
    assert out == "well-defined: no\n"
    d = json.loads(run(capsys, "aut-verify", DATA / "example1.weil", "--map", "x -> -x", "--json")[1])
    assert d["determinant"] == "-1" and d["linear_part"] == [["-1", "0"], ["0", "1"]]


def test_aut_constraints_export(capsys, tmp_path):
    target = tmp_path / "eqs.txt"
    code, out, _ = run(capsys, "aut-constraints", DATA / "example1.weil", "--export", target)
    assert out == "unknowns: 16\nequations: 6\n"
    assert len(target.read_text().splitlines()) == 6


def test_weights_and_bound(capsys):
    assert run(capsys, "weights", DATA / "counterexample.weil", "--bound", 30)[1] == "weights: none (bound 30)\n"
    code, out, _ = run(capsys, "classify", DATA / "monomial.weil", "--no-prop4")
    assert "OrderTheorem: not applicable" in out


@pytest.mark.parametrize("spec,fragment", [
    ("bad_syntax", "bad_syntax.weil:3:"),
    ("nonlocal", "nonlocal.weil:3:"),
])
def test_domain_errors_exit_1(capsys, spec, fragment):
    code, out, err = run(capsys, "info", DATA / f"{spec}.weil")
    assert code == 1 and out == "" and fragment in err


def test_missing_file_and_bad_poly(capsys):
    code, out, err = run(capsys, "info", DATA / "nope.weil")
    assert code == 1 and out == ""
    code, out, err = run(capsys, "nf", DATA / "example1.weil", "x^9")
    assert code == 1 and "degree" in err


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["info"],
    ["scan", "--count", "0"],
    ["scan", "--k", "3..2"],
    ["classify", str(DATA / "example1.weil"), "--weight-bound", "0"],
])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "weilab", "info", str(DATA / "example1.weil")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("dim=9")


def test_warning_on_linear_generator(capsys, tmp_path):
    f = tmp_path / "lin.weil"
    f.write_text("vars: x y\norder: 3\ngen: x - y^2\n")
    code, out, err = run(capsys, "info", f)
    assert code == 0 and "warning" in err and "width=1" in out
