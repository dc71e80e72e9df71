import os
import subprocess
import sys

import pytest

from twofactor.cli import BAD_INPUT, FAIL, OK, main, run
from twofactor.corpus import DATA

G = DATA / "graphs"
L = DATA / "links"


def tf(*args):
    return run([str(a) for a in args])


def test_check_member_and_witness():
    out = tf("check", G / "theta.tfg", G / "L2.tfg")
    assert out.code == OK
    assert out.lines == ["graph=theta member of G (no 2-faces)", "graph=L2 member of G (faces=1)"]
    bad = tf("check", G / "badface.tfg")
    assert bad.code == FAIL
    assert bad.lines[1] == "witness v=001 face=(0,1) kinds=delta,m|eta,eta bad=1"


def test_poly_and_hom():
    assert tf("poly", G / "theta.tfg").lines == ["1 + q^-2"]
    assert tf("hom", "--ring", "z2", G / "theta.tfg").lines == ["H[i=0][j=0] dim=1", "H[i=0][j=-2] dim=1"]
    z = tf("hom", "--ring", "Z", G / "prism.tfg")
    assert "H[i=1][j=-1] rank=0 torsion=2" in z.lines
    assert "H[i=0][j=-3] rank=1 torsion=" in z.lines
    assert tf("hom", "--ring", "Z", G / "badface.tfg").code == FAIL


def test_bad_inputs_exit_2(tmp_path):
    assert tf("poly", tmp_path / "missing.tfg").code == BAD_INPUT
    (tmp_path / "broken.tfg").write_text("graph x\nvertex u\nnonsense\n")
    assert tf("poly", tmp_path / "broken.tfg").code == BAD_INPUT
    assert tf("hom", "--ring", "Q", G / "theta.tfg").code == BAD_INPUT
    assert tf("flip", G / "theta.tfg", "--disk", "u").code == BAD_INPUT
    assert tf("weave", L / "trefoil.pd", "--state", "dof").code == BAD_INPUT
    assert tf("weave", L / "trefoil.pd", "--state", "01").code == BAD_INPUT
    assert tf("census", "--m", "4").code == BAD_INPUT


def test_mixed_inputs_report_the_worst_code(tmp_path):
    out = tf("poly", G / "theta.tfg", tmp_path / "missing.tfg")
    assert out.code == BAD_INPUT and out.lines[0] == "1 + q^-2"


def test_verify_and_wrong_pairing(tmp_path):
    tf("weave", L / "trefoil.pd", "--state", "111", "--out-dir", tmp_path)
    path = tmp_path / "trefoil-111.tfg"
    good = tf("verify", path)
    assert good.code == OK and good.lines[-1] == "verify graph=trefoil-111 pass=1"
    bad = tf("verify", "--suite", "moduli", "--wrong-pairing", path)
    assert bad.code == FAIL
    assert "six_cycles faces=1 failures=1 pass=0" in bad.lines


def test_weave_writes_graphs(tmp_path):
    out = tf("weave", L / "fig8.pd", "--state", "of", "--out-dir", tmp_path)
    assert out.code == OK
    assert out.lines[0] == "weave link=fig8 state=0011 model=web components=1 free_loops=0"
    assert (tmp_path / "fig8-0011.tfg").exists()
    assert tf("check", tmp_path / "fig8-0011.tfg").code == OK


def test_flip_round_trip(tmp_path):
    once = tmp_path / "once.tfg"
    twice = tmp_path / "twice.tfg"
    assert tf("flip", G / "L2.tfg", "--disk", "1,2", "--out", once).code == OK
    assert tf("flip", once, "--disk", "1,2", "--out", twice).code == OK
    assert tf("poly", twice).lines == tf("poly", G / "L2.tfg").lines


def test_cells_and_census():
    cells = tf("cells", "--ring", "z2", G / "theta.tfg")
    assert cells.code == OK and cells.lines[-1] == "realization pass=1"
    assert "cell gen=1/- dim=2 attach=0/+-:1,0/-+:1" in cells.lines
    census = tf("census", "--m", "2")
    assert census.lines[1] == "census m=2 grouping=abstract total=3 members=3 fraction=1.0000"


def test_main_prints(capsys):
    assert main(["poly", str(G / "L2.tfg")]) == OK
    assert capsys.readouterr().out == "q^4 + q^2 + 1 + q^-2\n"


def _console(args, threads):
    env = dict(os.environ, TF_THREADS=str(threads))
    cmd = [sys.executable, "-m", "twofactor.cli", *map(str, args)]
    return subprocess.run(cmd, capture_output=True, env=env, check=False)


@pytest.mark.parametrize("args", [
    ["verify", *sorted(G.glob("*.tfg"))],
    ["hom", "--ring", "z", G / "prism.tfg", G / "K4-af.tfg", G / "L2.tfg"],
])
def test_output_is_byte_identical_across_runs_and_threads(args):
    a = _console(args, 1)
    b = _console(args, 1)
    c = _console(args, 2)
    assert a.stdout == b.stdout == c.stdout
    assert a.returncode == c.returncode
