import argparse
import subprocess
import sys

import pytest

from siegelren import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_renorm(capsys):
    assert run(capsys, "renorm", "--theta", "1/3", "--steps", "5") == (0, "1/3 1/2 0 0 0\n", "")
    code, out, _ = run(capsys, "renorm", "--theta", "[0;(1)]", "--steps", "3")
    assert out.split() == ["[0;(1)]", "[0;2,(1)]", "[0;(1)]"]
    code, out, _ = run(capsys, "renorm", "--theta", "1/5", "--steps", "2", "--fast")
    assert out.split() == ["1/5", "0"]


def test_seq(capsys):
    code, out, _ = run(capsys, "seq", "1", "3")
    assert code == 0 and out.splitlines() == ["A A B", "(a,b)=(2,1)"]
    code, out, _ = run(capsys, "seq", "2", "5", "--jumps", "2")
    assert out.splitlines()[2] == "j,pair,iota,nu,mu,kappa" and len(out.splitlines()) == 8


def test_seq_domain_error(capsys):
    code, _, err = run(capsys, "seq", "2", "4")
    assert code == 1 and err.startswith("E_DOMAIN:")


def test_scale(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert run(capsys, "scale", "--theta", "[0;(1)]", "--qmax", "21", "--out", str(out))[0] == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,p,q,side,re_a,im_a,d,s" and len(lines) == 7


def test_scale_rejects_non_periodic(capsys):
    code, _, err = run(capsys, "scale", "--theta", "[0;1,2,(1)]", "--qmax", "21")
    assert code == 1 and err.startswith("E_DOMAIN:")


def test_centers(capsys):
    code, out, _ = run(capsys, "centers", "--qmax", "4", "--bruteforce")
    rows = out.splitlines()
    assert rows[0] == "p,q,re_c,im_c,residual,oracle_diff" and len(rows) == 6
    assert all(float(r.split(",")[-1]) < 1e-8 for r in rows[1:])


def test_circle_stats(capsys):
    code, out, _ = run(capsys, "circle-stats", "--theta", "[0;(1)]", "--qmax", "100")
    assert code == 0 and "first-return times 2 3" in out
    code, out, _ = run(capsys, "circle-stats", "--theta", "1/5")
    assert "first-return times 5 4 (degenerate)" in out


@pytest.mark.parametrize("argv", [
    ["renorm", "--theta", "3/2", "--steps", "2"],
    ["renorm", "--theta", "1/3"],
    ["julia", "--c", "0,0", "--res", "0x3", "--out", "x.ppm"],
    ["mandel", "--window", "0,0,-1", "--out", "x.ppm"],
    ["bogus"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == 2


def test_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "mandel", "--res", "4x4", "--out", str(tmp_path / "missing" / "m.ppm"))
    assert code == 1 and err.startswith("E_IO:")


def test_help_documents_every_flag():
    parser = cli.build_parser()
    subs = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    assert set(subs.choices) == set(cli.SUBCOMMANDS)
    for name, sub in subs.choices.items():
        for action in sub._actions:
            assert action.help and action.help != argparse.SUPPRESS, (name, action.dest)
        text = sub.format_help()
        for action in sub._actions:
            for opt in action.option_strings:
                assert opt in text


IMAGE_RUNS = [
    ["julia", "--c=-0.12,0.75", "--res", "64x48", "--maxiter", "80"],
    ["mandel", "--res", "64x48", "--maxiter", "80"],
    ["molecule", "--res", "64x64", "--maxiter", "80"],
    ["rays", "--c=-1,0", "--angles", "1/3,2/3", "--depth", "8", "--res", "64x64"],
]


@pytest.mark.parametrize("argv", IMAGE_RUNS, ids=lambda a: a[0])
def test_images_byte_identical(argv, tmp_path, capsys):
    a, b = tmp_path / "a.ppm", tmp_path / "b.ppm"
    assert cli.main(argv + ["--threads", "1", "--out", str(a)]) == 0
    assert cli.main(argv + ["--threads", "8", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().startswith(b"P6\n")


def test_rays_csv(tmp_path, capsys):
    csv = tmp_path / "r.csv"
    argv = ["rays", "--c", "0,0", "--angles", "1/4", "--depth", "4", "--steps", "2", "--res", "16x16",
            "--out", str(tmp_path / "r.ppm"), "--csv", str(csv)]
    assert cli.main(argv) == 0
    rows = csv.read_text().splitlines()
    assert rows[0] == "angle,k,re,im" and len(rows) == 1 + 1 + 4 * 2


def test_siegel_csv(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli.main(["siegel", "--theta", "[0;(1)]", "--qmax", "233", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "q,dist,ratio"


def test_molecule_checks_printed(tmp_path, capsys):
    code, out, _ = run(capsys, "molecule", "--checks", "--res", "8x8", "--out", str(tmp_path / "m.ppm"))
    assert code == 0 and "FAILED" not in out and out.count(": ok") == 5


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "siegelren", "seq", "2", "3"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.splitlines() == ["A B B", "(a,b)=(1,2)"]
    res = subprocess.run([sys.executable, "-m", "siegelren", "seq", "2", "6"], capture_output=True, text=True)
    assert res.returncode == 1 and res.stderr.startswith("E_DOMAIN:")
