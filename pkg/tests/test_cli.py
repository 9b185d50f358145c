import csv
import io
import json
import math
import subprocess
import sys

import pytest

from ffincidence.cli import run


def run_json(capsys, argv):
    code = run(argv)
    return code, json.loads(capsys.readouterr().out)


CAYLEY3 = ["--q", "3", "--d", "1", "--exps", "2", "--coeffs", "1"]


def test_cert_example(capsys):
    code, cert = run_json(capsys, ["cert", "--kind", "cayley", *CAYLEY3])
    assert code == 0
    assert cert["lambda"] == pytest.approx(math.sqrt(3))
    assert cert["verdict"] is True


def test_incidence_full_example(capsys):
    code, rep = run_json(capsys, ["incidence", *CAYLEY3, "--full"])
    assert code == 0
    assert rep["count"] == 9 and rep["main"] == 9


def test_even_q_is_invalid(capsys):
    assert run(["cert", "--q", "4", "--d", "1"]) == 2
    assert "invalid input" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["cert"],
        ["cert", "--q", "5", "--exps", "2,x"],
        ["nosuch"],
        ["incidence", "--q", "5", "--d", "1", "--size", "-1"],
        ["pinned", "--q", "5", "--full", "--c", "1.5"],
        ["cert", "--q", "5", "--exps", "5"],
    ],
)
def test_invalid_inputs(argv, capsys):
    assert run(argv) == 2


def test_falsified_exit_code(capsys):
    code, cert = run_json(capsys, ["cert", "--q", "5", "--d", "2", "--exps", "2,3"])
    assert code == 1
    assert cert["verdict"] is False


def test_cap_exit_code(capsys):
    assert run(["cert", "--kind", "sum_product", "--q", "15", "--d", "3"]) == 3
    assert "cap exceeded" in capsys.readouterr().err


def test_csv_format(capsys):
    assert run(["t2", *CAYLEY3, "--full", "--format", "csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert rows[0]["t2"] == "45" and rows[0]["verdict"] == "True"


def test_spectrum_outputs(tmp_path, capsys):
    out, cert_out, gp = tmp_path / "ev.csv", tmp_path / "cert.json", tmp_path / "plot.gp"
    argv = ["spectrum", *CAYLEY3, "--out", str(out), "--cert-out", str(cert_out),
            "--gnuplot", str(gp)]
    assert run(argv) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 9
    assert sorted(round(float(r["modulus"]), 9) for r in rows).count(round(math.sqrt(3), 9)) == 6
    assert json.loads(cert_out.read_text())["bound"] == pytest.approx(math.sqrt(3))
    assert str(out) in gp.read_text()


def test_points_file_roundtrip(tmp_path, capsys):
    pts = tmp_path / "p.csv"
    sph = tmp_path / "s.csv"
    pts.write_text("x1\n0\n1\n2\n")
    sph.write_text("b1,r\n0,1\n1,0\n")
    code, rep = run_json(capsys, ["incidence", *CAYLEY3, "--points", str(pts),
                                  "--spheres", str(sph)])
    assert code == 0
    assert rep["count"] == 3  # 1 and 2 on the unit circle at 0, and 1 itself
    sph.write_text("b1,r\n0,7\n")
    assert run(["incidence", *CAYLEY3, "--points", str(pts), "--spheres", str(sph)]) == 2


@pytest.mark.parametrize(
    "argv,key,value",
    [
        (["isosceles", *CAYLEY3, "--full"], "iso", 6),
        (["ring-incidence", "--q", "9", "--d", "1", "--full"], "count", 81),
        (["pinned", *CAYLEY3, "--full", "--c", "0.5"], "good_pins", 3),
        (["ddsubset", "--q", "3", "--d", "2", "--full"], "size", 3),
        (["random", "--q", "5", "--d", "2", "--t", "0", "--trials", "5"], "frequency", 1.0),
    ],
)
def test_subcommands(argv, key, value, capsys):
    code, rep = run_json(capsys, argv)
    assert code == 0
    assert rep[key] == value


def test_deletion_subcommand(capsys):
    code, rep = run_json(capsys, ["ddsubset", "--q", "11", "--d", "2", "--full",
                                  "--method", "deletion", "--seed", "3"])
    assert code == 0 and rep["valid"] and rep["method"] == "deletion"


def test_seed_from_environment(monkeypatch, capsys):
    argv = ["ddsubset", "--q", "7", "--d", "2", "--full", "--order", "shuffle"]
    monkeypatch.setenv("FFIL_SEED", "5")
    _, from_env = run_json(capsys, argv)
    monkeypatch.delenv("FFIL_SEED")
    _, explicit = run_json(capsys, [*argv, "--seed", "5"])
    _, other = run_json(capsys, [*argv, "--seed", "6"])
    assert from_env == explicit
    assert from_env["subset"] != other["subset"]


def test_random_size_is_seeded(capsys):
    argv = ["incidence", "--q", "5", "--d", "2", "--size", "12", "--seed", "4"]
    run(argv)
    first = capsys.readouterr().out
    run(argv)
    assert capsys.readouterr().out == first


def test_byte_identical_reports(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(["random", "--q", "7", "--d", "2", "--t", "5", "--trials", "40",
                    "--seed", "2", "--jobs", "3", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ffincidence", *(["cert", *CAYLEY3])],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] is True
