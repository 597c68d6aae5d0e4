"""CLI surface tests: subcommands, file formats, exit codes, determinism."""

import math
import subprocess
import sys

import numpy as np

from mhkz import approximator as ap
from mhkz import verify
from mhkz.cli import main
from mhkz.dyadic import dim
from mhkz.embedding import CoefVector
from mhkz.functions import REGISTRY, get
from mhkz.smolyak import CenterSamples, smolyak_eval_many


def run_cli(*args):
    return main(list(args))


def test_registry_contents_and_integrals():
    assert set(REGISTRY) == {
        "paper-example", "constant", "separable-x", "bilinear", "holder-half"
    }
    assert get("bilinear").reference_integral == 0.25
    assert get("holder-half").reference_integral == 2.0 / 9.0
    assert abs(get("separable-x").reference_integral - (1 - math.cos(3.0)) / 3.0) < 1e-15
    assert get("holder-half").alpha == 0.5
    # Monte Carlo sanity on the committed oscillatory-surface constant
    rng = np.random.default_rng(801)
    pts = rng.random((200_000, 2))
    mc = float(get("paper-example").f(pts[:, 0], pts[:, 1]).mean())
    assert abs(mc - get("paper-example").reference_integral) < 3e-3


def test_fit_writes_expected_file_size(tmp_path, capsys):
    out = tmp_path / "model.mhkz"
    code = run_cli("fit", "--function", "paper-example", "--m", "7", "--c1", "8",
                   "--seed", "1", "--out", str(out))
    assert code == 0
    assert out.stat().st_size == 40 + 8 * dim(7)  # 40-byte header + 576 f64
    line = capsys.readouterr().out.strip()
    assert line.startswith("fit ") and "l=24108" in line and "m=7" in line


def test_fit_rerun_byte_identical(tmp_path):
    a, b = tmp_path / "a.mhkz", tmp_path / "b.mhkz"
    for path in (a, b):
        assert run_cli("fit", "--function", "bilinear", "--m", "5", "--seed", "9",
                       "--out", str(path)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_fit_then_integrate_constant(tmp_path, capsys):
    out = tmp_path / "const.mhkz"
    # The default budget at m=3 stops short of full convergence; 3000
    # use-once steps contract the residual to the float floor.
    assert run_cli("fit", "--function", "constant", "--m", "3", "--seed", "1",
                   "--l", "3000", "--out", str(out)) == 0
    capsys.readouterr()
    assert run_cli("integrate", "--model", str(out)) == 0
    printed = capsys.readouterr().out
    value = float(printed.split("integral=")[1].split()[0])
    assert abs(value - 1.0) < 1e-6


def test_fit_reference_reports_l2(capsys):
    assert run_cli("fit", "--function", "bilinear", "--m", "4", "--seed", "2",
                   "--reference", "--mc-points", "5000") == 0
    line = capsys.readouterr().out
    assert "l2=" in line and "l2_se=" in line


def test_fit_from_samples_csv(tmp_path, capsys):
    csv = tmp_path / "data.csv"
    rng = np.random.default_rng(802)
    rows = ["x,y,value"]
    for x, y in rng.random((500, 2)):
        rows.append(f"{float(x)!r},{float(y)!r},{float(x * y)!r}")
    csv.write_text("\n".join(rows) + "\n")
    out = tmp_path / "fit.mhkz"
    assert run_cli("fit", "--samples", str(csv), "--m", "3", "--out", str(out)) == 0
    assert "l=500" in capsys.readouterr().out
    model = ap.load_model(out)
    assert model.m == 3


def test_spin_fit_roundtrip(tmp_path, capsys):
    out = tmp_path / "ens"
    assert run_cli("spin-fit", "--function", "bilinear", "--m", "3", "--seed", "4",
                   "--l", "400", "--spins", "3", "--out", str(out)) == 0
    assert (out / "manifest.txt").exists()
    ens = ap.load_ensemble(out)
    assert len(ens.models) == 3
    capsys.readouterr()
    assert run_cli("integrate", "--model", str(out)) == 0
    value = float(capsys.readouterr().out.split("integral=")[1].split()[0])
    assert abs(value - 0.25) < 0.05


def test_grid_zero_model(tmp_path):
    path = tmp_path / "zero.mhkz"
    ap.save_model(ap.Model(4, CoefVector.zeros(4)), path)
    assert run_cli("grid", "--model", str(path), "--grid", "8",
                   "--out", str(tmp_path / "z")) == 0
    csv_lines = (tmp_path / "z.csv").read_text().splitlines()
    assert csv_lines[0] == "x,y,value"
    assert len(csv_lines) == 1 + 64
    assert all(line.endswith(",0.0") for line in csv_lines[1:])
    pgm = (tmp_path / "z.pgm").read_bytes()
    header = b"P5\n8 8\n255\n"
    assert pgm.startswith(header)
    assert set(pgm[len(header):]) == {0}


def test_grid_smolyak_mode_matches_direct_eval(tmp_path):
    g = 16
    for m in (2, 4):
        base = tmp_path / f"oracle{m}"
        assert run_cli("grid", "--mode", "smolyak", "--function", "bilinear",
                       "--m", str(m), "--grid", str(g), "--out", str(base)) == 0
        rows = (tmp_path / f"oracle{m}.csv").read_text().splitlines()[1:]
        data = np.array([[float(v) for v in row.split(",")] for row in rows])
        samples = CenterSamples.from_function(get("bilinear").f, m)
        direct = smolyak_eval_many(samples, data[:, 0], data[:, 1])
        assert np.abs(data[:, 2] - direct).max() < 1e-10


def test_grid_csv_stable_bytes(tmp_path):
    for name in ("r1", "r2"):
        assert run_cli("grid", "--mode", "smolyak", "--function", "paper-example",
                       "--m", "3", "--grid", "32", "--out", str(tmp_path / name)) == 0
    assert (tmp_path / "r1.csv").read_bytes() == (tmp_path / "r2.csv").read_bytes()
    assert (tmp_path / "r1.pgm").read_bytes() == (tmp_path / "r2.pgm").read_bytes()


def test_compare_constant_function(tmp_path):
    out = tmp_path / "table.csv"
    assert run_cli("compare", "--function", "constant", "--m", "3..4",
                   "--trials", "2", "--l", "3000", "--mc-points", "2000",
                   "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "m,n,l,smolyak_l2,fit_l2,spin_l2,mc_int_err,fit_int_err,smolyak_int_err"
    assert len(lines) == 3
    for line in lines[1:]:
        cells = line.split(",")
        assert cells[5] == ""  # spin column empty without --spins
        for col in (3, 4, 6, 7, 8):
            assert abs(float(cells[col])) <= 1e-8


def test_compare_with_spins_and_stability(tmp_path):
    args = ("compare", "--function", "bilinear", "--m", "3", "--trials", "2",
            "--l", "500", "--spins", "2", "--mc-points", "2000")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(*args, "--out", str(a)) == 0
    assert run_cli(*args, "--out", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()
    cells = a.read_text().splitlines()[1].split(",")
    assert cells[5] != ""  # spin column populated
    assert float(cells[5]) >= 0.0


def test_verify_subcommand_passes(capsys):
    import time

    started = time.perf_counter()
    assert run_cli("verify") == 0
    assert time.perf_counter() - started < 60
    out = capsys.readouterr().out
    assert out.count("PASS") == 6 and "FAIL" not in out


def test_verify_failure_exit_code(monkeypatch, capsys):
    failing = verify.CheckResult("synthetic", 1e-9, 1.0, False, "injected")
    monkeypatch.setattr(verify, "run_all", lambda: [failing])
    assert run_cli("verify") == 2
    assert "FAIL" in capsys.readouterr().out


def test_verify_detects_corruption_and_wrong_convention():
    # One perturbed weight entry must break the reproduction identity, as
    # must the rejected band-scale convention.
    assert verify.exactness_max_error(3, "bilinear", corrupt=(5, 1e-3)) > 1e-4
    assert verify.exactness_max_error(2, "bilinear", band_scale_offset=0) > 1e-3
    clean = verify.exactness_max_error(3, "bilinear")
    assert clean < 1e-10


def test_compare_without_reference_integral(monkeypatch, tmp_path, capsys):
    from mhkz import functions as registry_mod

    no_ref = registry_mod.TestFunction(
        "no-ref", get("bilinear").f, 1.0, None, "registry entry without integral"
    )
    monkeypatch.setitem(registry_mod.REGISTRY, "no-ref", no_ref)
    out = tmp_path / "t.csv"
    assert run_cli("compare", "--function", "no-ref", "--m", "3", "--trials", "2",
                   "--l", "200", "--mc-points", "1000", "--out", str(out)) == 0
    assert "warning" in capsys.readouterr().err
    cells = out.read_text().splitlines()[1].split(",")
    assert cells[6] == cells[7] == cells[8] == ""  # integration columns empty


def test_usage_exit_codes(tmp_path):
    assert run_cli("fit", "--function", "no-such-fn", "--m", "3") == 1
    assert run_cli("fit", "--m", "3") == 1  # neither --function nor --samples
    assert run_cli("spin-fit", "--function", "bilinear", "--m", "3",
                   "--l", "50", "--spins", "0") == 1
    assert run_cli("compare", "--function", "bilinear", "--m", "5..3") == 1
    assert run_cli("grid", "--grid", "8", "--out", str(tmp_path / "x")) == 1
    assert run_cli("grid", "--mode", "smolyak", "--grid", "8",
                   "--out", str(tmp_path / "x")) == 1
    assert run_cli("grid", "--model", "irrelevant", "--grid", "1",
                   "--out", str(tmp_path / "x")) == 1  # bad G checked first


def test_io_exit_codes(tmp_path):
    assert run_cli("integrate", "--model", str(tmp_path / "missing.mhkz")) == 3
    junk = tmp_path / "junk.mhkz"
    junk.write_bytes(b"JUNKJUNKJUNK")
    assert run_cli("integrate", "--model", str(junk)) == 3


def test_argparse_usage_error_is_exit_1():
    proc = subprocess.run(
        [sys.executable, "-m", "mhkz", "fit"],  # missing required --m
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1
    proc = subprocess.run([sys.executable, "-m", "mhkz", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "natural log" in proc.stdout or "ln(n)" in proc.stdout
