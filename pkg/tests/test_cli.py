import json
import subprocess
import sys

import numpy as np
import pytest

from weylkit.cli import UsageError, main, parse_config_text, parse_polynomial_map, read_symbol, suite_params, symbol_gen
from weylkit.phase_space import FinitePhaseSpace
from weylkit.weyl_core import WeylSystem, read_operator_csv


def test_config_parsing():
    cfg = parse_config_text("# comment\nmodel = finite\nN=7\n\nseed = 42  # trailing\n")
    assert cfg == {"model": "finite", "N": "7", "seed": "42"}
    with pytest.raises(UsageError):
        parse_config_text("just words\n")
    assert parse_polynomial_map("y:-0.5, x*x:0.1", "A_x") == {"y": -0.5, "x*x": 0.1}
    with pytest.raises(UsageError, match="A_x"):
        parse_polynomial_map("y-0.5", "A_x")


def test_suite_params_validation():
    assert suite_params("isometry", {"model": "finite", "N": "7"})["Ns"] == (7,)
    with pytest.raises(UsageError, match="N"):
        suite_params("isometry", {"model": "finite", "N": "6"})


def test_symbol_gen_kinds():
    sp = FinitePhaseSpace(5)
    ws = WeylSystem(sp)
    assert np.allclose(symbol_gen("unit", sp).values, 1)
    T = ws.quantize(symbol_gen("random_hermitian", sp, seed=3))
    assert np.max(np.abs(T - T.conj().T)) < 1e-12
    pw = symbol_gen("plane_wave", sp, x0=[1, 2])
    X0 = sp.point(1, 2)
    assert np.allclose(pw.values, np.exp(2j * np.pi * sp.tables.sigma[:, X0.index] / 5))
    assert np.allclose(ws.quantize(pw), ws.pi_matrix(-X0))
    a1 = symbol_gen("random_complex", sp, seed=9).values
    assert np.array_equal(a1, symbol_gen("random_complex", sp, seed=9).values)
    with pytest.raises(UsageError):
        symbol_gen("random_complex", sp)
    with pytest.raises(UsageError):
        symbol_gen("nope", sp)


def test_finite_run_all(tmp_path, capsys):
    out = tmp_path / "o"
    assert main(["run", "--model", "finite", "--N", "7", "--d", "1", "--suite", "all", "--seed", "42", "--out", str(out)]) == 0
    rows = (out / "summary.csv").read_text().splitlines()
    assert rows[0] == "suite,checks,failed,min_slack,pass"
    assert len(rows) == 13 and all(r.endswith(",true") for r in rows[1:])
    recs = [json.loads(l) for l in (out / "op_bound.jsonl").read_text().splitlines()]
    assert all({"check", "params", "lhs", "rhs", "slack", "pass"} <= set(r) for r in recs)
    assert (out / "op_bound_slack_histogram.csv").exists()


def test_run_is_deterministic(tmp_path):
    args = ["run", "--model", "finite", "--N", "5", "--suite", "op_bound,young,wiener", "--seed", "7"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    for name in ("summary.csv", "op_bound_slack_histogram.csv", "op_bound.jsonl", "young.jsonl", "wiener.jsonl"):
        a, b = (tmp_path / "a" / name).read_bytes(), (tmp_path / "b" / name).read_bytes()
        if name.endswith(".jsonl"):
            strip = lambda s: [{k: v for k, v in json.loads(l).items() if k != "wall_time"} for l in s.splitlines()]
            assert strip(a) == strip(b)
        else:
            assert a == b


def test_kirillov_orbit_run(tmp_path, capsys):
    out = tmp_path / "k"
    code = main(["run", "--model", "kirillov", "--algebra", "heisenberg_3.json", "--xi0", "1,0,0", "--suite", "orbit", "--seed", "1", "--out", str(out)])
    assert code == 0
    orbit = json.loads((out / "orbit_orbit.json").read_text())
    assert orbit["jump_set"] == [2, 3]


def test_orbit_command(capsys):
    assert main(["orbit", "--algebra", "heisenberg_5", "--xi0", "1,0,0,0,0"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["jump_set"] == [2, 3, 4, 5]


@pytest.mark.slow
def test_magnetic_landau_run(tmp_path):
    out = tmp_path / "m"
    code = main(["run", "--model", "magnetic", "--B", "1.0", "--n", "64", "--L", "8", "--suite", "landau", "--seed", "0", "--out", str(out)])
    assert code == 0
    rows = (out / "landau_spectrum.csv").read_text().splitlines()
    assert rows[0] == "index,eigenvalue,expected,degeneracy" and len(rows) == 5
    for k, r in enumerate(rows[1:]):
        ev = float(r.split(",")[1])
        assert abs(ev - (2 * k + 1)) <= 0.02 * (2 * k + 1)


def test_symbol_pipeline(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(["symbol-gen", "random_hermitian", "--N", "5", "--seed", "1", "--out", str(a)]) == 0
    assert main(["symbol-gen", "wigner_of_window", "--N", "5", "--out", str(b)]) == 0
    op = tmp_path / "op.csv"
    assert main(["quantize", str(a), "--out", str(op)]) == 0
    T = read_operator_csv(op, 5)
    assert np.max(np.abs(T - T.conj().T)) < 1e-12
    ab = tmp_path / "ab.csv"
    assert main(["moyal", str(a), str(b), "--out", str(ab)]) == 0
    ws = WeylSystem(5)
    assert np.allclose(ws.quantize(read_symbol(ab)), ws.quantize(read_symbol(a)) @ ws.quantize(read_symbol(b)))
    capsys.readouterr()
    assert main(["modnorm", str(b), "--p", "inf", "--q", "1"]) == 0
    assert capsys.readouterr().out.strip()
    u = tmp_path / "u.csv"
    main(["symbol-gen", "gaussian_bump", "--N", "5", "--out", str(u)])
    inv = tmp_path / "inv.csv"
    assert main(["wiener", str(u), "--out", str(inv)]) == 0
    assert read_symbol(inv).space.N == 5


def test_exit_codes(tmp_path, capsys):
    assert main(["run", "--model", "finite", "--N", "6", "--suite", "isometry", "--seed", "1", "--out", str(tmp_path)]) == 2
    assert main(["run", "--model", "finite", "--N", "5", "--suite", "isometry", "--out", str(tmp_path)]) == 2
    assert main(["run", "--model", "finite", "--N", "5", "--suite", "bogus", "--seed", "1", "--out", str(tmp_path)]) == 2
    assert "suite" in capsys.readouterr().err
    # a failing suite writes its reports and exits 1
    code = main(["run", "--model", "finite", "--N", "5", "--suite", "isometry", "--seed", "1", "--set", "isometry.tol=0", "--out", str(tmp_path / "f")])
    assert code == 1
    assert (tmp_path / "f" / "summary.csv").read_text().splitlines()[1].endswith(",false")
    z = tmp_path / "z.csv"
    main(["symbol-gen", "unit", "--N", "5", "--out", str(z)])
    zero = tmp_path / "zero.csv"
    zero.write_text(z.read_text().replace("1.0,0.0", "0.0,0.0"))
    assert main(["wiener", str(zero)]) == 1


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "weylkit.cli", "run", "--list"], capture_output=True, text=True)
    assert out.returncode == 0 and "isometry" in out.stdout
