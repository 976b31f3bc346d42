import csv
import json
import math
import time

import numpy as np
import pytest

from support_recovery.cli import main


def _read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# boundary
# ---------------------------------------------------------------------------


def test_boundary_default_gaussian(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["boundary", "--out", str(out)]) == 0
    rows = _read_csv(out)
    assert len(rows) == 99
    row = next(r for r in rows if abs(float(r["beta"]) - 0.75) < 1e-9)
    assert float(row["g"]) == pytest.approx(2.25, abs=1e-6)
    assert float(row["h"]) == pytest.approx(0.75, abs=1e-6)
    assert float(row["f"]) == pytest.approx(0.25, abs=1e-6)
    assert float(row["nonudd"]) == pytest.approx(1.0, abs=1e-6)
    # detection column only exists above beta = 1/2
    low = next(r for r in rows if abs(float(r["beta"]) - 0.25) < 1e-9)
    assert low["f"] == ""


def test_boundary_laplace(tmp_path):
    out = tmp_path / "b1.csv"
    assert main(["boundary", "--nu", "1", "--out", str(out)]) == 0
    rows = _read_csv(out)
    row = next(r for r in rows if abs(float(r["beta"]) - 0.5) < 1e-9)
    assert float(row["g"]) == pytest.approx(1.5, abs=1e-6)
    assert row["f"] == ""


def test_boundary_two_points(tmp_path):
    out = tmp_path / "b2.csv"
    assert main(["boundary", "--grid-points", "2", "--out", str(out)]) == 0
    assert len(_read_csv(out)) == 2


def test_boundary_bad_grid(tmp_path, capsys):
    code = main(["boundary", "--grid-points", "1", "--out", str(tmp_path / "x.csv")])
    assert code == 2
    assert "error" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


SMOKE_CONFIG = {
    "p": 50,
    "beta_grid": [0.4, 0.8],
    "r_grid": [1.0, 6.0],
    "reps": 5,
    "family": {"kind": "gaussian"},
    "noise": {"kind": "iid"},
    "procedure": {"kind": "agnostic"},
    "seed": 7,
}


def test_simulate_smoke_and_manifest_rerun(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(SMOKE_CONFIG))
    out1 = tmp_path / "grid1.csv"
    start = time.perf_counter()
    assert main(["simulate", "--config", str(cfg_path), "--out", str(out1)]) == 0
    assert time.perf_counter() - start < 5.0
    manifest_path = tmp_path / "grid1.csv.manifest.json"
    manifest = json.loads(manifest_path.read_text())
    assert manifest["seed"] == 7
    assert manifest["cells"] == 4
    assert "config_sha256" in manifest and "library_version" in manifest

    # identical config -> identical bytes
    out2 = tmp_path / "grid2.csv"
    assert main(["simulate", "--config", str(cfg_path), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()

    # the manifest itself is a valid re-run config
    out3 = tmp_path / "grid3.csv"
    assert main(["simulate", "--config", str(manifest_path), "--out", str(out3)]) == 0
    assert out1.read_bytes() == out3.read_bytes()


def test_simulate_override_changes_output(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(SMOKE_CONFIG))
    out = tmp_path / "g.csv"
    assert main(["simulate", "--config", str(cfg_path), "--out", str(out), "--reps", "9"]) == 0
    rows = _read_csv(out)
    assert all(r["reps"] == "9" for r in rows)


def test_simulate_parallel_matches_serial(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(SMOKE_CONFIG))
    out1 = tmp_path / "s.csv"
    out2 = tmp_path / "p.csv"
    assert main(["simulate", "--config", str(cfg_path), "--out", str(out1)]) == 0
    assert main(["simulate", "--config", str(cfg_path), "--out", str(out2),
                 "--parallelism", "3"]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_simulate_invalid_beta_exits_2(tmp_path, capsys):
    bad = dict(SMOKE_CONFIG, beta_grid=[0.4, 1.4])
    cfg_path = tmp_path / "bad.json"
    cfg_path.write_text(json.dumps(bad))
    code = main(["simulate", "--config", str(cfg_path), "--out", str(tmp_path / "x.csv")])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_simulate_missing_config_file(tmp_path, capsys):
    code = main(["simulate", "--config", str(tmp_path / "absent.json"),
                 "--out", str(tmp_path / "x.csv")])
    assert code == 2


# ---------------------------------------------------------------------------
# quantile
# ---------------------------------------------------------------------------


def test_quantile_upper_p_gaussian(capsys):
    assert main(["quantile", "--family", "gaussian", "--upper-p", "1e4"]) == 0
    out = capsys.readouterr().out
    assert "u_p" in out and "asymptotic" in out
    exact = float(out.splitlines()[0].split("=")[-1])
    asym = float(out.splitlines()[1].split("=")[-1].split("(")[0])
    assert exact == pytest.approx(3.719016485, abs=1e-6)
    assert asym == pytest.approx(math.sqrt(2 * math.log(1e4)), abs=1e-9)


def test_quantile_laplace_value(capsys):
    assert main(["quantile", "--family", "laplace", "--q", "0.75"]) == 0
    out = capsys.readouterr().out
    assert float(out.split("=")[-1]) == pytest.approx(math.log(2.0), abs=1e-9)


def test_quantile_bad_q(capsys):
    assert main(["quantile", "--family", "gaussian", "--q", "1.5"]) == 2
    assert main(["quantile", "--family", "gaussian"]) == 2
    assert main(["quantile", "--family", "gg", "--q", "0.5"]) == 2  # missing --nu


# ---------------------------------------------------------------------------
# check-udd / stability / pareto
# ---------------------------------------------------------------------------


def test_check_udd_ar1(capsys):
    assert main(["check-udd", "--model", "ar1:0.5", "--p", "10", "--delta", "0.4"]) == 0
    out = capsys.readouterr().out
    assert "N_p=2" in out


def test_check_udd_identity(capsys):
    assert main(["check-udd", "--model", "iid", "--p", "20", "--delta", "0.5"]) == 0
    assert "N_p=0" in capsys.readouterr().out


def test_check_udd_block_with_packing(capsys):
    assert main(["check-udd", "--model", "block:0.5", "--p", "100",
                 "--delta", "0.5", "--packing"]) == 0
    out = capsys.readouterr().out
    assert "N_p=9" in out and "packing_size=10" in out


def test_check_udd_matrix_file(tmp_path, capsys):
    sigma = np.eye(5)
    path = tmp_path / "sigma.csv"
    np.savetxt(path, sigma, delimiter=",")
    assert main(["check-udd", "--matrix", str(path), "--delta", "0.3"]) == 0
    assert "N_p=0" in capsys.readouterr().out


def test_stability_smoke(capsys):
    assert main(["stability", "--model", "iid", "--family", "gaussian",
                 "--p", "2000", "--reps", "50", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "median=" in out
    median = float(out.split("median=")[1].split()[0])
    assert 0.8 <= median <= 1.1


def test_pareto_smoke(capsys):
    assert main(["pareto", "--p", "2000", "--tail-index", "2", "--fraction", "0.5",
                 "--r", "3", "--reps", "300", "--seed", "1",
                 "--limit-draws", "50000"]) == 0
    out = capsys.readouterr().out
    assert "empirical" in out and "frechet" in out
    gap = float(out.split("gap = ")[1])
    assert gap <= 0.1


# ---------------------------------------------------------------------------
# global behaviour
# ---------------------------------------------------------------------------


def test_help_exits_zero(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0


def test_unknown_command_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_deterministic_given_seed(capsys):
    args = ["stability", "--model", "ar1:0.8", "--family", "gaussian",
            "--p", "1000", "--reps", "20", "--seed", "5"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
