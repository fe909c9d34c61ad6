import json

import numpy as np
import pytest

from aokrwalk.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, load_config, main
from aokrwalk.evolution import DistributionHistory, read_matrix_csv


def run(*argv):
    return main([str(a) for a in argv])


def test_simulate_writes_history_and_manifest(tmp_path):
    out = tmp_path / "g"
    assert run("simulate", "--protocol", "swapped", "--k", 1.45, "--steps", 20, "--classes", "0,1", "--out", out) == EXIT_OK
    hist = DistributionHistory.from_csv((out / "history.csv").read_text())
    assert hist.steps == 20
    np.testing.assert_allclose(hist.total.sum(axis=1), 1, atol=1e-9)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["protocol"] == "swapped" and manifest["k"] == 1.45
    assert manifest["classes"] == [0, 1] and "workers" not in manifest
    assert (out / "history.tsv").read_text().startswith("# n\tj\tP")
    assert not (out / "betas.csv").exists()


def test_zero_steps(tmp_path):
    assert run("simulate", "--steps", 0, "--out", tmp_path) == EXIT_OK
    hist = DistributionHistory.from_csv((tmp_path / "history.csv").read_text())
    assert hist.steps == 0
    n = hist.momenta
    np.testing.assert_allclose(hist.at(0)[(n == 0) | (n == 1)], 0.5, atol=1e-15)


def test_negative_kick_rejected(tmp_path, capsys):
    assert run("simulate", "--k", -1, "--out", tmp_path) == EXIT_CONFIG
    assert "k:" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["--protocol", "spiral"],
    ["--classes", "0,0"],
    ["--steps", "-2"],
    ["--protocol", "custom", "--init-coin", "Q"],
    ["--thermal-fraction", "2"],
    ["--workers", "0"],
])
def test_config_errors(tmp_path, argv):
    assert run("simulate", *argv, "--out", tmp_path) == EXIT_CONFIG


def test_ensemble_outputs(tmp_path):
    assert run("simulate", "--fwhm", 0.025, "--n-samples", 20, "--steps", 6, "--seed", 4,
               "--thermal-fraction", 0.125, "--out", tmp_path) == EXIT_OK
    betas = (tmp_path / "betas.csv").read_text().splitlines()
    assert betas[0] == "index,beta" and len(betas) == 21
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["seed"] == 4 and manifest["fwhm"] == 0.025 and manifest["n_samples"] == 20


def test_manifest_reproduces_run(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("simulate", "--protocol", "lightshift-raw", "--chi", 2.5, "--fwhm", 0.01,
               "--n-samples", 10, "--steps", 5, "--seed", 77, "--out", a) == EXIT_OK
    assert run("simulate", "--config", a / "manifest.json", "--out", b) == EXIT_OK
    for name in ("history.csv", "history_spin1.csv", "manifest.json", "betas.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"protocol": "original", "k": 1, "steps": 3}))
    c = load_config(cfg, {"steps": 4})
    assert (c.protocol, c.k, c.steps) == ("original", 1.0, 4)
    cfg.write_text(json.dumps({"kick": 1}))
    assert run("simulate", "--config", cfg, "--out", tmp_path) == EXIT_CONFIG


def test_workers_do_not_change_bytes(tmp_path):
    common = ["--fwhm", 0.025, "--n-samples", 24, "--steps", 7, "--seed", 3]
    assert run("simulate", *common, "--workers", 1, "--out", tmp_path / "w1") == EXIT_OK
    assert run("simulate", *common, "--workers", 4, "--out", tmp_path / "w4") == EXIT_OK
    for name in ("history.csv", "history_spin2.csv", "manifest.json"):
        assert (tmp_path / "w1" / name).read_bytes() == (tmp_path / "w4" / name).read_bytes()


def test_analytic(tmp_path):
    assert run("analytic", "--steps", 15, "--k", 1.45, "--out", tmp_path) == EXIT_OK
    check = json.loads((tmp_path / "check.json").read_text())
    assert check["max_abs_deviation"] < 1e-8 and check["passed"]
    assert (tmp_path / "coefficients.csv").read_text().startswith("N,l,a1,a2\n14,0,")
    lines = (tmp_path / "analytic.csv").read_text().splitlines()
    assert lines[0] == "n,P"


def test_analytic_unkicked_single_step(tmp_path):
    assert run("analytic", "--steps", 1, "--k", 0, "--out", tmp_path) == EXIT_OK
    rows = dict(line.split(",") for line in (tmp_path / "analytic.csv").read_text().splitlines()[1:])
    assert float(rows["0"]) == pytest.approx(0.5) and float(rows["1"]) == pytest.approx(0.5)


def test_analytic_needs_a_step(tmp_path):
    assert run("analytic", "--steps", 0, "--out", tmp_path) == EXIT_CONFIG


def test_sweep_over_ratchet_size(tmp_path):
    assert run("sweep", "--axis", "S", "--values", 2, 3, 5, "--steps", 20, "--out", tmp_path) == EXIT_OK
    rows = (tmp_path / "rollup.csv").read_text().splitlines()
    assert rows[0] == "axis,value,central_fraction,side_peak_mass,status"
    central = [float(r.split(",")[2]) for r in rows[1:]]
    assert central[0] > central[1] > central[2]
    assert json.loads((tmp_path / "S=5" / "manifest.json").read_text())["classes"] == [0, 1, 2, 3, 4]


def test_sweep_keeps_partial_results(tmp_path):
    assert run("sweep", "--axis", "k", "--values", 1.2, -3, "--steps", 4, "--out", tmp_path) == EXIT_NUMERIC
    assert (tmp_path / "k=1.2" / "history.csv").exists()
    assert "k=-3" in (tmp_path / "failures.txt").read_text()
    assert (tmp_path / "rollup.csv").read_text().splitlines()[2].endswith("failed")


def test_sweep_deterministic_across_workers(tmp_path):
    args = ["sweep", "--axis", "fwhm", "--values", 0, 0.025, "--n-samples", 16, "--steps", 5, "--seed", 8]
    assert run(*args, "--workers", 1, "--out", tmp_path / "a") == EXIT_OK
    assert run(*args, "--workers", 4, "--out", tmp_path / "b") == EXIT_OK
    assert (tmp_path / "a" / "rollup.csv").read_bytes() == (tmp_path / "b" / "rollup.csv").read_bytes()
    assert (tmp_path / "a" / "fwhm=0.025" / "history.csv").read_bytes() == \
        (tmp_path / "b" / "fwhm=0.025" / "history.csv").read_bytes()


def synthetic_history(path, energy):
    n = np.arange(-40, 41)
    rows = []
    for e in energy:
        p = np.zeros(n.size)
        if e > 0:
            # split between +-m and 0 so that n^2/2 averages to e
            m = 30
            w = 2 * e / m ** 2
            p[n == m] = p[n == -m] = w / 2
            p[n == 0] = 1 - w
        else:
            p[n == 0] = 1
        rows.append(p)
    h = DistributionHistory(n, np.array(rows), np.zeros((len(rows), n.size)), np.ones(len(rows)), {})
    path.write_text(h.to_csv())


def test_energy_quadratic(tmp_path, capsys):
    j = np.arange(11)
    synthetic_history(tmp_path / "quad.csv", 0.5 * j ** 2.0)
    assert run("energy", tmp_path / "quad.csv", "--out", tmp_path / "e") == EXIT_OK
    fit = json.loads((tmp_path / "e" / f"{tmp_path.name}_quad_fit.json").read_text())
    assert fit["exponent"] == pytest.approx(2.0, abs=1e-9)
    assert fit["fit_range"] == [2, 10]


def test_energy_window_too_small(tmp_path):
    synthetic_history(tmp_path / "h.csv", np.arange(6.0))
    assert run("energy", tmp_path / "h.csv", "--window", 2, 3, "--out", tmp_path) == EXIT_CONFIG


def test_energy_nonpositive(tmp_path):
    synthetic_history(tmp_path / "h.csv", np.zeros(6))
    assert run("energy", tmp_path / "h.csv", "--out", tmp_path / "e") == EXIT_NUMERIC


def write_matrix(path, m):
    path.write_text("n," + ",".join(map(str, range(m.shape[1]))) + "\n" + "".join(
        f"{i}," + ",".join(repr(float(v)) for v in row) + "\n" for i, row in enumerate(m)))


def test_compare(tmp_path):
    m = np.array([[0.1, 0.2, 0.0], [0.3, 0.4, 0.5]])
    write_matrix(tmp_path / "o.csv", 3 * m)
    write_matrix(tmp_path / "p.csv", m)
    assert run("compare", tmp_path / "o.csv", tmp_path / "p.csv", "--scale-a", 3, "--out", tmp_path / "c") == EXIT_OK
    summary = json.loads((tmp_path / "c" / "summary.json").read_text())
    assert summary["total_error"] == pytest.approx(0, abs=1e-15)
    assert summary["skipped_pixels"] == 1 and summary["scale_a"] == 3
    assert read_matrix_csv(write_matrix(tmp_path / "x.csv", m) or (tmp_path / "x.csv").read_text())[1].shape == (2, 3)


def test_compare_shape_mismatch(tmp_path):
    write_matrix(tmp_path / "o.csv", np.ones((2, 3)))
    write_matrix(tmp_path / "p.csv", np.ones((3, 3)))
    assert run("compare", tmp_path / "o.csv", tmp_path / "p.csv", "--out", tmp_path) == EXIT_CONFIG


def test_simulate_history_feeds_compare(tmp_path):
    assert run("simulate", "--steps", 4, "--out", tmp_path / "s") == EXIT_OK
    h = tmp_path / "s" / "history.csv"
    assert run("compare", h, h, "--out", tmp_path / "c") == EXIT_OK
    assert json.loads((tmp_path / "c" / "summary.json").read_text())["total_error"] == 0


def test_version_and_help(capsys):
    assert main(["--version"]) == EXIT_OK
    assert main([]) == EXIT_CONFIG
