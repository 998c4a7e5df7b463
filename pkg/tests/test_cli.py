"""Command-line parsing, verbs and output formats."""

import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from lebesgue_qso.cli import ConfigError, Table, execute, main, parse_config, parse_initial, render
from lebesgue_qso import AtomicMeasure, CdfMeasure


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    status = execute(parse_config(argv), stdout=out, stderr=err)
    return status, out.getvalue(), err.getvalue()


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestParse:
    def test_happy_path(self):
        cfg = parse_config(["iterate-atoms", "--p", "0.8", "--initial", "atoms 0.2:0.5,0.7:0.5", "--steps", "30"])
        assert cfg.command == "iterate-atoms" and cfg.p == 0.8 and cfg.steps == 30

    def test_preset(self):
        cfg = parse_config(["density", "--p", "0.8", "--initial", "pow:2", "--steps", "10", "--grid", "501"])
        assert cfg.grid == 501 and cfg.initial == "pow:2"

    def test_defaults(self):
        cfg = parse_config(["density", "--p", "0.8"])
        assert (cfg.steps, cfg.grid, cfg.tol, cfg.seed, cfg.format) == (20, 1001, 1e-6, 0, "csv")

    def test_p_out_of_range(self):
        with pytest.raises(ConfigError, match=r"p must lie in \[0,1\]"):
            parse_config(["density", "--p", "1.2"])

    @pytest.mark.parametrize("argv", [
        ["density"],
        ["nonsense", "--p", "0.3"],
        ["density", "--p", "0.3", "--steps", "-1"],
        ["density", "--p", "0.3", "--grid", "1"],
        ["density", "--p", "0.3", "--tol", "0"],
        ["density", "--p", "0.3", "--format", "xml"],
        ["density", "--p", "nan"],
        ["particles", "--p", "0.3", "--threads", "0"],
        ["density", "--p", "0.3", "--initial", "pow:0.5"],
        ["density", "--p", "0.3", "--initial", "beta:2"],
    ])
    def test_rejects(self, argv):
        with pytest.raises(ConfigError):
            parse_config(argv)

    @pytest.mark.parametrize("text", [
        "atoms 0.7:0.5,0.2:0.5",
        "atoms 0.2:0.5,0.7:0.4",
        "atoms 0.2:0.5,1.0:0.5",
        "atoms 0.2:1.5,0.7:-0.5",
        "atoms 0.2-0.5",
        "atoms",
    ])
    def test_bad_atoms(self, text):
        with pytest.raises(ConfigError):
            parse_initial(text)

    def test_measures(self):
        assert isinstance(parse_initial("uniform"), CdfMeasure)
        assert parse_initial("pow:3").name == "pow:3"
        lam = parse_initial(" atoms 0.2:0.25, 0.7:0.75 ")
        assert isinstance(lam, AtomicMeasure) and lam.as_dict() == {0.2: 0.25, 0.7: 0.75}

    def test_missing_grid_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            parse_initial(f"grid:{tmp_path / 'none.csv'}")

    def test_main_exit_code(self, capsys):
        assert main(["density", "--p", "1.2"]) == 2
        assert "p must lie in [0,1]" in capsys.readouterr().err


class TestVerbs:
    def test_density_endpoints(self):
        status, out, _ = run(["density", "--p", "0.8", "--initial", "uniform", "--steps", "3", "--grid", "3"])
        assert status == 0
        header, rows = read_csv(out)
        assert header == ["x", "g_n", "f_n", "log_f_n"]
        table = {float(r[0]): float(r[2]) for r in rows}
        assert table[0.0] == pytest.approx(0.064, rel=1e-14)
        assert table[1.0] == pytest.approx(4.096, rel=1e-14)
        assert float(rows[0][3]) == pytest.approx(np.log(0.064), rel=1e-14)

    def test_density_needs_continuous(self):
        with pytest.raises(ConfigError):
            run(["density", "--p", "0.8", "--initial", "atoms 0.2:1"])

    def test_push_interval(self):
        _, out, _ = run(["push-interval", "--p", "0.8", "--initial", "uniform", "--a", "0.2", "--b", "0.6"])
        header, rows = read_csv(out)
        assert header == ["a", "b", "value"]
        assert float(rows[0][2]) == pytest.approx(0.352, abs=1e-15)

    def test_push_interval_needs_endpoints(self):
        with pytest.raises(ConfigError):
            run(["push-interval", "--p", "0.8", "--a", "0.2"])

    def test_iterate_atoms_json(self):
        _, out, _ = run(["iterate-atoms", "--p", "0.8", "--initial", "atoms 0.2:0.5,0.7:0.5",
                         "--steps", "2", "--format", "json"])
        d = json.loads(out)
        assert list(d) == ["p", "atoms", "weights_per_step", "dropped_atoms"]
        assert len(d["weights_per_step"]) == 3
        np.testing.assert_allclose(d["weights_per_step"][2], [0.7865, 0.2135], atol=1e-15)
        assert d["dropped_atoms"] == []

    def test_iterate_atoms_reports_drops(self):
        _, out, _ = run(["iterate-atoms", "--p", "1", "--initial", "atoms 0.2:0.5,0.7:0.5",
                         "--steps", "20", "--format", "json"])
        d = json.loads(out)
        assert [e["atom"] for e in d["dropped_atoms"]] == [0.7]

    def test_zero_steps_single_row(self):
        _, out, _ = run(["iterate-atoms", "--p", "0.8", "--initial", "atoms 0.2:0.5,0.7:0.5", "--steps", "0"])
        header, rows = read_csv(out)
        assert header == ["step", "w@0.20000000000000001", "w@0.69999999999999996"]
        assert rows == [["0", "0.5", "0.5"]]

    def test_converge_identity(self):
        _, out, _ = run(["converge", "--p", "0.5", "--initial", "uniform", "--format", "json"])
        d = json.loads(out)
        assert d["predicted_limit"] == "identity"
        assert d["converged_at"] == 0

    def test_converge_trace(self, tmp_path):
        trace = tmp_path / "trace.csv"
        _, out, _ = run(["converge", "--p", "0.8", "--tol", "1e-3", "--trace", str(trace)])
        assert trace.read_text() == out
        header, rows = read_csv(out)
        assert header == ["step", "value"]
        assert float(rows[-1][1]) <= 1e-3

    def test_bounds_report(self):
        _, out, _ = run(["bounds", "--p", "0.8", "--steps", "10", "--format", "json"])
        d = json.loads(out)
        assert d["min_valid_n"] == 4
        assert d["certificate"]["valid"]
        assert all(d["verification"]["passed"].values())

    def test_bounds_invalid_certificate_warns(self):
        _, out, err = run(["bounds", "--p", "0.8", "--steps", "3", "--format", "json"])
        assert "not valid" in err
        d = json.loads(out)
        assert d["verification"] is None and d["certificate"]["domain_end"] is None

    def test_particles_atomic(self):
        _, out, _ = run(["particles", "--p", "0.3", "--initial", "atoms 0.1:0.5,0.6:0.5",
                         "--steps", "3", "--particles", "20000", "--format", "json", "--seed", "4"])
        d = json.loads(out)
        assert d["n_particles"] == 20000
        assert d["max_weight_error"] <= 4 / np.sqrt(20000)

    def test_particles_continuous_csv(self):
        _, out, err = run(["particles", "--p", "0.8", "--steps", "2", "--particles", "500", "--seed", "1"])
        header, rows = read_csv(out)
        assert header == ["x"] and len(rows) == 500
        assert "Kolmogorov" in err

    def test_particles_reproducible(self):
        argv = ["particles", "--p", "0.7", "--steps", "2", "--particles", "300", "--seed", "9", "--threads", "3"]
        assert run(argv)[1] == run(argv)[1]


class TestOutputs:
    def test_grid_round_trip(self, tmp_path):
        path = tmp_path / "g.csv"
        run(["density", "--p", "0.8", "--steps", "2", "--grid", "2001", "--output", str(path)])
        lam = parse_initial(f"grid:{path}")
        x = np.linspace(0, 1, 11)
        np.testing.assert_allclose(lam(x), x * (x + 0.4 * (1 - x)), atol=1e-7)

    def test_env_output_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LEBESGUE_QSO_OUTPUT_DIR", str(tmp_path / "out"))
        status, out, _ = run(["push-interval", "--p", "0.8", "--a", "0.2", "--b", "0.6", "--format", "json"])
        assert status == 0 and out == ""
        d = json.loads((tmp_path / "out" / "push-interval.json").read_text())
        assert d["value"] == pytest.approx(0.352, abs=1e-15)

    def test_csv_is_exact_and_lf(self):
        text = render(Table(["v"], [[0.1], [1 / 3], [7]]), "csv")
        assert text == "v\n0.10000000000000001\n0.33333333333333331\n7\n"
        assert float(text.split("\n")[2]) == 1 / 3

    def test_json_nonfinite_is_null(self):
        assert json.loads(render({"a": float("inf"), "b": np.float64(1.5)}, "json")) == {"a": None, "b": 1.5}

    def test_dict_as_csv(self):
        header, rows = read_csv(render({"a": 1, "b": {"c": [1, 2]}, "d": None}, "csv"))
        assert header == ["key", "value"]
        assert rows == [["a", "1"], ["b.c", "[1, 2]"], ["d", ""]]


class TestVerify:
    def test_lines_and_status(self, tmp_path):
        path = tmp_path / "verify.txt"
        status, _, _ = run(["verify", "--output", str(path)])
        lines = path.read_text().splitlines()
        checks = lines[:-1]
        assert all(ln.startswith(("PASS ", "FAIL ")) for ln in checks)
        modules = {ln.split()[1].split(".")[0] for ln in checks}
        assert modules == {"kernel", "atomic_dynamics", "cdf_dynamics", "bounds", "convergence", "particle_oracle"}
        failed = sum(ln.startswith("FAIL") for ln in checks)
        assert lines[-1] == f"{len(checks) - failed}/{len(checks)} checks passed"
        assert status == (1 if failed else 0)

    def test_entry_point_module(self):
        res = subprocess.run([sys.executable, "-m", "lebesgue_qso", "push-interval", "--p", "0.8",
                              "--a", "0.2", "--b", "0.6", "--format", "json"],
                             capture_output=True, text=True, check=True)
        assert json.loads(res.stdout)["value"] == pytest.approx(0.352)
