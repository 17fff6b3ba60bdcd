import json

import numpy as np
import pytest

from helpers import rk4, pendulum_field

from paraglm import (Trajectory, leapfrog_tableau, load_tableau, make_tableau,
                     read_csv, save_tableau, tableau_from_dict)
from paraglm.cli import (RunConfig, cmd_analyze, cmd_run, load_preset, main,
                         parasitic_component_estimate, run_trajectory)


def run_cli(args):
    return main(args)


class TestTableauFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "leapfrog.json"
        save_tableau(leapfrog_tableau(), str(path))
        tab = load_tableau(str(path))
        assert tab.s == 1 and tab.r == 4
        assert np.array_equal(tab.V, leapfrog_tableau().V)

    def test_missing_field_rejected(self):
        with pytest.raises(ValueError, match="missing tableau field"):
            tableau_from_dict({"s": 1, "r": 1, "A": [[0.0]], "U": [[1.0]],
                               "B": [[1.0]]})

    def test_ragged_rows_rejected(self):
        obj = {"s": 1, "r": 2, "A": [[0.0]], "U": [[1.0, 0.0]],
               "B": [[1.0], [0.0]], "V": [[1.0, 0.0], [0.0]]}
        with pytest.raises(ValueError, match="row 1 has 1 entries"):
            tableau_from_dict(obj)

    def test_declared_counts_must_match_shapes(self):
        obj = {"s": 2, "r": 1, "A": [[0.0]], "U": [[1.0]], "B": [[1.0]],
               "V": [[1.0]]}
        with pytest.raises(ValueError, match="do not match"):
            tableau_from_dict(obj)


class TestAnalyzeCommand:
    def test_leapfrog_report(self, tmp_path, capsys):
        path = tmp_path / "leapfrog.json"
        save_tableau(leapfrog_tableau(), str(path))
        assert run_cli(["analyze", str(path)]) == 0
        out = capsys.readouterr().out
        assert "s=1 stages, r=4 inputs" in out
        assert "xi = -1" in out
        assert "-1.666666667" in out

    def test_explicit_euler_has_no_parasitic_roots(self, tmp_path, capsys):
        path = tmp_path / "euler.json"
        save_tableau(make_tableau([[0.0]], [[1.0]], [[1.0]], [[1.0]]),
                     str(path))
        assert run_cli(["analyze", str(path)]) == 0
        assert "no parasitic roots" in capsys.readouterr().out

    def test_ragged_file_exits_2_with_row_diagnostics(self, tmp_path, capsys):
        path = tmp_path / "ragged.json"
        path.write_text(json.dumps(
            {"s": 1, "r": 2, "A": [[0.0]], "U": [[1.0, 0.0]],
             "B": [[1.0], [0.0]], "V": [[1.0, 0.0], [0.0]]}))
        assert run_cli(["analyze", str(path)]) == 2
        err = capsys.readouterr().err
        assert "row 1" in err and "ragged" in err

    def test_invalid_json_exits_2_with_line_info(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{ this is not json\n")
        assert run_cli(["analyze", str(path)]) == 2
        assert "line 1" in capsys.readouterr().err

    def test_no_principal_root_exits_3(self, tmp_path):
        path = tmp_path / "inconsistent.json"
        save_tableau(make_tableau([[0.0]], [[1.0]], [[1.0]], [[0.5]]),
                     str(path))
        assert run_cli(["analyze", str(path)]) == 3

    def test_missing_file_exits_2(self, tmp_path):
        assert run_cli(["analyze", str(tmp_path / "nope.json")]) == 2


class TestRunCommand:
    def test_zero_steps_writes_header_and_one_row(self, tmp_path):
        out = tmp_path / "zero.csv"
        rc = run_cli(["run", "--system", "pendulum", "--q0", "2.3,0",
                      "--h", "0.1", "--steps", "0", "--out", str(out)])
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 2
        assert lines[0] == "t,q_1,q_2,H,abs_energy_error,projected"

    def test_csv_round_trip_is_exact(self, tmp_path):
        out = tmp_path / "run.csv"
        cfg = RunConfig(system="pendulum", q0=(2.3, 0.0), h=0.1, steps=50,
                        engine="glm", out=str(out))
        assert cmd_run(cfg) == 0
        traj = run_trajectory(cfg)
        parsed = read_csv(str(out))
        assert np.array_equal(parsed.t, traj.t)
        assert np.array_equal(parsed.q, traj.q)
        assert np.array_equal(parsed.energy, traj.energy)
        assert np.array_equal(parsed.energy_error, traj.energy_error)
        assert np.array_equal(parsed.projected, traj.projected)

    def test_summary_max_matches_csv_column(self, tmp_path, capsys):
        out = tmp_path / "run.csv"
        rc = run_cli(["run", "--system", "pendulum", "--q0", "2.3,0",
                      "--h", "0.1", "--steps", "200", "--out", str(out)])
        assert rc == 0
        printed = capsys.readouterr().out
        reported = float(next(line.split("=")[1] for line in printed.splitlines()
                              if line.startswith("max |H - H0|")))
        parsed = read_csv(str(out))
        assert reported == np.max(parsed.energy_error)

    def test_both_engines_write_identical_csv_fields(self, tmp_path):
        outs = {}
        for engine in ("direct", "glm"):
            out = tmp_path / f"{engine}.csv"
            rc = run_cli(["run", "--system", "pendulum", "--q0", "2.3,0",
                          "--h", "0.1", "--steps", "2000",
                          "--engine", engine, "--out", str(out)])
            assert rc == 0
            outs[engine] = read_csv(str(out))
        for field in ("t", "q", "energy", "energy_error"):
            a = getattr(outs["direct"], field)
            b = getattr(outs["glm"], field)
            assert np.max(np.abs(a - b)) <= 1e-10

    def test_energy_error_recomputable_from_rows(self, tmp_path):
        # |H(q) - H(q0)| recomputed from each parsed row matches the column
        from paraglm.systems import pendulum
        out = tmp_path / "recompute.csv"
        rc = run_cli(["run", "--system", "pendulum", "--q0", "2.3,0",
                      "--h", "0.1", "--steps", "300", "--out", str(out)])
        assert rc == 0
        parsed = read_csv(str(out))
        pend = pendulum()
        energies = np.array([pend.hamiltonian(q) for q in parsed.q])
        recomputed = np.abs(energies - energies[0])
        assert np.max(np.abs(recomputed - parsed.energy_error)) <= 1e-14
        assert np.array_equal(parsed.t, np.arange(301) * 0.1)

    def test_config_file_mirrors_flags(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        out = tmp_path / "from_config.csv"
        cfg_path.write_text(json.dumps({
            "system": "pendulum", "q0": [2.3, 0.0], "h": 0.1, "steps": 10,
            "engine": "glm", "projection": "off", "out": str(out)}))
        assert run_cli(["run", "--config", str(cfg_path)]) == 0
        assert len(read_csv(str(out))) == 11

    def test_unknown_config_field_exits_2(self, tmp_path):
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text(json.dumps({"system": "pendulum", "stepsize": 0.1}))
        assert run_cli(["run", "--config", str(cfg_path)]) == 2

    def test_unknown_system_exits_2(self, tmp_path):
        rc = run_cli(["run", "--system", "three-body", "--q0", "1,1",
                      "--out", str(tmp_path / "x.csv")])
        assert rc == 2

    def test_dimension_mismatch_exits_2(self, tmp_path):
        rc = run_cli(["run", "--system", "pendulum", "--q0", "1,2,3",
                      "--out", str(tmp_path / "x.csv")])
        assert rc == 2

    def test_projection_with_direct_engine_exits_2(self, tmp_path):
        rc = run_cli(["run", "--system", "pendulum", "--q0", "2.3,0",
                      "--engine", "direct", "--projection", "iterated",
                      "--out", str(tmp_path / "x.csv")])
        assert rc == 2

    def test_solver_failure_exits_4_naming_the_step(self, tmp_path, capsys):
        rc = run_cli(["run", "--system", "canonical:harmonic", "--q0", "1,0",
                      "--h", "1.5", "--steps", "200",
                      "--projection", "iterated", "--projection-max-iter", "1",
                      "--out", str(tmp_path / "x.csv")])
        assert rc == 4
        assert "step" in capsys.readouterr().err

    def test_projected_run_flags_rows(self, tmp_path):
        out = tmp_path / "proj.csv"
        rc = run_cli(["run", "--system", "pendulum", "--q0", "2.3,0",
                      "--h", "0.1", "--steps", "100",
                      "--projection", "iterated", "--out", str(out)])
        assert rc == 0
        parsed = read_csv(str(out))
        assert np.max(parsed.energy_error) <= 1e-10
        assert np.all(parsed.projected[1:])


class TestPresets:
    def test_paper_fig6_preset_fields(self):
        cfg = load_preset("paper-fig6")
        assert cfg.system == "pendulum"
        assert cfg.q0 == (2.3, 0.0)
        assert cfg.h == 0.1
        assert cfg.steps == 100000
        assert cfg.projection == "off"
        assert cfg.engine == "glm"

    def test_paper_fig7_preset_fields(self):
        cfg = load_preset("paper-fig7")
        assert cfg.projection == "iterated"
        assert cfg.projection_tol == 1e-10
        assert cfg.steps == 100000

    def test_unknown_preset_exits_2(self, tmp_path):
        assert run_cli(["run", "--preset", "paper-fig8",
                        "--out", str(tmp_path / "x.csv")]) == 2

    def test_flags_override_preset(self, tmp_path):
        out = tmp_path / "short.csv"
        rc = run_cli(["run", "--preset", "paper-fig6", "--steps", "5",
                      "--out", str(out)])
        assert rc == 0
        assert len(read_csv(str(out))) == 6


class TestParasiticComponentEstimate:
    def _traj(self, q):
        q = np.asarray(q, dtype=float)
        if q.ndim == 1:
            q = q[:, None]
        return Trajectory(t=np.arange(len(q)) * 0.1, q=q)

    def test_linear_sequence_gives_zero(self):
        # dyadic slope keeps the sequence exactly representable
        traj = self._traj(np.arange(10.0) * 0.75 + 3.0)
        assert np.all(parasitic_component_estimate(traj) == 0.0)

    def test_alternating_mode_amplitude_recovered(self):
        a, c = 0.37, 2.0
        m = np.arange(12)
        traj = self._traj(c + ((-1.0) ** m) * a)
        z = parasitic_component_estimate(traj)
        assert np.abs(z) == pytest.approx(np.full_like(z, a), rel=1e-12)

    def test_smooth_trajectory_estimate_scales_as_h_squared(self):
        # sample an accurate smooth solution on two grids over t in [0, 2]
        q0 = np.array([2.3, 0.0])
        maxima = []
        for h in (0.02, 0.01):
            steps = round(2.0 / h)
            points = [q0]
            q = q0
            for _ in range(steps):
                q = rk4(pendulum_field, q, h, 1)
                points.append(q)
            traj = Trajectory(t=np.arange(steps + 1) * h, q=np.array(points))
            maxima.append(np.max(np.abs(parasitic_component_estimate(traj))))
        ratio = maxima[0] / maxima[1]
        assert 3.3 <= ratio <= 4.7

    def test_too_few_rows_rejected(self):
        with pytest.raises(ValueError, match="at least 3"):
            parasitic_component_estimate(self._traj([1.0, 2.0]))
