"""Sweeps, flat files, figure datasets, and config parsing."""

import numpy as np
import pytest

from srled import ModelParams, reproduce_figure, run_sweep
from srled.errors import InvalidParamsError
from srled.sweep import SweepSpec, parse_config, read_rows, write_rows


@pytest.fixture
def base():
    return ModelParams(kappa=0.5, gamma_par=0.1, pump=0.1,
                       n_threshold=5.0, n_emitters=20.0)


@pytest.fixture
def pump_base():
    # N_0 = N_th so the pump sweep stays monotone over [0.01, 1]
    return ModelParams.from_ratio(2.0, gamma_par=0.1, pump=0.1,
                                  n_threshold=10.0, n_emitters=10.0)


class TestSweepSpec:
    def test_validation(self, base):
        with pytest.raises(InvalidParamsError):
            SweepSpec(base=base, variable="bogus", start=1, stop=2, steps=3)
        with pytest.raises(InvalidParamsError):
            SweepSpec(base=base, variable="pump", start=1, stop=2, steps=1)
        with pytest.raises(InvalidParamsError):
            SweepSpec(base=base, variable="pump", start=1, stop=2, steps=3,
                      methods=("closed", "bogus"))
        with pytest.raises(InvalidParamsError):
            SweepSpec(base=base, variable="pump", start=0.0, stop=2, steps=3, scale="log")

    def test_grid_scales(self, base):
        lin = SweepSpec(base=base, variable="pump", start=0.1, stop=1.0, steps=10)
        assert np.allclose(np.diff(lin.grid()), lin.grid()[1] - lin.grid()[0])
        log = SweepSpec(base=base, variable="pump", start=0.1, stop=1.0, steps=10, scale="log")
        assert np.allclose(np.diff(np.log(log.grid())), np.log(log.grid()[1] / log.grid()[0]))


class TestRunSweep:
    def test_delta_n_increases_with_kappa_ratio(self, base):
        spec = SweepSpec(base=base, variable="kappa_ratio",
                         start=0.1, stop=10.0, steps=25, scale="log")
        rows = run_sweep(spec)
        dn = [r.delta_n for r in rows]
        assert all(b > a for a, b in zip(dn, dn[1:]))

    def test_g2_decreases_with_pump(self, pump_base):
        spec = SweepSpec(base=pump_base, variable="pump", start=0.01, stop=1.0, steps=25)
        g2 = [r.g2_closed for r in run_sweep(spec)]
        assert all(b < a for a, b in zip(g2, g2[1:]))

    def test_collapsed_range_gives_identical_rows(self, base):
        spec = SweepSpec(base=base, variable="pump", start=0.3, stop=0.3, steps=2)
        rows = run_sweep(spec)
        assert rows[0] == rows[1]

    def test_error_rows_flagged_not_raised(self, base):
        # pump values beyond threshold inversion must flag, not abort
        spec = SweepSpec(base=base, variable="pump", start=0.5, stop=50.0,
                         steps=8, scale="log")
        rows = run_sweep(spec)
        flagged = [r for r in rows if "AboveThreshold" in r.flags]
        clean = [r for r in rows if r.n_closed is not None]
        assert flagged and clean
        assert all(r.n_closed is None for r in flagged)

    def test_quadrature_column(self, base):
        spec = SweepSpec(base=base, variable="pump", start=0.05, stop=0.5, steps=3,
                         methods=("closed", "quadrature"))
        for row in run_sweep(spec):
            assert row.n_quad == pytest.approx(row.n_closed, rel=1e-8)

    def test_validity_flag(self, base):
        spec = SweepSpec(base=base, variable="gamma_par", start=0.01, stop=0.5,
                         steps=4, scale="log")
        rows = run_sweep(spec)
        assert rows[0].flags == ""
        assert "validity_ratio_above_0.1" in rows[-1].flags


class TestFlatFiles:
    def test_csv_round_trip(self, base, tmp_path):
        spec = SweepSpec(base=base, variable="pump", start=0.05, stop=0.5, steps=5,
                         methods=("closed", "quadrature"))
        rows = run_sweep(spec)
        path = tmp_path / "sweep.csv"
        write_rows(rows, spec, path)
        parsed = read_rows(path)
        assert len(parsed) == len(rows)
        for rec, row in zip(parsed, rows):
            assert rec["swept_var"] == "pump"
            assert rec["value"] == row.value          # exact float round trip
            assert rec["n_closed"] == row.n_closed
            assert rec["n_quad"] == row.n_quad
            assert rec["g2_closed"] == row.g2_closed

    def test_records_round_trip(self, base, tmp_path):
        spec = SweepSpec(base=base, variable="pump", start=0.05, stop=0.5, steps=4)
        rows = run_sweep(spec)
        path = tmp_path / "sweep.jsonl"
        write_rows(rows, spec, path, fmt="records")
        parsed = read_rows(path)
        assert [r["value"] for r in parsed] == [r.value for r in rows]
        assert [r["g2_closed"] for r in parsed] == [r.g2_closed for r in rows]

    def test_byte_identical_runs(self, base, tmp_path):
        spec = SweepSpec(base=base, variable="kappa_ratio", start=0.1, stop=10.0,
                         steps=7, scale="log")
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_rows(run_sweep(spec), spec, p1)
        write_rows(run_sweep(spec), spec, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_error_rows_serialize_empty(self, base, tmp_path):
        spec = SweepSpec(base=base, variable="pump", start=0.5, stop=50.0,
                         steps=5, scale="log")
        path = tmp_path / "sweep.csv"
        write_rows(run_sweep(spec), spec, path)
        parsed = read_rows(path)
        assert any(rec["n_closed"] is None and "AboveThreshold" in rec["flags"]
                   for rec in parsed)


class TestReproduceFigures:
    def test_fig4_bounds_and_ordering(self, tmp_path):
        paths = reproduce_figure("fig4", n_emitters=30.0, out_dir=tmp_path, steps=12)
        series = {}
        for p in paths:
            if p.suffix == ".csv":
                rows = read_rows(p)
                series[p.name] = [r["g2_closed"] for r in rows]
                assert all(2.0 < g <= 6.0 for g in series[p.name])
        for g5, g10, g15 in zip(series["fig4_nth5.csv"], series["fig4_nth10.csv"],
                               series["fig4_nth15.csv"]):
            assert g5 > g10 > g15
        assert (tmp_path / "plot_fig4.py").exists()

    def test_fig5_solid_above_dashed(self, tmp_path):
        paths = reproduce_figure("fig5", n_emitters=10.0, out_dir=tmp_path, steps=8)
        series = {p.name: [r["g2_closed"] for r in read_rows(p)]
                  for p in paths if p.suffix == ".csv"}
        for ratio in ("6", "2", "0.2"):
            solid = series[f"fig5_ratio{ratio}_nth5.csv"]
            dashed = series[f"fig5_ratio{ratio}_nth10.csv"]
            assert all(s > d for s, d in zip(solid, dashed))

    def test_fig3_dataset_shape(self, tmp_path):
        paths = reproduce_figure("fig3", n_emitters=30.0, out_dir=tmp_path, steps=10)
        rows = read_rows(tmp_path / "fig3_nth5.csv")
        dn = [r["delta_n"] for r in rows]
        assert all(b > a for a, b in zip(dn, dn[1:]))

    def test_plot_script_runs(self, tmp_path):
        import subprocess
        import sys

        reproduce_figure("fig3", n_emitters=20.0, out_dir=tmp_path, steps=6)
        proc = subprocess.run([sys.executable, str(tmp_path / "plot_fig3.py")],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "fig3.png").exists()


class TestConfigFiles:
    def test_parse(self, tmp_path):
        path = tmp_path / "model.cfg"
        path.write_text("# comment\nkappa-ratio = 2.0\npump=0.3\n\nn-th = 10 # inline\n")
        cfg = parse_config(path)
        assert cfg == {"kappa-ratio": "2.0", "pump": "0.3", "n-th": "10"}

    def test_bad_line_raises(self, tmp_path):
        path = tmp_path / "model.cfg"
        path.write_text("pump 0.3\n")
        with pytest.raises(InvalidParamsError):
            parse_config(path)
