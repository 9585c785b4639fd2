import math

import numpy as np
import pytest

from invscat import InvalidArgumentError, add_noise, relative_error
from invscat.cli import main
from invscat.experiments import cmd_forward, cmd_invert, cmd_plot, cmd_sweep, exact_dataset, read_sweep
from invscat.fileio import (
    CELL_COLUMNS,
    ExperimentConfig,
    parse_key_values,
    read_cells,
    read_dataset,
    read_summary,
    write_dataset,
)

SMALL = """
grid.center = 0 0 0
grid.side = 1.0
grid.n_per_axis = {n}
alpha0 = 1 0 0
potential.kind = {kind}
potential.value = {value}
wavenumbers.a = 50
wavenumbers.b = 100
wavenumbers.count = 11
noise.delta_star = {ds}
output.dir = {out}
"""


def write_config(tmp_path, n=5, kind="constant", value=10, ds="0", name="run.cfg"):
    path = tmp_path / name
    path.write_text(SMALL.format(n=n, kind=kind, value=value, ds=ds, out=tmp_path / "out"))
    return path


def config(tmp_path, **kw):
    return ExperimentConfig.from_file(write_config(tmp_path, **kw))


class TestConfig:
    def test_parse(self):
        kv = parse_key_values("a = 1  # comment\n\n# skip\nb.c = x y\n")
        assert kv == {"a": "1", "b.c": "x y"}

    def test_malformed_line(self):
        with pytest.raises(InvalidArgumentError):
            parse_key_values("no equals sign")

    def test_fields(self, tmp_path):
        cfg = config(tmp_path, ds="0.04 0.02 0.01")
        assert cfg.grid().size == 125
        assert cfg.delta_star == (0.04, 0.02, 0.01)
        assert len(cfg.wavenumber_grid().candidates) == 11
        assert cfg.solver.max_steps == 60

    def test_shipped_configs_load(self):
        for name in ("table1", "table2", "roundtrip"):
            cfg = ExperimentConfig.from_file(f"configs/{name}.cfg")
            assert cfg.grid().size == 1000

    @pytest.mark.parametrize(
        "text",
        ["grid.bogus = 1", "noise.delta_star = -0.1", "noise.mode = gaussian",
         "potential.kind = tabulated", "wavenumbers.a = 100\nwavenumbers.b = 50"],
    )
    def test_invalid(self, text):
        with pytest.raises((InvalidArgumentError, ValueError)):
            ExperimentConfig.from_text(text)

    def test_tabulated(self, tmp_path):
        (tmp_path / "q.txt").write_text("# values\n" + " ".join(str(v) for v in range(8)) + "\n")
        cfg = ExperimentConfig.from_text(
            "grid.n_per_axis = 2\npotential.kind = tabulated\npotential.file = q.txt", base_dir=tmp_path
        )
        np.testing.assert_array_equal(cfg.potential().table, np.arange(8.0))


class TestDatasetFile:
    @pytest.mark.parametrize("delta_star", [0.0, 0.02])
    def test_round_trip_bit_exact(self, tmp_path, delta_star):
        cfg = config(tmp_path, n=4, kind="yukawa")
        grid, _, exact = exact_dataset(cfg)
        d = add_noise(exact, delta_star)
        path = tmp_path / "d.txt"
        write_dataset(path, d, grid, "yukawa")
        back, meta = read_dataset(path)
        assert back.amplitudes.tobytes() == d.amplitudes.tobytes()
        assert back.exact_amplitudes.tobytes() == d.exact_amplitudes.tobytes()
        assert back.betas.tobytes() == d.betas.tobytes()
        assert back.wavenumbers.tobytes() == d.wavenumbers.tobytes()
        assert back.alpha0.tobytes() == d.alpha0.tobytes()
        assert back.delta == d.delta and back.delta_star == d.delta_star
        assert meta == {"center": (0.0, 0.0, 0.0), "side": 1.0, "n_per_axis": 4, "potential": "yukawa"}

    def test_round_trip_without_exact(self, tmp_path):
        cfg = config(tmp_path, n=2)
        grid, _, exact = exact_dataset(cfg)
        bare = type(exact)(exact.directions, exact.wavenumbers, exact.amplitudes)
        write_dataset(tmp_path / "d.txt", bare, grid)
        back, _ = read_dataset(tmp_path / "d.txt")
        assert back.exact_amplitudes is None and back.delta is None
        assert back.amplitudes.tobytes() == bare.amplitudes.tobytes()

    def test_rejects_bad_files(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("[metadata]\nformat = other/9\n[directions]\n[amplitudes]\n")
        with pytest.raises(InvalidArgumentError):
            read_dataset(p)
        p.write_text("[metadata]\nformat = invscat-dataset/1\n")
        with pytest.raises(InvalidArgumentError):
            read_dataset(p)

    def test_single_cell_closed_form(self, tmp_path):
        cfg = config(tmp_path, n=1, value=10, ds="0.01")
        path = cmd_forward(cfg)
        d, _ = read_dataset(path)
        # y1 = 0 so every exact amplitude is -q/(4 pi)
        np.testing.assert_allclose(d.exact_amplitudes, -10 / (4 * math.pi), rtol=1e-15)
        assert d.delta == pytest.approx(0.01 * np.linalg.norm(d.exact_amplitudes), rel=1e-12)

    def test_zero_potential(self, tmp_path):
        d, _ = read_dataset(cmd_forward(config(tmp_path, n=2, value=0, ds="0.04")))
        assert np.all(d.amplitudes == 0) and d.delta == 0


@pytest.fixture(scope="module")
def report(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("inv")
    cfg = config(tmp, ds="0.02")
    return cfg, cmd_invert(cmd_forward(cfg), cfg)


class TestInvertReport:
    def test_files(self, report):
        _, res = report
        cells = read_cells(res["cells"])
        assert tuple(cells) == CELL_COLUMNS
        assert len(cells["index"]) == 125
        s = read_summary(res["summary_path"])
        for key in ("chosen_k", "condition_proxy", "dsm_steps", "delta_star", "delta",
                    "relative_error", "imag_norm_ratio", "compatibility_spread"):
            assert key in s
        assert float(s["delta_star"]) == 0.02

    def test_err_recomputed_from_cells(self, report):
        cfg, res = report
        cells = read_cells(res["cells"])
        q_star = cells["re_q_star"] + 1j * cells["im_q_star"]
        err = relative_error(cells["q_true"], q_star, volumes=cfg.grid().volumes)
        assert abs(err - float(read_summary(res["summary_path"])["relative_error"])) <= 1e-12

    def test_noise_free_summary(self, tmp_path):
        cfg = config(tmp_path)
        s = read_summary(cmd_invert(cmd_forward(cfg), cfg)["summary_path"])
        assert float(s["relative_error"]) <= 1e-3
        assert float(s["compatibility_spread"]) <= 1e-3

    def test_zero_dataset(self, tmp_path):
        zero_cfg = config(tmp_path, value=0, name="zero.cfg")
        ten_cfg = config(tmp_path, value=10, name="ten.cfg")
        res = cmd_invert(cmd_forward(zero_cfg), ten_cfg, tmp_path / "r")
        assert res["summary"]["relative_error"] == 1.0

    def test_grid_mismatch(self, tmp_path):
        path = cmd_forward(config(tmp_path, n=2))
        with pytest.raises(InvalidArgumentError):
            cmd_invert(path, config(tmp_path, n=3, name="other.cfg"))


class TestSweep:
    def test_rows(self, tmp_path):
        cfg = config(tmp_path, kind="yukawa", n=4, ds="0.04 0.02 0.01")
        rows = read_sweep(cmd_sweep(cfg))
        assert [r["delta_star"] for r in rows] == [0.04, 0.02, 0.01]
        _, _, exact = exact_dataset(cfg)
        norm = np.linalg.norm(exact.amplitudes)
        for r in rows:
            assert r["status"] == "ok"
            assert r["delta"] == pytest.approx(r["delta_star"] * norm, rel=1e-12)
        errs = [r["relative_error"] for r in rows]
        assert errs[0] >= errs[1] >= errs[2]

    def test_single_row_deterministic(self, tmp_path):
        full = config(tmp_path, ds="0.04 0.02", name="a.cfg")
        one = config(tmp_path, ds="0.02", name="b.cfg")
        a = (cmd_sweep(full, tmp_path / "a").parent / "rows" / "row_001.tsv").read_text()
        b = (cmd_sweep(one, tmp_path / "b").parent / "rows" / "row_000.tsv").read_text()
        assert a == b

    def test_zero_row(self, tmp_path):
        rows = read_sweep(cmd_sweep(config(tmp_path, ds="0")))
        assert len(rows) == 1 and rows[0]["delta"] == 0

    def test_failed_row_recorded(self, tmp_path):
        cfg = config(tmp_path, ds="0.01 0.001")
        cfg.solver = type(cfg.solver)(max_steps=1)
        rows = read_sweep(cmd_sweep(cfg))
        assert len(rows) == 2
        assert all(r["status"].startswith("error") for r in rows)
        assert all(math.isnan(r["relative_error"]) for r in rows)


class TestPlot:
    def test_constant_slice(self, tmp_path):
        cfg = config(tmp_path)
        res = cmd_invert(cmd_forward(cfg), cfg)
        out = cmd_plot(res["cells"], "z", 2)
        text = out.read_text()
        assert out.suffix == ".svg" and "<svg" in text

    def test_zero_potential(self, tmp_path):
        cfg = config(tmp_path, n=2, value=0)
        # a zero truth leaves err undefined, so report the zero data against a q = 10 config
        ten = config(tmp_path, n=2, name="ten.cfg")
        res = cmd_invert(cmd_forward(cfg), ten, tmp_path / "r")
        cells = read_cells(res["cells"])
        assert np.all(cells["re_q_star"] == 0) and np.all(cells["im_q_star"] == 0)
        assert cmd_plot(res["cells"], "x", 0).exists()

    @pytest.mark.parametrize("axis,index", [("z", 5), ("z", -1), ("w", 0)])
    def test_invalid(self, tmp_path, axis, index):
        cfg = config(tmp_path, n=2)
        res = cmd_invert(cmd_forward(cfg), cfg)
        with pytest.raises(InvalidArgumentError):
            cmd_plot(res["cells"], axis, index)


class TestMain:
    def test_end_to_end(self, tmp_path, capsys):
        cfg = write_config(tmp_path, n=3, ds="0.01")
        out = tmp_path / "o"
        assert main(["forward", "--config", str(cfg), "--out", str(out), "--seed", "1"]) == 0
        assert main(["invert", "--config", str(cfg), "--dataset", str(out / "dataset.txt"),
                     "--out", str(out)]) == 0
        assert "relative_error" in capsys.readouterr().out
        assert main(["plot", "--report", str(out / "cells.tsv"), "--axis", "y", "--index", "1",
                     "--out", str(out / "p.svg")]) == 0
        assert (out / "p.svg").exists()
        assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
        assert (out / "sweep.tsv").exists()

    def test_errors_exit_nonzero(self, tmp_path):
        assert main(["invert", "--config", str(tmp_path / "missing.cfg"), "--dataset", "x"]) == 1
        cfg = write_config(tmp_path, n=2)
        assert main(["invert", "--config", str(cfg), "--dataset", str(tmp_path / "none.txt")]) == 1

    def test_usage_error(self):
        with pytest.raises(SystemExit):
            main(["bogus"])
