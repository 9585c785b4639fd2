"""Config-driven experiment runs behind the command line subcommands."""

from __future__ import annotations

import logging
import math
from pathlib import Path

import numpy as np

from . import fileio
from .errors import InvalidArgumentError
from .fileio import ExperimentConfig
from .forward import ScatteringDataset, generate_dataset
from .inversion import compatibility_spread, invert, rank_wavenumbers
from .noise import add_noise
from .potentials import sample_potential

log = logging.getLogger(__name__)

AXES = {"x": "i", "y": "j", "z": "l"}


def _out(out_dir) -> Path:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def exact_dataset(config: ExperimentConfig):
    grid = config.grid()
    q = sample_potential(config.potential(), grid)
    ks = config.wavenumber_grid().candidates
    log.info("forward solves: P=%d, %d wavenumbers", grid.size, len(ks))
    return grid, q, generate_dataset(grid, q, config.directions(), ks, config.alpha0)


def cmd_forward(config: ExperimentConfig, out_dir=None, seed: int | None = None) -> Path:
    """Write exact and noisy amplitudes for the first ``delta_star`` in the config."""
    out = _out(out_dir or config.output_dir)
    grid, _, exact = exact_dataset(config)
    delta_star = config.delta_star[0] if config.delta_star else 0.0
    noisy = add_noise(exact, delta_star, config.noise_mode, config.seed if seed is None else seed)
    path = out / "dataset.txt"
    fileio.write_dataset(path, noisy, grid, config.potential().describe())
    log.info("wrote %s (delta_star=%g, delta=%.6g)", path, delta_star, noisy.delta)
    return path


def _check_grid(config: ExperimentConfig, meta: dict):
    if (
        meta["n_per_axis"] != config.grid_n_per_axis
        or meta["side"] != config.grid_side
        or tuple(meta["center"]) != tuple(float(c) for c in config.grid_center)
    ):
        raise InvalidArgumentError(
            f"dataset grid {meta} does not match config grid "
            f"(center={config.grid_center}, side={config.grid_side}, n={config.grid_n_per_axis})"
        )


def invert_and_report(dataset: ScatteringDataset, config: ExperimentConfig, out_dir, compat=True) -> dict:
    """Run the inversion and write ``cells.tsv`` and ``summary.txt`` into ``out_dir``."""
    out = _out(out_dir)
    grid = config.grid()
    truth = sample_potential(config.potential(), grid)
    report = invert(dataset, grid, config.solver, truth=truth)
    summary = {
        "chosen_k": report.chosen_k,
        "condition_proxy": report.condition_proxy,
        "dsm_steps": report.diagnostics.steps_taken,
        "final_epsilon": report.diagnostics.final_epsilon,
        "final_discrepancy": report.diagnostics.final_discrepancy,
        "noise_level": report.noise_level,
        "delta_star": dataset.delta_star,
        "delta": dataset.delta,
        "relative_error": report.relative_error,
        "imag_norm_ratio": report.imag_norm_ratio,
        "unreliable_cells": int(report.unreliable.sum()),
        "compatibility_spread": None,
    }
    if compat:
        try:
            summary["compatibility_spread"] = _spread(dataset, grid, config)
        except Exception as exc:  # diagnostic only, never fatal
            log.warning("compatibility check failed: %s", exc)
            summary["compatibility_spread"] = math.nan
            summary["compatibility_error"] = str(exc).replace("\n", " ")
    cells = out / "cells.tsv"
    fileio.write_cells(cells, grid, report.q_star, report.unreliable, truth)
    fileio.write_summary(out / "summary.txt", summary)
    if config.plot:
        cmd_plot(cells, "z", config.grid_n_per_axis // 2)
    return {"report": report, "summary": summary, "cells": cells, "summary_path": out / "summary.txt"}


def _spread(dataset, grid, config):
    ranking = [k for p, k in rank_wavenumbers(grid, dataset.betas, dataset.wavenumbers) if np.isfinite(p)]
    if len(ranking) < 2:
        return None
    return compatibility_spread(dataset, grid, config.solver, ranking[:2])


def cmd_invert(dataset_path, config: ExperimentConfig, out_dir=None) -> dict:
    dataset, meta = fileio.read_dataset(dataset_path)
    _check_grid(config, meta)
    if len(dataset.directions) != config.grid_n_per_axis**3:
        raise InvalidArgumentError("dataset direction count does not match the grid size")
    return invert_and_report(dataset, config, out_dir or config.output_dir)


def cmd_sweep(config: ExperimentConfig, out_dir=None, seed: int | None = None) -> Path:
    """One ``(delta_star, delta, relative_error)`` row per noise level, in config order."""
    if not config.delta_star:
        raise InvalidArgumentError("sweep needs at least one delta_star")
    out = _out(out_dir or config.output_dir)
    rows_dir = _out(out / "rows")
    grid, q, exact = exact_dataset(config)
    seed = config.seed if seed is None else seed
    header = "delta_star\tdelta\trelative_error\tstatus"
    rows = []
    for i, ds in enumerate(config.delta_star):
        try:
            noisy = add_noise(exact, ds, config.noise_mode, seed)
            report = invert(noisy, grid, config.solver, truth=q)
            row = f"{ds!r}\t{noisy.delta!r}\t{report.relative_error!r}\tok"
        except Exception as exc:
            log.error("sweep row delta_star=%g failed: %s", ds, exc)
            msg = str(exc).replace("\t", " ").replace("\n", " ")
            row = f"{ds!r}\tnan\tnan\terror: {msg}"
        (rows_dir / f"row_{i:03d}.tsv").write_text(header + "\n" + row + "\n")
        rows.append(row)
        log.info("%s", row)
    table = out / "sweep.tsv"
    table.write_text(header + "\n" + "\n".join(rows) + "\n")
    return table


def read_sweep(path) -> list[dict]:
    lines = Path(path).read_text().splitlines()
    keys = lines[0].split("\t")
    rows = []
    for line in lines[1:]:
        vals = line.split("\t")
        row = dict(zip(keys, vals))
        for k in ("delta_star", "delta", "relative_error"):
            row[k] = float(row[k])
        rows.append(row)
    return rows


def cmd_plot(report_path, axis: str, index: int, out_path=None) -> Path:
    """Plot Re q* and the true q over the cells of one grid plane.

    The plane is ``axis`` index == ``index``; cells are plotted in table order.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if axis not in AXES:
        raise InvalidArgumentError(f"axis must be one of x, y, z; got {axis!r}")
    report_path = Path(report_path)
    cells = fileio.read_cells(report_path)
    n = int(round(len(cells["index"]) ** (1 / 3)))
    if not 0 <= index < n:
        raise InvalidArgumentError(f"slice index {index} outside [0, {n})")
    mask = cells[AXES[axis]] == index
    title = f"{axis} slice {index}"
    summary_path = report_path.parent / "summary.txt"
    if summary_path.exists():
        s = fileio.read_summary(summary_path)
        title += f"  delta*={s.get('delta_star')}  delta={s.get('delta')}  err={s.get('relative_error')}"

    fig, ax = plt.subplots(figsize=(8, 4))
    x = np.arange(mask.sum())
    ax.plot(x, cells["q_true"][mask], "k-", label="original q")
    ax.plot(x, cells["re_q_star"][mask], "r.--", label="reconstructed Re q*")
    ax.set_xlabel("cell index in slice")
    ax.set_ylabel("q")
    ax.set_title(title, fontsize=8)
    ax.legend()
    out_path = Path(out_path) if out_path else report_path.parent / f"slice_{axis}{index}.svg"
    fig.savefig(out_path, format="svg")
    plt.close(fig)
    return out_path
