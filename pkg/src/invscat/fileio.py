"""Text formats: experiment config, dataset files, per-cell reports and summaries.

Config files are flat ``key = value`` lines with dotted keys. Dataset files
are sectioned text (``[metadata]``, ``[directions]``, ``[amplitudes]``) with
floats written via ``repr`` so that a write/read cycle is bit-exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError
from .forward import ScatteringDataset
from .grid import DirectionSet, Grid, WavenumberGrid, partition_cube, sphere_directions
from .noise import MODES
from .potentials import PotentialSpec
from .solvers import RegularizationConfig

DATASET_FORMAT = "invscat-dataset/1"
CELL_COLUMNS = ("index", "i", "j", "l", "y_x", "y_y", "y_z", "q_true", "re_q_star", "im_q_star", "reliable")


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.replace(",", " ").split()]


def _fmt(x) -> str:
    if x is None:
        return "none"
    return repr(float(x))


def _opt_float(text: str):
    return None if text.strip().lower() in ("none", "") else float(text)


def parse_key_values(text: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment; blank lines ignored."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgumentError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def read_tabulated(path) -> np.ndarray:
    """One potential value per cell in grid order, whitespace separated; ``#`` comments."""
    vals = []
    for raw in Path(path).read_text().splitlines():
        vals.extend(_floats(raw.split("#", 1)[0]))
    return np.asarray(vals, dtype=float)


@dataclass
class ExperimentConfig:
    grid_center: tuple = (0.0, 0.0, 0.0)
    grid_side: float = 1.0
    grid_n_per_axis: int = 10
    alpha0: tuple = (1.0, 0.0, 0.0)
    potential_kind: str = "constant"
    potential_value: float = 10.0
    potential_file: str | None = None
    k_min: float = 50.0
    k_max: float = 100.0
    k_count: int = 11
    delta_star: tuple = (0.0,)
    noise_mode: str = "alternating"
    seed: int = 0
    solver: RegularizationConfig = field(default_factory=RegularizationConfig)
    output_dir: str = "out"
    plot: bool = False
    base_dir: Path = field(default_factory=Path.cwd, repr=False)

    KEYS = {
        "grid.center", "grid.side", "grid.n_per_axis", "alpha0",
        "potential.kind", "potential.value", "potential.file",
        "wavenumbers.a", "wavenumbers.b", "wavenumbers.count",
        "noise.delta_star", "noise.mode", "noise.seed",
        "solver.eps0", "solver.decay", "solver.discrepancy_constant",
        "solver.max_steps", "solver.min_eps", "output.dir", "output.plot",
    }

    @classmethod
    def from_text(cls, text: str, base_dir=None) -> "ExperimentConfig":
        kv = parse_key_values(text)
        unknown = set(kv) - cls.KEYS
        if unknown:
            raise InvalidArgumentError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(base_dir=Path(base_dir) if base_dir else Path.cwd())
        get = kv.get
        if "grid.center" in kv:
            cfg.grid_center = tuple(_floats(kv["grid.center"]))
        cfg.grid_side = float(get("grid.side", cfg.grid_side))
        cfg.grid_n_per_axis = int(get("grid.n_per_axis", cfg.grid_n_per_axis))
        if "alpha0" in kv:
            cfg.alpha0 = tuple(_floats(kv["alpha0"]))
        cfg.potential_kind = get("potential.kind", cfg.potential_kind)
        cfg.potential_value = float(get("potential.value", cfg.potential_value))
        cfg.potential_file = get("potential.file", cfg.potential_file)
        cfg.k_min = float(get("wavenumbers.a", cfg.k_min))
        cfg.k_max = float(get("wavenumbers.b", cfg.k_max))
        cfg.k_count = int(get("wavenumbers.count", cfg.k_count))
        if "noise.delta_star" in kv:
            cfg.delta_star = tuple(_floats(kv["noise.delta_star"]))
        cfg.noise_mode = get("noise.mode", cfg.noise_mode)
        cfg.seed = int(get("noise.seed", cfg.seed))
        solver = {}
        for f in fields(RegularizationConfig):
            key = f"solver.{f.name}"
            if key in kv:
                solver[f.name] = int(kv[key]) if f.name == "max_steps" else float(kv[key])
        cfg.solver = RegularizationConfig(**solver)
        cfg.output_dir = get("output.dir", cfg.output_dir)
        cfg.plot = get("output.plot", "false").lower() in ("1", "true", "yes")
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        path = Path(path)
        return cls.from_text(path.read_text(), base_dir=path.parent)

    def validate(self):
        if any(d < 0 for d in self.delta_star):
            raise InvalidArgumentError("delta_star values must be >= 0")
        if self.noise_mode not in MODES:
            raise InvalidArgumentError(f"noise.mode must be one of {MODES}")
        if self.potential_kind == "tabulated" and not self.potential_file:
            raise InvalidArgumentError("tabulated potential needs potential.file")
        self.grid()
        self.wavenumber_grid()
        self.potential()

    def grid(self) -> Grid:
        return partition_cube(self.grid_center, self.grid_side, self.grid_n_per_axis)

    def directions(self) -> DirectionSet:
        return DirectionSet(sphere_directions(self.grid_n_per_axis**3), self.alpha0)

    def wavenumber_grid(self) -> WavenumberGrid:
        return WavenumberGrid.uniform(self.k_min, self.k_max, self.k_count)

    def potential(self) -> PotentialSpec:
        if self.potential_kind == "constant":
            return PotentialSpec.constant(self.potential_value)
        if self.potential_kind == "yukawa":
            return PotentialSpec.yukawa()
        if self.potential_kind == "tabulated":
            return PotentialSpec.tabulated(read_tabulated(self.base_dir / self.potential_file))
        raise InvalidArgumentError(f"unknown potential.kind {self.potential_kind!r}")


def write_dataset(path, dataset: ScatteringDataset, grid: Grid, potential: str = "unknown"):
    lines = [
        "# scattering amplitude dataset",
        "[metadata]",
        f"format = {DATASET_FORMAT}",
        "grid.center = " + " ".join(_fmt(c) for c in grid.center),
        f"grid.side = {_fmt(grid.side)}",
        f"grid.n_per_axis = {grid.n_per_axis}",
        "alpha0 = " + " ".join(_fmt(c) for c in dataset.alpha0),
        "wavenumbers = " + " ".join(_fmt(k) for k in dataset.wavenumbers),
        f"potential = {potential}",
        f"delta_star = {_fmt(dataset.delta_star)}",
        f"delta = {_fmt(dataset.delta)}",
        f"noise.mode = {dataset.noise_mode or 'none'}",
        "[directions]",
        "# j beta_x beta_y beta_z",
    ]
    for j, b in enumerate(dataset.betas):
        lines.append(f"{j} {_fmt(b[0])} {_fmt(b[1])} {_fmt(b[2])}")
    lines += ["[amplitudes]", "# j m re_A im_A re_A_exact im_A_exact"]
    amps, exact = dataset.amplitudes, dataset.exact_amplitudes
    for j in range(amps.shape[0]):
        for m in range(amps.shape[1]):
            a = amps[j, m]
            if exact is None:
                tail = "none none"
            else:
                tail = f"{_fmt(exact[j, m].real)} {_fmt(exact[j, m].imag)}"
            lines.append(f"{j} {m} {_fmt(a.real)} {_fmt(a.imag)} {tail}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_dataset(path):
    """Parse a dataset file. Returns ``(dataset, metadata)``; ``metadata`` holds the grid spec."""
    sections: dict[str, list[str]] = {}
    current = None
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            sections[current] = []
            continue
        if current is None:
            raise InvalidArgumentError(f"{path}: content before first section")
        sections[current].append(line)
    for name in ("metadata", "directions", "amplitudes"):
        if name not in sections:
            raise InvalidArgumentError(f"{path}: missing [{name}] section")
    meta = parse_key_values("\n".join(sections["metadata"]))
    if meta.get("format") != DATASET_FORMAT:
        raise InvalidArgumentError(f"{path}: unsupported format {meta.get('format')!r}")

    betas = np.array([_floats(l)[1:] for l in sections["directions"]], dtype=float)
    ks = np.array(_floats(meta["wavenumbers"]))
    nj, nm = betas.shape[0], ks.shape[0]
    amps = np.full((nj, nm), np.nan, dtype=complex)
    exact = np.full((nj, nm), np.nan, dtype=complex)
    has_exact = True
    for line in sections["amplitudes"]:
        tok = line.split()
        j, m = int(tok[0]), int(tok[1])
        amps[j, m] = complex(float(tok[2]), float(tok[3]))
        if tok[4] == "none":
            has_exact = False
        else:
            exact[j, m] = complex(float(tok[4]), float(tok[5]))
    if np.isnan(amps).any():
        raise InvalidArgumentError(f"{path}: amplitude records incomplete")
    mode = meta.get("noise.mode", "none")
    dataset = ScatteringDataset(
        DirectionSet(betas, _floats(meta["alpha0"])),
        ks,
        amps,
        exact_amplitudes=exact if has_exact else None,
        delta_star=_opt_float(meta.get("delta_star", "none")),
        delta=_opt_float(meta.get("delta", "none")),
        noise_mode=None if mode == "none" else mode,
    )
    grid_meta = {
        "center": tuple(_floats(meta["grid.center"])),
        "side": float(meta["grid.side"]),
        "n_per_axis": int(meta["grid.n_per_axis"]),
        "potential": meta.get("potential", "unknown"),
    }
    return dataset, grid_meta


def write_cells(path, grid: Grid, q_star, unreliable, truth=None):
    """Tab-delimited per-cell table with header row."""
    n = grid.n_per_axis
    rows = ["\t".join(CELL_COLUMNS)]
    qs = np.asarray(getattr(q_star, "values", q_star))
    tv = None if truth is None else np.asarray(getattr(truth, "values", truth))
    for p, y in enumerate(grid.points):
        i, rem = divmod(p, n * n)
        j, l = divmod(rem, n)
        rows.append("\t".join([
            str(p), str(i), str(j), str(l),
            _fmt(y[0]), _fmt(y[1]), _fmt(y[2]),
            "nan" if tv is None else _fmt(tv[p]),
            _fmt(qs[p].real), _fmt(qs[p].imag),
            "0" if unreliable[p] else "1",
        ]))
    Path(path).write_text("\n".join(rows) + "\n")


def read_cells(path) -> dict[str, np.ndarray]:
    lines = Path(path).read_text().splitlines()
    header = lines[0].split("\t")
    if tuple(header) != CELL_COLUMNS:
        raise InvalidArgumentError(f"{path}: unexpected header {header}")
    data = np.array([[float(t) for t in l.split("\t")] for l in lines[1:] if l.strip()])
    out = {name: data[:, c] for c, name in enumerate(header)}
    for name in ("index", "i", "j", "l", "reliable"):
        out[name] = out[name].astype(int)
    return out


def write_summary(path, items: dict):
    lines = []
    for key, value in items.items():
        if isinstance(value, (float, np.floating)):
            value = "nan" if math.isnan(value) else repr(float(value))
        elif isinstance(value, (np.integer, bool)):
            value = str(int(value))
        elif value is None:
            value = "none"
        lines.append(f"{key} = {value}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_summary(path) -> dict[str, str]:
    return parse_key_values(Path(path).read_text())
