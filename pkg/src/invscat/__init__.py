"""Reconstruction of a 3D potential from fixed-incidence, multi-frequency scattering data."""

from .errors import (
    InvalidArgumentError,
    NoAdmissibleWavenumberError,
    NonConvergenceError,
    SingularityError,
    SingularSystemError,
)
from .fields import ComplexField, RealField
from .forward import (
    ScatteringDataset,
    assemble_forward_system,
    exact_amplitudes,
    generate_dataset,
    h_field,
    solve_forward,
)
from .grid import (
    DirectionSet,
    Grid,
    WavenumberGrid,
    greens_function,
    incident_wave,
    partition_cube,
    sphere_directions,
)
from .inversion import (
    InversionReport,
    amplitude_rhs,
    assemble_amplitude_matrix,
    compatibility_spread,
    invert,
    rank_wavenumbers,
    reconstruct_potential,
    relative_error,
    select_wavenumber,
)
from .noise import add_noise, noise_norm, perturb
from .potentials import PotentialSpec, sample_potential
from .solvers import (
    LinearSystem,
    RegularizationConfig,
    SolveDiagnostics,
    condition_proxy,
    direct_solve,
    dsm_solve,
)

__version__ = "0.1.0"

__all__ = [
    "ComplexField",
    "DirectionSet",
    "Grid",
    "InvalidArgumentError",
    "InversionReport",
    "LinearSystem",
    "NoAdmissibleWavenumberError",
    "NonConvergenceError",
    "PotentialSpec",
    "RealField",
    "RegularizationConfig",
    "ScatteringDataset",
    "SingularSystemError",
    "SingularityError",
    "SolveDiagnostics",
    "WavenumberGrid",
    "add_noise",
    "amplitude_rhs",
    "assemble_amplitude_matrix",
    "assemble_forward_system",
    "compatibility_spread",
    "condition_proxy",
    "direct_solve",
    "dsm_solve",
    "exact_amplitudes",
    "generate_dataset",
    "greens_function",
    "h_field",
    "incident_wave",
    "invert",
    "noise_norm",
    "partition_cube",
    "perturb",
    "rank_wavenumbers",
    "reconstruct_potential",
    "relative_error",
    "sample_potential",
    "select_wavenumber",
    "solve_forward",
    "sphere_directions",
]
