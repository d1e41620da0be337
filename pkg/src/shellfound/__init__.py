"""Numerical workbench for a thin elastic shell bonded to a curved
elastic foundation: curvilinear finite differences for the bonded-shell
model, the fully resolved two-body benchmark, the closed-form membrane
solution, and the relative-error parameter sweeps connecting them."""

from .geometry import (
    ChristoffelSet,
    Curvatures,
    SurfaceFamily,
    christoffel,
    curvatures,
    ellip_E,
    ellip_E_complete,
    psi_bar2,
    validate_shell_assumption,
    varphi,
)
from .grid import Field2D, Grid, LayerGrid, build_grid, build_layer_grid
from .material import (
    IsotropicMaterial,
    ModelParams,
    lame,
    lambda_plane,
    params_from_deltas,
)
from .solver import (
    SolveReport,
    SolverConfig,
    SolverDivergence,
    discrete_energy,
    jacobi_sweep,
    load_checkpoint,
    save_checkpoint,
    solve,
)

__all__ = [
    "ChristoffelSet",
    "Curvatures",
    "Field2D",
    "Grid",
    "IsotropicMaterial",
    "LayerGrid",
    "ModelParams",
    "SolveReport",
    "SolverConfig",
    "SolverDivergence",
    "SurfaceFamily",
    "build_grid",
    "build_layer_grid",
    "christoffel",
    "curvatures",
    "discrete_energy",
    "ellip_E",
    "ellip_E_complete",
    "jacobi_sweep",
    "lame",
    "lambda_plane",
    "load_checkpoint",
    "params_from_deltas",
    "psi_bar2",
    "save_checkpoint",
    "solve",
    "validate_shell_assumption",
    "varphi",
]

__version__ = "0.1.0"
