"""Structured grids for the (x2, x3) chart and the field containers.

The azimuthal direction always carries N points over [-pi/2, pi/2],
dx2 = pi/(N-1).  The x3 spacing is slaved to the chart-scale condition

    psi0 * dx2 <= dx3,

with psi0 = psi2(pi/4, 0) for the foundation and psi0 = psi2(pi/4, h)
for an overlying layer.  dx3 is taken as large as the condition allows
while dividing the region depth exactly (M-1 = floor(depth/(psi0*dx2))),
so the condition holds by construction.
"""

from dataclasses import dataclass, field

import numpy as np

from .geometry import psi_bar2


@dataclass(frozen=True)
class Grid:
    """Foundation grid over [-pi/2, pi/2] x [-L, 0]; row l=0 is the bottom
    (x3 = -L), row l = M-1 the contact line (x3 = 0)."""

    N: int
    M: int
    dx2: float
    dx3: float
    psi0: float
    L: float

    @property
    def x2(self):
        return np.linspace(-0.5 * np.pi, 0.5 * np.pi, self.N)

    @property
    def x3(self):
        return np.linspace(-self.L, 0.0, self.M)


@dataclass(frozen=True)
class LayerGrid:
    """Overlying-layer grid over [-pi/2, pi/2] x [0, h]; row m=0 is the
    shared interface (x3 = 0), row m = Ml-1 the free top (x3 = h)."""

    N: int
    Ml: int
    dx2: float
    dx3: float
    psi0: float
    h: float

    @property
    def x2(self):
        return np.linspace(-0.5 * np.pi, 0.5 * np.pi, self.N)

    @property
    def x3(self):
        return np.linspace(0.0, self.h, self.Ml)


def build_grid(params, N, psi0_rule="foundation"):
    """Foundation grid for the given problem.

    psi0_rule selects the chart scale pinning dx3:
      "foundation" -> psi2(pi/4, 0)   (bonded-shell and two-body runs)
      "layer"      -> psi2(pi/4, h)   (used by build_layer_grid)
    """
    if N < 5:
        raise ValueError(f"N must be at least 5 for the shell stencils, got N={N}")
    dx2 = np.pi / (N - 1)
    if psi0_rule == "foundation":
        psi0 = float(psi_bar2(params.surface, 0.25 * np.pi, 0.0))
    elif psi0_rule == "layer":
        psi0 = float(psi_bar2(params.surface, 0.25 * np.pi, params.h))
    else:
        raise ValueError(f"unknown psi0 rule {psi0_rule!r}")
    rows = int(np.floor(params.L / (psi0 * dx2)))
    if rows < 4:
        raise ValueError(
            f"N={N} leaves fewer than 5 foundation rows under psi0*dx2 <= dx3"
        )
    return Grid(N=N, M=rows + 1, dx2=dx2, dx3=params.L / rows, psi0=psi0, L=params.L)


def build_layer_grid(params, N):
    """Layer grid matched in x2 to the foundation grid, with its own dx3
    from psi0 = psi2(pi/4, h)."""
    dx2 = np.pi / (N - 1)
    psi0 = float(psi_bar2(params.surface, 0.25 * np.pi, params.h))
    rows = int(np.floor(params.h / (psi0 * dx2)))
    if rows < 2:
        raise ValueError(
            f"layer too thin for N={N}: h={params.h} admits only {rows + 1} rows "
            "under psi0*dx2 <= dx3 (need 3 for one-sided stencils)"
        )
    return LayerGrid(
        N=N, Ml=rows + 1, dx2=dx2, dx3=params.h / rows, psi0=psi0, h=params.h
    )


@dataclass
class Field2D:
    """Displacement components on a structured grid, shape (rows, N).

    u2 is the azimuthal (chart-contravariant) component, u3 the radial
    one.  For a foundation field rows run bottom to contact line; for a
    layer field, interface to top.
    """

    u2: np.ndarray
    u3: np.ndarray

    def __post_init__(self):
        if self.u2.shape != self.u3.shape:
            raise ValueError("u2 and u3 must share a shape")

    @classmethod
    def zeros(cls, rows, N):
        return cls(u2=np.zeros((rows, N)), u3=np.zeros((rows, N)))

    def copy(self):
        return Field2D(u2=self.u2.copy(), u3=self.u3.copy())

    @property
    def trace(self):
        """(u2, u3) along the last row (the contact line for a foundation
        field)."""
        return self.u2[-1], self.u3[-1]
