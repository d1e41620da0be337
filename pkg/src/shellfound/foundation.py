"""Elastic-foundation equations in the (x2, x3) chart.

Interior equilibrium is the homogeneous isotropic Navier system written
with contravariant displacement components (u2, u3),

    (lam + mu) * d^j(div u) + mu * (vector-Laplacian u)^j = 0,  j in {2, 3},

where div and the vector Laplacian are covariant in the chart metric
g22 = psi^2, g33 = 1.  The scalar expansions below were derived by hand
from that metric (psi, p = d2 psi, q = d3 psi, p2 = d22 psi,
q2 = d2 q); they are locked by the manufactured-solution oracle in the
test suite, which rebuilds the covariant operators symbolically from
the embedding and never sees these expansions.

Boundary conditions of the foundation proper:

    bottom (x3 = -L):       u2 = u3 = 0                      (clamped)
    sides  (x2 = -+pi/2):   psi^2 d3 u2 + d2 u3 = 0          (shear free)
                            (lam+2mu)(d2 u2 + G2_22 u2 + G2_23 u3)
                              + lam d3 u3 = 0                (normal free)

The normal-free side condition is the exact mixed stress component
T^2_2 = lam*div(u) + 2mu*E^2_2 of the chart metric; grouping the
Christoffel corrections under lam instead of lam+2mu loses roughly 15
percent of the benchmark contact displacements.
"""

from dataclasses import dataclass

import numpy as np

from .geometry import metric_scalars
from .material import lame


@dataclass(frozen=True)
class FoundationResidual:
    """Residuals of the two interior equilibrium equations at one node."""

    r2: float
    r3: float


def interior_coefficients(lam, mu, surface, x2, x3):
    """Coefficient arrays of the two Navier equations at points (x2, x3).

    Keys are (equation, component, derivative) with equation/component in
    {"2", "3"} and derivative in {"0", "2", "3", "22", "33", "23"}.
    x2 and x3 must broadcast; every value has the broadcast shape.
    """
    m = metric_scalars(surface, x2, x3)
    psi, p, q, p2, q2 = m["psi"], m["p"], m["q"], m["p2"], m["q2"]
    beta = lam + mu
    psi2 = psi * psi
    c = {
        # azimuthal equation: (lam+mu) d2(div)/psi^2 + mu lap(u)^2
        ("2", "2", "22"): (beta + mu) / psi2,
        ("2", "2", "33"): mu * np.ones_like(psi),
        ("2", "2", "2"): (beta + mu) * p / psi**3,
        ("2", "2", "3"): 3.0 * mu * q / psi,
        ("2", "2", "0"): (beta + mu) * (p2 * psi - p * p) / psi**4,
        ("2", "3", "23"): beta / psi2,
        ("2", "3", "2"): (beta + 2.0 * mu) * q / psi**3,
        ("2", "3", "0"): (beta + mu) * (q2 * psi - p * q) / psi**4,
        # radial equation: (lam+mu) d3(div) + mu lap(u)^3
        ("3", "3", "22"): mu / psi2,
        ("3", "3", "33"): (beta + mu) * np.ones_like(psi),
        ("3", "3", "2"): -mu * p / psi**3,
        ("3", "3", "3"): (beta + mu) * q / psi,
        ("3", "3", "0"): -(beta + mu) * q * q / psi2,
        ("3", "2", "23"): beta * np.ones_like(psi),
        ("3", "2", "3"): beta * p / psi,
        ("3", "2", "2"): -2.0 * mu * q / psi,
        ("3", "2", "0"): ((beta - mu) * q2 * psi - (beta + mu) * p * q) / psi2,
    }
    return c


def apply_interior_operator(lam, mu, surface, x2, x3, dx2, dx3, u2, u3):
    """Apply the discrete interior operator to whole fields.

    u2, u3 are (len(x3), len(x2)) arrays; returns (r2, r3) on the interior
    nodes, shape (len(x3)-2, len(x2)-2).  Central second-order stencils
    throughout (interior contract).
    """
    X2, X3 = np.meshgrid(x2[1:-1], x3[1:-1], indexing="xy")
    c = interior_coefficients(lam, mu, surface, X2, X3)

    def d(u, deriv):
        if deriv == "0":
            return u[1:-1, 1:-1]
        if deriv == "2":
            return (u[1:-1, 2:] - u[1:-1, :-2]) / (2.0 * dx2)
        if deriv == "3":
            return (u[2:, 1:-1] - u[:-2, 1:-1]) / (2.0 * dx3)
        if deriv == "22":
            return (u[1:-1, 2:] - 2.0 * u[1:-1, 1:-1] + u[1:-1, :-2]) / dx2**2
        if deriv == "33":
            return (u[2:, 1:-1] - 2.0 * u[1:-1, 1:-1] + u[:-2, 1:-1]) / dx3**2
        if deriv == "23":
            return (u[2:, 2:] - u[2:, :-2] - u[:-2, 2:] + u[:-2, :-2]) / (
                4.0 * dx2 * dx3
            )
        raise KeyError(deriv)

    r2 = np.zeros_like(c[("2", "2", "22")])
    r3 = np.zeros_like(r2)
    for (eq, comp, deriv), coef in c.items():
        term = coef * d(u2 if comp == "2" else u3, deriv)
        if eq == "2":
            r2 += term
        else:
            r3 += term
    return r2, r3


def interior_residual(u, params, grid, k, l):
    """Navier residuals at one strictly interior node (k, l)."""
    if not (0 < k < grid.N - 1 and 0 < l < grid.M - 1):
        raise ValueError(f"node ({k}, {l}) is not interior")
    lam, mu = lame(params.foundation)
    x2 = grid.x2[k - 1 : k + 2]
    x3 = grid.x3[l - 1 : l + 2]
    r2, r3 = apply_interior_operator(
        lam,
        mu,
        params.surface,
        x2,
        x3,
        grid.dx2,
        grid.dx3,
        u.u2[l - 1 : l + 2, k - 1 : k + 2],
        u.u3[l - 1 : l + 2, k - 1 : k + 2],
    )
    return FoundationResidual(r2=float(r2[0, 0]), r3=float(r3[0, 0]))


def bottom_dirichlet(u):
    """Clamped-bottom residuals: the bottom-row values themselves."""
    return u.u2[0].copy(), u.u3[0].copy()


# One-dimensional difference stencils as {index: weight} dicts.  side=None
# is the central stencil; "fwd"/"bwd" are the second-order three-point
# one-sided variants used on boundaries.


def d1_stencil(i, delta, side=None):
    if side is None:
        return {i - 1: -0.5 / delta, i + 1: 0.5 / delta}
    if side == "fwd":
        return {i: -1.5 / delta, i + 1: 2.0 / delta, i + 2: -0.5 / delta}
    if side == "bwd":
        return {i: 1.5 / delta, i - 1: -2.0 / delta, i - 2: 0.5 / delta}
    raise ValueError(side)


def d2_stencil(i, delta):
    w = 1.0 / delta**2
    return {i - 1: w, i: -2.0 * w, i + 1: w}


def add_scaled(row, other, s):
    for c, v in other.items():
        row[c] = row.get(c, 0.0) + s * v
    return row


def side_shear_row(psi_kl, k, l, col2, col3, dx2, dx3, side2, side3=None, mu_factor=1.0):
    """mu_factor * (psi^2 d3 u2 + d2 u3) as a {column: weight} row."""
    row = {}
    for i, w in d1_stencil(l, dx3, side3).items():
        add_scaled(row, {col2(k, i): w}, mu_factor * psi_kl * psi_kl)
    for i, w in d1_stencil(k, dx2, side2).items():
        add_scaled(row, {col3(i, l): w}, mu_factor)
    return row


def side_normal_row(
    lam, mu, psi_kl, p_kl, q_kl, k, l, col2, col3, dx2, dx3, side2, side3=None
):
    """Azimuthal normal-stress operator as a row,

        T^2_2 = (lam+2mu)(d2 u2 + G2_22 u2 + G2_23 u3) + lam d3 u3.
    """
    row = {}
    for i, w in d1_stencil(k, dx2, side2).items():
        add_scaled(row, {col2(i, l): w}, lam + 2.0 * mu)
    for i, w in d1_stencil(l, dx3, side3).items():
        add_scaled(row, {col3(k, i): w}, lam)
    row[col2(k, l)] = row.get(col2(k, l), 0.0) + (lam + 2.0 * mu) * p_kl / psi_kl
    row[col3(k, l)] = row.get(col3(k, l), 0.0) + (lam + 2.0 * mu) * q_kl / psi_kl
    return row


def side_robin(u, params, grid, side):
    """Both traction-free side residuals on one lateral boundary.

    side is "left" (x2 = -pi/2) or "right" (x2 = +pi/2); residuals are
    returned for the strictly lateral rows l = 1 .. M-2 as
    (shear, normal) arrays.
    """
    if side not in ("left", "right"):
        raise ValueError(side)
    k = 0 if side == "left" else grid.N - 1
    side2 = "fwd" if side == "left" else "bwd"
    lam, mu = lame(params.foundation)
    m = metric_scalars(params.surface, grid.x2[k], grid.x3)
    shear = np.empty(grid.M - 2)
    normal = np.empty(grid.M - 2)

    def col2(kk, ll):
        return ("2", kk, ll)

    def col3(kk, ll):
        return ("3", kk, ll)

    for l in range(1, grid.M - 1):
        sr = side_shear_row(m["psi"][l], k, l, col2, col3, grid.dx2, grid.dx3, side2)
        nr = side_normal_row(
            lam,
            mu,
            m["psi"][l],
            m["p"][l],
            m["q"][l],
            k,
            l,
            col2,
            col3,
            grid.dx2,
            grid.dx3,
            side2,
        )
        shear[l - 1] = evaluate_row(sr, u)
        normal[l - 1] = evaluate_row(nr, u)
    return shear, normal


def evaluate_row(row, field):
    """Evaluate a {("2"|"3", k, l): weight} row against a Field2D."""
    s = 0.0
    for (comp, k, l), w in row.items():
        s += w * (field.u2[l, k] if comp == "2" else field.u3[l, k])
    return s
