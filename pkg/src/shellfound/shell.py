"""Bonded-shell equations serving as the top boundary of the foundation.

Along the contact line (x3 = 0) the overlying shell contributes two
governing equations per node, written in terms of the mixed strain and
bending measures of the contact-line chart (surface metric phi^2,
surface Christoffel symbol Gs = phi'/phi, mixed second fundamental form
F = -a*b/phi^3):

    eps = d2 u2 + Gs u2 - F u3
    rho = (1/phi^2) [ d22 u3 - Gs d2 u3 - (a b/phi^2)^2 u3
                      - (2 a b/phi) d2 u2 + (a b phi'/phi^2) u2 ]

    tangential:  h Lam d2(eps) + (h^3 Lam/3)(2 F d2(rho) + F' rho)
                   - TrT32 = 0
    normal:     -h Lam F eps + (h^3 Lam/3)(Lap(rho) - F^2 rho)
                   + TrT33 = 0

with the foundation reacting through its trace stresses

    TrT32 = mu_b (phi^2 d3 u2 + d2 u3)
    TrT33 = lam_b (d2 u2 + Gs u2 + (a b/phi^3) u3) + (lam_b + 2 mu_b) d3 u3

(x3-derivatives one-sided into the foundation).  At the two shell ends
the traction condition

    Lam eps + (2/3) h^2 Lam F rho = tau

replaces the tangential equation, the zero-pressure condition
d2(rho) = 0 (one-sided) replaces the normal equation, and the
zero-slope condition d2(u3) = 0 enters through reflection ghosts
(u3(-1) := u3(+1)) inside the end-node bending measure; omitting the
zero-slope closure makes the fourth-order difference problem ill-posed.

Everything is expressed as {column: weight} rows over callable column
maps, so the same code backs the assembled solver matrix and the
pointwise diagnostics.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .foundation import add_scaled, d1_stencil, evaluate_row
from .geometry import d_F_II_mixed, dvarphi, varphi
from .material import lame, lambda_plane


@dataclass(frozen=True)
class ShellState:
    """Strain/bending measures and trace stresses at one contact node."""

    eps22: float
    rho22: float
    trT32: float
    trT33: float


class ShellOperator:
    """Precomputed {column: weight} rows of every shell-related operator
    along the contact line of one (params, grid) pair.

    col2/col3 map a (k, l) node to a column key; l is always the contact
    row M-1 for trace values, and reaches down to M-3 through the
    one-sided x3 stencils.
    """

    def __init__(self, params, grid, col2, col3):
        self.params = params
        self.grid = grid
        self.col2 = col2
        self.col3 = col3
        s = params.surface
        x2 = grid.x2
        self.phi = varphi(s, x2)
        self.dphi = dvarphi(s, x2)
        self.Gs = self.dphi / self.phi
        self.F = -s.a * s.b / self.phi**3
        self.dF = d_F_II_mixed(s, x2)
        self.lam_b, self.mu_b = lame(params.foundation)
        self.Lam = lambda_plane(params.shell)
        self.h = params.h
        self.N = grid.N
        self.M = grid.M
        self.dx2 = grid.dx2
        self.dx3 = grid.dx3
        self.top = grid.M - 1
        self._eps = [self._eps_row(k) for k in range(self.N)]
        self._rho = [self._rho_row(k) for k in range(self.N)]

    # -- strain and bending measures ------------------------------------

    def _d2_top(self, k):
        side = "fwd" if k == 0 else "bwd" if k == self.N - 1 else None
        return d1_stencil(k, self.dx2, side)

    def _eps_row(self, k):
        row = {}
        for i, w in self._d2_top(k).items():
            add_scaled(row, {self.col2(i, self.top): w}, 1.0)
        add_scaled(row, {self.col2(k, self.top): 1.0}, self.Gs[k])
        add_scaled(row, {self.col3(k, self.top): 1.0}, -self.F[k])
        return row

    def _rho_row(self, k):
        s = self.params.surface
        ab = s.a * s.b
        f = self.phi[k]
        row = {}
        # d22 u3 with reflection ghost u3(-1) := u3(+1) at the ends
        w = 1.0 / self.dx2**2
        if k == 0:
            dd = {0: -2.0 * w, 1: 2.0 * w}
        elif k == self.N - 1:
            dd = {self.N - 1: -2.0 * w, self.N - 2: 2.0 * w}
        else:
            dd = {k - 1: w, k: -2.0 * w, k + 1: w}
        for i, v in dd.items():
            add_scaled(row, {self.col3(i, self.top): v}, 1.0 / f**2)
        # -Gs d2 u3 / phi^2; the zero-slope ghost makes d2 u3 vanish at ends
        if 0 < k < self.N - 1:
            for i, v in d1_stencil(k, self.dx2).items():
                add_scaled(row, {self.col3(i, self.top): v}, -self.Gs[k] / f**2)
        add_scaled(row, {self.col3(k, self.top): 1.0}, -(ab * ab) / f**6)
        # -(2 a b/phi^3) d2 u2 (one-sided at the ends)
        for i, v in self._d2_top(k).items():
            add_scaled(row, {self.col2(i, self.top): v}, -2.0 * ab / f**3)
        add_scaled(row, {self.col2(k, self.top): 1.0}, ab * self.dphi[k] / f**4)
        return row

    # -- trace stresses ---------------------------------------------------

    def trT32_row(self, k):
        row = {}
        for i, w in d1_stencil(self.top, self.dx3, "bwd").items():
            add_scaled(row, {self.col2(k, i): w}, self.mu_b * self.phi[k] ** 2)
        for i, w in self._d2_top(k).items():
            add_scaled(row, {self.col3(i, self.top): w}, self.mu_b)
        return row

    def trT33_row(self, k):
        ab = self.params.surface.a * self.params.surface.b
        row = {}
        for i, w in self._d2_top(k).items():
            add_scaled(row, {self.col2(i, self.top): w}, self.lam_b)
        add_scaled(row, {self.col2(k, self.top): 1.0}, self.lam_b * self.Gs[k])
        add_scaled(row, {self.col3(k, self.top): 1.0}, self.lam_b * ab / self.phi[k] ** 3)
        for i, w in d1_stencil(self.top, self.dx3, "bwd").items():
            add_scaled(row, {self.col3(k, i): w}, self.lam_b + 2.0 * self.mu_b)
        return row

    # -- composite derivatives of the measures ----------------------------

    def _d2_of(self, rows, k):
        """Central x2-derivative of a per-node row family at interior k;
        at the ends the zero-pressure ghost rho(-1) := rho(+1) gives zero
        (only ever needed for rho)."""
        if k == 0 or k == self.N - 1:
            return {}
        out = {}
        add_scaled(out, rows[k + 1], 0.5 / self.dx2)
        add_scaled(out, rows[k - 1], -0.5 / self.dx2)
        return out

    def _d22_of_rho(self, k):
        w = 1.0 / self.dx2**2
        out = {}
        if k == 0:
            add_scaled(out, self._rho[1], 2.0 * w)
            add_scaled(out, self._rho[0], -2.0 * w)
        elif k == self.N - 1:
            add_scaled(out, self._rho[self.N - 2], 2.0 * w)
            add_scaled(out, self._rho[self.N - 1], -2.0 * w)
        else:
            add_scaled(out, self._rho[k - 1], w)
            add_scaled(out, self._rho[k], -2.0 * w)
            add_scaled(out, self._rho[k + 1], w)
        return out

    # -- governing rows ----------------------------------------------------

    def tangential_row(self, k):
        """h Lam d2(eps) + (h^3 Lam/3)(2F d2(rho) + F' rho) - TrT32 = 0,
        valid at interior contact nodes."""
        h, Lam = self.h, self.Lam
        row = {}
        add_scaled(row, self._d2_of(self._eps, k), h * Lam)
        add_scaled(row, self._d2_of(self._rho, k), (h**3 * Lam / 3.0) * 2.0 * self.F[k])
        add_scaled(row, self._rho[k], (h**3 * Lam / 3.0) * self.dF[k])
        add_scaled(row, self.trT32_row(k), -1.0)
        return row

    def normal_row(self, k):
        """-h Lam F eps + (h^3 Lam/3)(Lap(rho) - F^2 rho) + TrT33 = 0,
        valid at every contact node through the ghost closures."""
        h, Lam = self.h, self.Lam
        row = {}
        add_scaled(row, self._eps[k], -h * Lam * self.F[k])
        lap = {}
        add_scaled(lap, self._d22_of_rho(k), 1.0 / self.phi[k] ** 2)
        add_scaled(lap, self._d2_of(self._rho, k), -self.Gs[k] / self.phi[k] ** 2)
        add_scaled(row, lap, h**3 * Lam / 3.0)
        add_scaled(row, self._rho[k], -(h**3 * Lam / 3.0) * self.F[k] ** 2)
        add_scaled(row, self.trT33_row(k), 1.0)
        return row

    def traction_row(self, k):
        """Lam eps + (2/3) h^2 Lam F rho at an end node (equals the applied
        traction there)."""
        row = {}
        add_scaled(row, self._eps[k], self.Lam)
        add_scaled(row, self._rho[k], (2.0 / 3.0) * self.h**2 * self.Lam * self.F[k])
        return row

    def pressure_row(self, k):
        """One-sided d2(rho) at an end node: the zero-pressure condition,
        the end equation closing the radial unknown."""
        side = "fwd" if k == 0 else "bwd"
        row = {}
        for i, w in d1_stencil(k, self.dx2, side).items():
            add_scaled(row, self._rho[i], w)
        return row


@lru_cache(maxsize=8)
def _pointwise_operator(params, grid):
    def col2(k, l):
        return ("2", k, l)

    def col3(k, l):
        return ("3", k, l)

    return ShellOperator(params, grid, col2, col3)


def eps22(u, params, grid, k):
    """Mixed strain measure eps^2_2 at contact column k."""
    op = _pointwise_operator(params, grid)
    return evaluate_row(op._eps[k], u)


def rho22(u, params, grid, k):
    """Mixed bending measure rho^2_2 at contact column k."""
    op = _pointwise_operator(params, grid)
    return evaluate_row(op._rho[k], u)


def trace_stresses(u, params, grid, k):
    """Foundation trace stresses (TrT32, TrT33) at contact column k."""
    op = _pointwise_operator(params, grid)
    return (
        evaluate_row(op.trT32_row(k), u),
        evaluate_row(op.trT33_row(k), u),
    )


def shell_state(u, params, grid, k):
    op = _pointwise_operator(params, grid)
    return ShellState(
        eps22=evaluate_row(op._eps[k], u),
        rho22=evaluate_row(op._rho[k], u),
        trT32=evaluate_row(op.trT32_row(k), u),
        trT33=evaluate_row(op.trT33_row(k), u),
    )


def shell_residuals(u, params, grid, k):
    """(tangential, normal) governing residuals at interior contact
    column k (zero right-hand sides)."""
    if not (0 < k < grid.N - 1):
        raise ValueError("shell governing equations hold at interior nodes only")
    op = _pointwise_operator(params, grid)
    return (
        evaluate_row(op.tangential_row(k), u),
        evaluate_row(op.normal_row(k), u),
    )


def shell_end_conditions(u, params, grid, end):
    """Residuals of the three end conditions at end "min" or "max".

    Returns (traction_residual, pressure_residual, slope_residual).  The
    traction residual is the imposed discrete equation and reaches solver
    tolerance at convergence; the zero-pressure and zero-slope conditions
    are imposed through reflection ghosts, so their one-sided residuals
    here are consistent at second order but not solver-exact.
    """
    if end not in ("min", "max"):
        raise ValueError(end)
    k = 0 if end == "min" else grid.N - 1
    tau = params.tau0 if end == "min" else params.tau_max
    op = _pointwise_operator(params, grid)
    traction = evaluate_row(op.traction_row(k), u) - tau
    side = "fwd" if k == 0 else "bwd"
    rho_vals = {i: evaluate_row(op._rho[i], u) for i in _one_sided_support(k, grid.N)}
    pressure = sum(w * rho_vals[i] for i, w in d1_stencil(k, grid.dx2, side).items())
    slope = sum(
        w * u.u3[grid.M - 1, i] for i, w in d1_stencil(k, grid.dx2, side).items()
    )
    return traction, pressure, slope


def _one_sided_support(k, N):
    return (k, k + 1, k + 2) if k == 0 else (k, k - 1, k - 2)
