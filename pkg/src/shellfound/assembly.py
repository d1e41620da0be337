"""Sparse assembly of the coupled discrete systems.

Both problems are square linear systems A x = b over the contravariant
displacement components on structured grids:

  bonded shell:  foundation unknowns only; the contact row carries the
                 shell's governing equations (tangential/normal) with
                 traction rows at the two ends.

  two body:      foundation plus an overlying layer on [0, h] sharing
                 the interface row (single stored unknown per interface
                 node); the interface row carries the shear/normal
                 stress-continuity equations, the layer gets its own
                 Navier interior, side traction and free-top rows.

Every row is tagged with an equation class so residuals can be reported
per class, and with the (k, l) node it belongs to so verification
drivers can manufacture right-hand sides row by row.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import foundation as fnd
from .geometry import metric_scalars
from .grid import Field2D
from .material import lame
from .shell import ShellOperator

CLASS_NAMES = (
    "bottom_dirichlet",
    "interior_azimuthal",
    "interior_radial",
    "side_shear",
    "side_normal",
    "shell_tangential",
    "shell_normal",
    "shell_end_traction",
    "shell_end_pressure",
    "layer_interior_azimuthal",
    "layer_interior_radial",
    "layer_side_traction",
    "layer_side_shear",
    "layer_top_normal",
    "layer_top_shear",
    "interface_shear",
    "interface_normal",
)
CLASS_ID = {name: i for i, name in enumerate(CLASS_NAMES)}


class Indexer:
    """Column layout: foundation u2 block, foundation u3 block, then the
    layer blocks for rows m >= 1 (the interface row m = 0 aliases the
    foundation contact row)."""

    def __init__(self, N, M, Ml=0):
        self.N, self.M, self.Ml = N, M, Ml
        self.nf = 2 * N * M
        self.n = self.nf + (2 * N * (Ml - 1) if Ml else 0)

    def f2(self, k, l):
        return l * self.N + k

    def f3(self, k, l):
        return self.N * self.M + l * self.N + k

    def l2(self, k, m):
        if np.ndim(m) == 0:
            if m == 0:
                return self.f2(k, self.M - 1)
            return self.nf + (m - 1) * self.N + k
        return np.where(m == 0, self.f2(k, self.M - 1), self.nf + (m - 1) * self.N + k)

    def l3(self, k, m):
        off = self.nf + self.N * (self.Ml - 1)
        if np.ndim(m) == 0:
            if m == 0:
                return self.f3(k, self.M - 1)
            return off + (m - 1) * self.N + k
        return np.where(m == 0, self.f3(k, self.M - 1), off + (m - 1) * self.N + k)


class _Builder:
    def __init__(self, n):
        self.n = n
        self.rows, self.cols, self.vals = [], [], []
        self.b = np.zeros(n)
        self.classes = np.full(n, -1, dtype=np.int16)
        self.node_k = np.full(n, -1, dtype=np.int32)
        self.node_l = np.full(n, -1, dtype=np.int32)

    def tag(self, r, cls, k, l):
        self.classes[r] = CLASS_ID[cls]
        self.node_k[r] = k
        self.node_l[r] = l

    def add_row(self, r, row_dict, rhs, cls, k, l):
        for c, v in row_dict.items():
            self.rows.append(r)
            self.cols.append(c)
            self.vals.append(v)
        self.b[r] = rhs
        self.tag(r, cls, k, l)

    def add_arrays(self, r, c, v):
        self.rows.append(np.asarray(r).ravel())
        self.cols.append(np.asarray(c).ravel())
        self.vals.append(np.asarray(v).ravel())

    def build(self):
        rows = np.concatenate([np.atleast_1d(a) for a in self.rows])
        cols = np.concatenate([np.atleast_1d(a) for a in self.cols])
        vals = np.concatenate([np.atleast_1d(np.asarray(a, dtype=float)) for a in self.vals])
        A = sp.coo_matrix((vals, (rows, cols)), shape=(self.n, self.n)).tocsr()
        if np.any(self.classes < 0):
            missing = int(np.sum(self.classes < 0))
            raise RuntimeError(f"assembly left {missing} rows without an equation")
        return A


_STENCILS = {
    "0": ((0, 0, 1.0),),
    "2": ((1, 0, 0.5), (-1, 0, -0.5)),
    "3": ((0, 1, 0.5), (0, -1, -0.5)),
    "22": ((-1, 0, 1.0), (0, 0, -2.0), (1, 0, 1.0)),
    "33": ((0, -1, 1.0), (0, 0, -2.0), (0, 1, 1.0)),
    "23": ((1, 1, 0.25), (1, -1, -0.25), (-1, 1, -0.25), (-1, -1, 0.25)),
}
_SCALE_POWERS = {"0": (0, 0), "2": (1, 0), "3": (0, 1), "22": (2, 0), "33": (0, 2), "23": (1, 1)}


def _assemble_interior(builder, material, surface, x2, x3, dx2, dx3, col2, col3, row2, row3, cls2, cls3, l_offset):
    """Vectorized Navier interior rows for one region.

    x2/x3 are the full coordinate arrays of the region; interior nodes
    k = 1..N-2, l = 1..rows-2 get their equations.  row2/row3/col2/col3
    map (K, L) index arrays to global row/column indices.
    """
    lam, mu = lame(material)
    N, rows = len(x2), len(x3)
    K, L = np.meshgrid(np.arange(1, N - 1), np.arange(1, rows - 1), indexing="xy")
    X2, X3 = np.meshgrid(x2[1:-1], x3[1:-1], indexing="xy")
    coeffs = fnd.interior_coefficients(lam, mu, surface, X2, X3)
    for (eq, comp, deriv), coef in coeffs.items():
        r = row2(K, L) if eq == "2" else row3(K, L)
        col = col2 if comp == "2" else col3
        p2, p3 = _SCALE_POWERS[deriv]
        scale = dx2 ** (-p2) * dx3 ** (-p3)
        for dk, dl, w in _STENCILS[deriv]:
            builder.add_arrays(r, col(K + dk, L + dl), coef * (w * scale))
    for name, r, kk, ll in ((cls2, row2(K, L), K, L), (cls3, row3(K, L), K, L)):
        builder.classes[r.ravel()] = CLASS_ID[name]
        builder.node_k[r.ravel()] = kk.ravel()
        builder.node_l[r.ravel()] = ll.ravel() + l_offset


def _foundation_common(builder, params, grid, idx):
    """Bottom Dirichlet, lateral traction-free rows, and interior Navier
    rows of the foundation (everything below the contact row)."""
    N, M = grid.N, grid.M
    lam, mu = lame(params.foundation)
    _assemble_interior(
        builder,
        params.foundation,
        params.surface,
        grid.x2,
        grid.x3,
        grid.dx2,
        grid.dx3,
        idx.f2,
        idx.f3,
        idx.f2,
        idx.f3,
        "interior_azimuthal",
        "interior_radial",
        l_offset=0,
    )
    for k in range(N):
        builder.add_row(idx.f2(k, 0), {idx.f2(k, 0): 1.0}, 0.0, "bottom_dirichlet", k, 0)
        builder.add_row(idx.f3(k, 0), {idx.f3(k, 0): 1.0}, 0.0, "bottom_dirichlet", k, 0)
    for k, side2 in ((0, "fwd"), (N - 1, "bwd")):
        m = metric_scalars(params.surface, grid.x2[k], grid.x3)
        for l in range(1, M - 1):
            shear = fnd.side_shear_row(
                m["psi"][l], k, l, idx.f2, idx.f3, grid.dx2, grid.dx3, side2
            )
            builder.add_row(idx.f3(k, l), shear, 0.0, "side_shear", k, l)
            normal = fnd.side_normal_row(
                lam, mu, m["psi"][l], m["p"][l], m["q"][l],
                k, l, idx.f2, idx.f3, grid.dx2, grid.dx3, side2,
            )
            builder.add_row(idx.f2(k, l), normal, 0.0, "side_normal", k, l)


@dataclass
class DiscreteSystem:
    """One assembled linear problem plus the metadata needed to run,
    report and postprocess it."""

    A: sp.csr_matrix
    b: np.ndarray
    classes: np.ndarray
    node_k: np.ndarray
    node_l: np.ndarray
    params: object
    grid: object
    layer_grid: object = None
    diag: np.ndarray = field(init=False)

    def __post_init__(self):
        d = self.A.diagonal()
        if np.any(d == 0.0):
            raise RuntimeError("assembled system has zero diagonal entries")
        self.diag = d

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def tau_scale(self):
        t = max(abs(self.params.tau0), abs(self.params.tau_max))
        return t if t > 0.0 else 1.0

    def unpack(self, x):
        """Split a solution vector into foundation (and layer) fields."""
        N, M = self.grid.N, self.grid.M
        nf = N * M
        u = Field2D(u2=x[:nf].reshape(M, N).copy(), u3=x[nf : 2 * nf].reshape(M, N).copy())
        if self.layer_grid is None:
            return u
        Ml = self.layer_grid.Ml
        nl = N * (Ml - 1)
        v = Field2D.zeros(Ml, N)
        v.u2[1:] = x[2 * nf : 2 * nf + nl].reshape(Ml - 1, N)
        v.u3[1:] = x[2 * nf + nl : 2 * nf + 2 * nl].reshape(Ml - 1, N)
        v.u2[0] = u.u2[M - 1]
        v.u3[0] = u.u3[M - 1]
        return u, v

    def pack(self, u, v=None):
        x = np.zeros(self.A.shape[0])
        N, M = self.grid.N, self.grid.M
        nf = N * M
        x[:nf] = u.u2.ravel()
        x[nf : 2 * nf] = u.u3.ravel()
        if v is not None:
            nl = N * (self.layer_grid.Ml - 1)
            x[2 * nf : 2 * nf + nl] = v.u2[1:].ravel()
            x[2 * nf + nl : 2 * nf + 2 * nl] = v.u3[1:].ravel()
        return x

    def residual_by_class(self, x):
        r = np.abs(self.A @ x - self.b) / self.tau_scale
        return {
            CLASS_NAMES[c]: float(r[self.classes == c].max())
            for c in np.unique(self.classes)
        }


def build_shell_system(params, grid):
    """Assemble the bonded-shell problem on a foundation grid."""
    idx = Indexer(grid.N, grid.M)
    builder = _Builder(idx.n)
    _foundation_common(builder, params, grid, idx)
    op = ShellOperator(params, grid, idx.f2, idx.f3)
    top = grid.M - 1
    for k in range(1, grid.N - 1):
        builder.add_row(idx.f2(k, top), op.tangential_row(k), 0.0, "shell_tangential", k, top)
        builder.add_row(idx.f3(k, top), op.normal_row(k), 0.0, "shell_normal", k, top)
    for k, tau in ((0, params.tau0), (grid.N - 1, params.tau_max)):
        builder.add_row(idx.f2(k, top), op.traction_row(k), tau, "shell_end_traction", k, top)
        builder.add_row(idx.f3(k, top), op.pressure_row(k), 0.0, "shell_end_pressure", k, top)
    A = builder.build()
    return DiscreteSystem(
        A=A, b=builder.b, classes=builder.classes,
        node_k=builder.node_k, node_l=builder.node_l,
        params=params, grid=grid,
    )


def build_two_body_system(params, grid, layer_grid):
    """Assemble the fully resolved two-body problem (foundation + layer)."""
    N, M, Ml = grid.N, grid.M, layer_grid.Ml
    idx = Indexer(N, M, Ml)
    builder = _Builder(idx.n)
    _foundation_common(builder, params, grid, idx)

    lam_b, mu_b = lame(params.foundation)
    lam_s, mu_s = lame(params.shell)
    top = M - 1
    dx2, dx3f, dx3l = grid.dx2, grid.dx3, layer_grid.dx3

    _assemble_interior(
        builder,
        params.shell,
        params.surface,
        layer_grid.x2,
        layer_grid.x3,
        dx2,
        dx3l,
        idx.l2,
        idx.l3,
        idx.l2,
        idx.l3,
        "layer_interior_azimuthal",
        "layer_interior_radial",
        l_offset=M - 1,
    )

    mf = metric_scalars(params.surface, grid.x2[:, None], layer_grid.x3[None, :])
    # interface stress continuity at interior contact nodes
    m0 = metric_scalars(params.surface, grid.x2, 0.0)
    for k in range(1, N - 1):
        shear = fnd.side_shear_row(
            m0["psi"][k], k, top, idx.f2, idx.f3, dx2, dx3f, None, "bwd", mu_b
        )
        fnd.add_scaled(
            shear,
            fnd.side_shear_row(m0["psi"][k], k, 0, idx.l2, idx.l3, dx2, dx3l, None, "fwd", mu_s),
            -1.0,
        )
        builder.add_row(idx.f2(k, top), shear, 0.0, "interface_shear", k, top)
        normal = _normal3_row(
            lam_b, mu_b, m0["psi"][k], m0["p"][k], m0["q"][k],
            k, top, idx.f2, idx.f3, dx2, dx3f, None, "bwd",
        )
        fnd.add_scaled(
            normal,
            _normal3_row(
                lam_s, mu_s, m0["psi"][k], m0["p"][k], m0["q"][k],
                k, 0, idx.l2, idx.l3, dx2, dx3l, None, "fwd",
            ),
            -1.0,
        )
        builder.add_row(idx.f3(k, top), normal, 0.0, "interface_normal", k, top)

    # layer lateral rows carry the applied tractions; the paper's side set
    # is closed in x3, so the interface and top corners take side rows too
    for k, side2, tau in ((0, "fwd", params.tau0), (N - 1, "bwd", params.tau_max)):
        for m in range(0, Ml):
            side3 = "fwd" if m == 0 else "bwd" if m == Ml - 1 else None
            psi, p, q = mf["psi"][k, m], mf["p"][k, m], mf["q"][k, m]
            row2 = idx.l2(k, m)
            row3 = idx.l3(k, m)
            traction = fnd.side_normal_row(
                lam_s, mu_s, psi, p, q, k, m, idx.l2, idx.l3, dx2, dx3l, side2, side3
            )
            cls = "layer_side_traction"
            builder.add_row(row2, traction, tau, cls, k, M - 1 + m)
            shear = fnd.side_shear_row(
                psi, k, m, idx.l2, idx.l3, dx2, dx3l, side2, side3
            )
            builder.add_row(row3, shear, 0.0, "layer_side_shear", k, M - 1 + m)

    # free top of the layer (interior nodes)
    for k in range(1, N - 1):
        m = Ml - 1
        psi, p, q = mf["psi"][k, m], mf["p"][k, m], mf["q"][k, m]
        normal = _normal3_row(
            lam_s, mu_s, psi, p, q, k, m, idx.l2, idx.l3, dx2, dx3l, None, "bwd"
        )
        builder.add_row(idx.l3(k, m), normal, 0.0, "layer_top_normal", k, M - 1 + m)
        shear = fnd.side_shear_row(psi, k, m, idx.l2, idx.l3, dx2, dx3l, None, "bwd")
        builder.add_row(idx.l2(k, m), shear, 0.0, "layer_top_shear", k, M - 1 + m)

    A = builder.build()
    return DiscreteSystem(
        A=A, b=builder.b, classes=builder.classes,
        node_k=builder.node_k, node_l=builder.node_l,
        params=params, grid=grid, layer_grid=layer_grid,
    )


def _normal3_row(lam, mu, psi, p, q, k, l, col2, col3, dx2, dx3, side2, side3):
    """Radial normal-stress operator
    (lam+2mu) d3 u3 + lam (d2 u2 + G2_22 u2 + G2_23 u3) as a row."""
    row = {}
    for i, w in fnd.d1_stencil(l, dx3, side3).items():
        fnd.add_scaled(row, {col3(k, i): w}, lam + 2.0 * mu)
    for i, w in fnd.d1_stencil(k, dx2, side2).items():
        fnd.add_scaled(row, {col2(i, l): w}, lam)
    row[col2(k, l)] = row.get(col2(k, l), 0.0) + lam * p / psi
    row[col3(k, l)] = row.get(col3(k, l), 0.0) + lam * q / psi
    return row
