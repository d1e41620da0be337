"""Relaxation solvers, the energy diagnostic and checkpoint files.

The discrete problems are square linear systems A x = b.  The reference
method is double-buffered point Jacobi with under-relaxation: every
node solves its own equation for its diagonal unknown against the
previous iterate,

    x_new = x - relax * (A x - b) / diag(A),

with the clamped bottom row re-zeroed after each sweep.  Because each
row is updated independently from the same previous iterate, a sweep
may be partitioned across workers over disjoint row ranges with
bit-identical results.

A successive-over-relaxation sweep (in-place, natural ordering,
numba-compiled) is provided as the accelerated mode, and a direct
sparse factorization as an unvalidated convenience for verification
drivers.  All three agree to solver tolerance; the iterative modes are
the validated paths.

Convergence is declared when max|A x - b| over every equation class,
normalized by the traction scale, drops below cfg.tol.
"""

import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import assembly
from .geometry import varphi
from .grid import Field2D
from .material import lame, lambda_plane
from .shell import ShellOperator
from .geometry import metric_scalars


class SolverDivergence(RuntimeError):
    """Raised when an iterate stops being finite."""

    def __init__(self, iteration):
        super().__init__(f"relaxation diverged at iteration {iteration}")
        self.iteration = iteration


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-8
    max_iter: int = 5_000_000
    relax: float = None  # None -> per-method default
    method: str = "jacobi"  # jacobi | sor | direct
    check_every: int = 50  # residual cadence for the sor sweep
    history_stride: int = 100
    workers: int = 1

    def resolved_relax(self):
        """Point Jacobi on the fourth-order bending row is only stable for
        relax below ~0.75 (the biharmonic Jacobi bound); SOR tolerates
        over-relaxation up to ~1.7 here."""
        if self.relax is not None:
            return self.relax
        return {"jacobi": 0.7, "sor": 1.6, "direct": 1.0}[self.method]


@dataclass
class SolveReport:
    iterations: int
    residual_history: np.ndarray
    converged: bool
    runtime: float
    final_residual: float
    method: str
    residual_by_class: dict = field(default_factory=dict)


@lru_cache(maxsize=6)
def shell_system(params, grid):
    return assembly.build_shell_system(params, grid)


def _bottom_columns(system):
    N, M = system.grid.N, system.grid.M
    k = np.arange(N)
    return np.concatenate([k, N * M + k])


def _row_slices(n, workers):
    bounds = np.linspace(0, n, workers + 1, dtype=int)
    return [slice(bounds[i], bounds[i + 1]) for i in range(workers)]


def _initial_vector(system, x0):
    n = system.A.shape[0]
    if x0 is None or len(x0) != n:
        x = np.zeros(n)
    else:
        x = np.array(x0, dtype=float)
    x[_bottom_columns(system)] = 0.0
    return x


def _jacobi_loop(system, cfg, x0=None):
    A, b, diag = system.A, system.b, system.diag
    n = A.shape[0]
    omega = cfg.resolved_relax()
    x = _initial_vector(system, x0)
    bottom = _bottom_columns(system)
    scale = system.tau_scale
    hist = []
    parts = None
    pool = None
    if cfg.workers > 1:
        slices = _row_slices(n, cfg.workers)
        parts = [(A[s], s) for s in slices]
        from concurrent.futures import ThreadPoolExecutor

        pool = ThreadPoolExecutor(max_workers=cfg.workers)
    it = 0
    converged = False
    res = np.inf
    while it <= cfg.max_iter:
        if parts is None:
            r = A @ x - b
        else:
            r = np.empty(n)
            futures = [pool.submit(lambda Ai, s: Ai @ x - b[s], Ai, s) for Ai, s in parts]
            for (Ai, s), f in zip(parts, futures):
                r[s] = f.result()
        res = float(np.max(np.abs(r))) / scale
        if not np.isfinite(res):
            if pool is not None:
                pool.shutdown(wait=False)
            raise SolverDivergence(it)
        if it % cfg.history_stride == 0:
            hist.append(res)
        if res <= cfg.tol:
            converged = True
            break
        if it == cfg.max_iter:
            break
        x -= omega * (r / diag)
        x[bottom] = 0.0
        it += 1
    if pool is not None:
        pool.shutdown(wait=True)
    hist.append(res)
    return x, it, np.asarray(hist), converged, res


def _sor_loop(system, cfg, x0=None):
    from ._kernels import sor_sweeps

    A, b, diag = system.A, system.b, system.diag
    omega = cfg.resolved_relax()
    x = _initial_vector(system, x0)
    bottom = _bottom_columns(system)
    scale = system.tau_scale
    hist = []
    it = 0
    converged = False
    res = np.inf
    while True:
        r = A @ x - b
        res = float(np.max(np.abs(r))) / scale
        if not np.isfinite(res):
            raise SolverDivergence(it)
        hist.append(res)
        if res <= cfg.tol:
            converged = True
            break
        if it >= cfg.max_iter:
            break
        sweeps = min(cfg.check_every, cfg.max_iter - it)
        sor_sweeps(A.indptr, A.indices, A.data, diag, b, x, omega, sweeps)
        x[bottom] = 0.0
        it += sweeps
    return x, it, np.asarray(hist), converged, res


def solve_system(system, cfg=SolverConfig(), x0=None):
    """Drive one assembled system to convergence; returns (x, report).

    x0 seeds the iterative methods (warm start across nearby parameter
    points); it is ignored when the size does not match or for the
    direct method."""
    t0 = time.perf_counter()
    if cfg.method == "jacobi":
        x, it, hist, converged, res = _jacobi_loop(system, cfg, x0)
    elif cfg.method == "sor":
        x, it, hist, converged, res = _sor_loop(system, cfg, x0)
    elif cfg.method == "direct":
        from scipy.sparse.linalg import spsolve

        x = spsolve(system.A.tocsc(), system.b)
        r = system.A @ x - system.b
        res = float(np.max(np.abs(r))) / system.tau_scale
        if not np.isfinite(res):
            raise SolverDivergence(0)
        it, hist, converged = 0, np.asarray([res]), True
    else:
        raise ValueError(f"unknown method {cfg.method!r}")
    report = SolveReport(
        iterations=it,
        residual_history=hist,
        converged=converged,
        runtime=time.perf_counter() - t0,
        final_residual=res,
        method=cfg.method,
        residual_by_class=system.residual_by_class(x),
    )
    return x, report


def solve(params, grid, cfg=SolverConfig(), x0=None):
    """Solve the bonded-shell problem; returns (Field2D, SolveReport)."""
    from .geometry import validate_shell_assumption

    validate_shell_assumption(params.surface, params.h)
    system = shell_system(params, grid)
    x, report = solve_system(system, cfg, x0)
    return system.unpack(x), report


def jacobi_sweep(u, params, grid, relax=0.7):
    """One double-buffered Jacobi sweep of the bonded-shell problem.

    Returns (updated field, max-norm of the update).  At the exact
    discrete solution the update is zero to round-off.
    """
    system = shell_system(params, grid)
    x = system.pack(u)
    r = system.A @ x - system.b
    if not np.all(np.isfinite(r)):
        raise SolverDivergence(0)
    xn = x - relax * (r / system.diag)
    xn[_bottom_columns(system)] = 0.0
    return system.unpack(xn), float(np.max(np.abs(xn - x)))


def discrete_energy(u, params, grid):
    """Total potential energy of a candidate bonded-shell field:
    foundation strain energy + shell membrane/bending energy minus the
    work of the end tractions.  Trapezoidal quadrature, second-order
    difference stencils (one-sided on boundaries)."""
    lam_b, mu_b = lame(params.foundation)
    Lam = lambda_plane(params.shell)
    h = params.h
    x2, x3 = grid.x2, grid.x3
    m = metric_scalars(params.surface, x2[None, :], x3[:, None])
    psi, p, q = m["psi"], m["p"], m["q"]

    d2u2 = np.gradient(u.u2, grid.dx2, axis=1)
    d3u2 = np.gradient(u.u2, grid.dx3, axis=0)
    d2u3 = np.gradient(u.u3, grid.dx2, axis=1)
    d3u3 = np.gradient(u.u3, grid.dx3, axis=0)

    E22 = d2u2 + (p / psi) * u.u2 + (q / psi) * u.u3
    E33 = d3u3
    E23 = 0.5 * (psi * psi * d3u2 + d2u3)  # covariant component
    dens = 0.5 * lam_b * (E22 + E33) ** 2 + mu_b * (
        E22 * E22 + E33 * E33 + 2.0 * (E23 / psi) ** 2
    )
    w2 = _trapz_weights(grid.M, grid.dx3)[:, None] * _trapz_weights(grid.N, grid.dx2)[None, :]
    e_found = float(np.sum(dens * psi * w2))

    op = ShellOperator(params, grid, lambda k, l: ("2", k, l), lambda k, l: ("3", k, l))
    from .foundation import evaluate_row

    eps = np.array([evaluate_row(op._eps[k], u) for k in range(grid.N)])
    rho = np.array([evaluate_row(op._rho[k], u) for k in range(grid.N)])
    phi = varphi(params.surface, x2)
    shell_dens = 0.5 * Lam * (h * eps**2 + (h**3 / 3.0) * rho**2)
    e_shell = float(np.sum(shell_dens * phi * _trapz_weights(grid.N, grid.dx2)))

    work = h * (
        params.tau_max * phi[-1] * u.u2[-1, -1] - params.tau0 * phi[0] * u.u2[-1, 0]
    )
    return e_found + e_shell - work


def _trapz_weights(n, delta):
    w = np.full(n, delta)
    w[0] = w[-1] = 0.5 * delta
    return w


# -- checkpoints -----------------------------------------------------------

CHECKPOINT_MAGIC = "shellfound-checkpoint 1"


def save_checkpoint(path, grid, u, layer_grid=None, v=None):
    """Write fields as a text checkpoint: a small header per region
    followed by the u2 then u3 blocks, one grid row per line."""
    with open(path, "w") as f:
        f.write(CHECKPOINT_MAGIC + "\n")
        f.write(
            f"foundation {grid.N} {grid.M} {grid.dx2!r} {grid.dx3!r} {grid.L!r} {grid.psi0!r}\n"
        )
        np.savetxt(f, np.vstack([u.u2, u.u3]), fmt="%.17g")
        if layer_grid is not None:
            f.write(
                f"layer {layer_grid.N} {layer_grid.Ml} {layer_grid.dx2!r} "
                f"{layer_grid.dx3!r} {layer_grid.h!r} {layer_grid.psi0!r}\n"
            )
            np.savetxt(f, np.vstack([v.u2, v.u3]), fmt="%.17g")


def load_checkpoint(path):
    """Read a checkpoint; returns a dict with keys 'foundation' and
    optionally 'layer', each mapping to (header dict, Field2D)."""
    out = {}
    with open(path) as f:
        if f.readline().strip() != CHECKPOINT_MAGIC:
            raise ValueError(f"{path}: not a shellfound checkpoint")
        line = f.readline()
        while line:
            parts = line.split()
            region, N, rows = parts[0], int(parts[1]), int(parts[2])
            header = {
                "N": N,
                "rows": rows,
                "dx2": float(parts[3]),
                "dx3": float(parts[4]),
                "extent": float(parts[5]),
                "psi0": float(parts[6]),
            }
            data = np.loadtxt(f, max_rows=2 * rows).reshape(2 * rows, N)
            out[region] = (header, Field2D(u2=data[:rows], u3=data[rows:]))
            line = f.readline()
    return out
