"""Oracle suites: independent checks of the numerical machinery.

Every check here validates package output against a reconstruction that
does not share code with the implementation under test:

  * Christoffel symbols and metric components against nested central
    finite differences of the Cartesian embedding map;
  * the interior Navier operators against the covariant definitions
    (divergence and vector Laplacian) evaluated numerically from the
    embedding-derived connection, on manufactured fields with
    hand-written analytic derivatives;
  * the elliptic arc-length quadrature against composite
    Gauss-Legendre panels;
  * the closed-form membrane solution against its own balance equation
    under check-grid refinement;
  * solver-level identities: zero loading gives the zero field, traction
    scaling scales the field, converged fields minimize the energy over
    admissible perturbations, and the relaxation methods agree.

The quick tier runs everything at reduced sizes; the full tier adds the
N = 250 contact-trace reproductions with the reference Jacobi method.
"""

import numpy as np

from .analysis import relative_error
from .closed_form import membrane_ode_residual, w2_closed
from .foundation import apply_interior_operator
from .geometry import SurfaceFamily, christoffel, ellip_E, embedding, varphi
from .grid import build_grid, build_layer_grid
from .material import lame, params_from_deltas
from .solver import SolverConfig, discrete_energy, shell_system, solve, solve_system
from .two_body import solve_two_body


# -- embedding-based differential geometry oracle --------------------------


def fd_metric(surface, x2, x3, step=1e-5):
    """Metric components from central differences of the embedding."""
    def d(coord, s):
        if coord == 2:
            return embedding(surface, 0.0, x2 + s, x3)
        return embedding(surface, 0.0, x2, x3 + s)

    t2 = (d(2, step) - d(2, -step)) / (2.0 * step)
    t3 = (d(3, step) - d(3, -step)) / (2.0 * step)
    return {
        (2, 2): np.einsum("i...,i...->...", t2, t2),
        (2, 3): np.einsum("i...,i...->...", t2, t3),
        (3, 3): np.einsum("i...,i...->...", t3, t3),
    }


def fd_christoffel(surface, x2, x3, inner_step=1e-5, outer_step=1e-4):
    """All chart Christoffel symbols from nested differences of the
    embedding: the metric by central differences at inner_step, its
    gradients by central differences at outer_step."""
    def g(dx2, dx3):
        return fd_metric(surface, x2 + dx2, x3 + dx3, step=inner_step)

    h = outer_step
    g0 = g(0.0, 0.0)
    dg2 = {k: (a - b) / (2 * h) for (k, a, b) in
           ((key, g(h, 0.0)[key], g(-h, 0.0)[key]) for key in g0)}
    dg3 = {k: (a - b) / (2 * h) for (k, a, b) in
           ((key, g(0.0, h)[key], g(0.0, -h)[key]) for key in g0)}
    dg = {2: dg2, 3: dg3}

    def gval(i, j):
        return g0[(min(i, j), max(i, j))]

    def dgval(l, i, j):
        return dg[l][(min(i, j), max(i, j))]

    ginv = {}
    det = gval(2, 2) * gval(3, 3) - gval(2, 3) ** 2
    ginv[(2, 2)] = gval(3, 3) / det
    ginv[(3, 3)] = gval(2, 2) / det
    ginv[(2, 3)] = -gval(2, 3) / det

    def ginvval(i, j):
        return ginv[(min(i, j), max(i, j))]

    out = {}
    for k in (2, 3):
        for i in (2, 3):
            for j in (2, 3):
                s = 0.0
                for l in (2, 3):
                    s = s + 0.5 * ginvval(k, l) * (
                        dgval(i, l, j) + dgval(j, l, i) - dgval(l, i, j)
                    )
                out[(k, i, j)] = s
    return out


def check_christoffel(n_points=100, seed=20240213, tol=1e-6):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for a, b in ((2.0, 2.0), (2.0, 1.5), (2.0, 2.3)):
        s = SurfaceFamily(a, b)
        x2 = rng.uniform(-1.4, 1.4, n_points)
        x3 = rng.uniform(-0.8, 0.6, n_points)
        got = christoffel(s, x2, x3)
        ref = fd_christoffel(s, x2, x3)
        worst = max(
            worst,
            float(np.max(np.abs(got.G2_22 - ref[(2, 2, 2)]))),
            float(np.max(np.abs(got.G2_23 - ref[(2, 2, 3)]))),
            float(np.max(np.abs(got.G3_22 - ref[(3, 2, 2)]))),
            # symbols that must vanish for this metric
            float(np.max(np.abs(ref[(3, 2, 3)]))),
            float(np.max(np.abs(ref[(3, 3, 3)]))),
            float(np.max(np.abs(ref[(2, 3, 3)]))),
        )
    return worst < tol, f"max deviation {worst:.3e} (tol {tol})"


def check_metric(n_points=100, seed=7, tol=1e-8):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for a, b in ((2.0, 2.0), (2.0, 1.8), (2.0, 2.4)):
        s = SurfaceFamily(a, b)
        x2 = rng.uniform(-1.5, 1.5, n_points)
        x3 = rng.uniform(-0.9, 0.7, n_points)
        g = fd_metric(s, x2, x3)
        from .geometry import psi_bar2

        psi = psi_bar2(s, x2, x3)
        worst = max(
            worst,
            float(np.max(np.abs(g[(2, 3)]))),
            float(np.max(np.abs(g[(3, 3)] - 1.0))),
            float(np.max(np.abs(g[(2, 2)] - psi * psi))),
        )
    return worst < tol, f"max deviation {worst:.3e} (tol {tol})"


# -- elliptic integral against composite Gauss-Legendre --------------------


def gauss_legendre_E(x2, e2, panels=64, order=12):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, abs(x2), panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        t = mid + half * nodes
        total += half * np.sum(weights * np.sqrt(1.0 - e2 * np.sin(t) ** 2))
    return np.sign(x2) * total


def check_elliptic(n_points=50, seed=11, tol=1e-10):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        x2 = rng.uniform(-0.5 * np.pi, 0.5 * np.pi)
        e2 = rng.uniform(-1.5, 0.95)
        worst = max(worst, abs(ellip_E(x2, e2) - gauss_legendre_E(x2, e2)))
    return worst < tol, f"max deviation {worst:.3e} (tol {tol})"


# -- covariant-operator oracle for the interior equations ------------------


class ManufacturedField:
    """Smooth displacement field with hand-written derivatives so the
    covariant oracle never needs to differentiate it numerically."""

    def u2(self, x2, x3):
        return np.sin(2.0 * x2) * (x3 + 1.0) ** 2

    def du2_d2(self, x2, x3):
        return 2.0 * np.cos(2.0 * x2) * (x3 + 1.0) ** 2

    def du2_d3(self, x2, x3):
        return 2.0 * np.sin(2.0 * x2) * (x3 + 1.0)

    def u3(self, x2, x3):
        return np.cos(x2) * np.sin(x3) + x3 * x3

    def du3_d2(self, x2, x3):
        return -np.sin(x2) * np.sin(x3)

    def du3_d3(self, x2, x3):
        return np.cos(x2) * np.cos(x3) + 2.0 * x3


def exact_connection(a, b, x2, x3):
    """Metric inverse and Christoffel symbols from hand-differentiated
    embedding tangents (machine precision; shares nothing with the
    production geometry formulas except the embedding itself)."""
    s, c = np.sin(x2), np.cos(x2)
    phi = np.sqrt(b * b * s * s + a * a * c * c)
    dphi = (b * b - a * a) * s * c / phi
    ddphi = ((b * b - a * a) * (c * c - s * s) - dphi * dphi) / phi
    ny, nz = b * s / phi, a * c / phi
    dny = b * (c * phi - s * dphi) / phi**2
    dnz = a * (-s * phi - c * dphi) / phi**2
    ddny = b * (-s * (phi + ddphi) * phi - 2.0 * dphi * (c * phi - s * dphi)) / phi**3
    ddnz = a * (-c * (phi + ddphi) * phi - 2.0 * dphi * (-s * phi - c * dphi)) / phi**3

    t2 = np.stack([a * c + x3 * dny, -b * s + x3 * dnz])
    t3 = np.stack([ny + 0.0 * x3, nz + 0.0 * x3])
    X22 = np.stack([-a * s + x3 * ddny, -b * c + x3 * ddnz])
    X23 = np.stack([dny + 0.0 * x3, dnz + 0.0 * x3])
    X33 = np.zeros_like(X23)

    def dot(u, v):
        return np.einsum("i...,i...->...", u, v)

    g22, g23, g33 = dot(t2, t2), dot(t2, t3), dot(t3, t3)
    det = g22 * g33 - g23 * g23
    ginv = {(2, 2): g33 / det, (2, 3): -g23 / det, (3, 3): g22 / det}

    def ginvval(i, j):
        return ginv[(min(i, j), max(i, j))]

    second = {(2, 2): X22, (2, 3): X23, (3, 3): X33}
    tangent = {2: t2, 3: t3}
    gamma = {}
    for k in (2, 3):
        for i in (2, 3):
            for j in (2, 3):
                Xij = second[(min(i, j), max(i, j))]
                gamma[(k, i, j)] = sum(
                    ginvval(k, l) * dot(Xij, tangent[l]) for l in (2, 3)
                )
    return ginv, gamma


def covariant_residual(lam, mu, surface, x2, x3, field, step=1e-5):
    """Continuous Navier residuals from the covariant definitions: the
    connection comes from exact embedding tangents, only the outer
    derivatives of the covariant gradient use central differences."""
    a, b = surface.a, surface.b

    def grad(y2, y3):
        """nabla_k u^j as dict (k, j)."""
        _, G = exact_connection(a, b, y2, y3)
        u = {2: field.u2(y2, y3), 3: field.u3(y2, y3)}
        du = {
            (2, 2): field.du2_d2(y2, y3),
            (3, 2): field.du2_d3(y2, y3),
            (2, 3): field.du3_d2(y2, y3),
            (3, 3): field.du3_d3(y2, y3),
        }
        return {
            (k, j): du[(k, j)] + sum(G[(j, i, k)] * u[i] for i in (2, 3))
            for k in (2, 3)
            for j in (2, 3)
        }

    def div(y2, y3):
        n = grad(y2, y3)
        return n[(2, 2)] + n[(3, 3)]

    def ddiv(coord, y2, y3):
        if coord == 2:
            return (div(y2 + step, y3) - div(y2 - step, y3)) / (2 * step)
        return (div(y2, y3 + step) - div(y2, y3 - step)) / (2 * step)

    def dgrad(coord, y2, y3):
        if coord == 2:
            hi, lo = grad(y2 + step, y3), grad(y2 - step, y3)
        else:
            hi, lo = grad(y2, y3 + step), grad(y2, y3 - step)
        return {k: (hi[k] - lo[k]) / (2 * step) for k in hi}

    ginv, G = exact_connection(a, b, x2, x3)
    n0 = grad(x2, x3)
    ginv22 = ginv[(2, 2)]

    def lap(j):
        total = 0.0
        for i, gii in ((2, ginv22), (3, ginv[(3, 3)])):
            dn = dgrad(i, x2, x3)
            term = dn[(i, j)]
            term = term + sum(G[(j, i, l)] * n0[(i, l)] for l in (2, 3))
            term = term - sum(G[(l, i, i)] * n0[(l, j)] for l in (2, 3))
            total = total + gii * term
        return total

    r2 = (lam + mu) * ginv22 * ddiv(2, x2, x3) + mu * lap(2)
    r3 = (lam + mu) * ddiv(3, x2, x3) + mu * lap(3)
    return r2, r3


def interior_convergence_order(lam, mu, surface, x3_lo, x3_hi, levels=(17, 33, 65)):
    """Max-norm deviation of the discrete interior operator from the
    covariant oracle over refinement levels; returns observed orders."""
    field = ManufacturedField()
    errs = []
    for N in levels:
        x2 = np.linspace(-1.2, 1.2, N)
        dx2 = x2[1] - x2[0]
        dx3 = (x3_hi - x3_lo) / (N - 1) * 1.0
        x3 = x3_lo + dx3 * np.arange(N)
        X2, X3 = np.meshgrid(x2, x3, indexing="xy")
        r2d, r3d = apply_interior_operator(
            lam, mu, surface, x2, x3, dx2, dx3,
            field.u2(X2, X3), field.u3(X2, X3),
        )
        X2i, X3i = X2[1:-1, 1:-1], X3[1:-1, 1:-1]
        r2c, r3c = covariant_residual(lam, mu, surface, X2i, X3i, field)
        errs.append(
            max(float(np.max(np.abs(r2d - r2c))), float(np.max(np.abs(r3d - r3c))))
        )
    orders = [float(np.log2(errs[i] / errs[i + 1])) for i in range(len(errs) - 1)]
    return errs, orders


def check_mms_orders(lo=1.8, hi=2.2):
    lam_b, mu_b = lame(params_from_deltas(8, 1, 0.125, 0.9).foundation)
    lam_s, mu_s = lame(params_from_deltas(8, 1, 0.125, 0.9).shell)
    s = SurfaceFamily(2.0, 1.8)
    _, ord_f = interior_convergence_order(lam_b, mu_b, s, -0.9, -0.1)
    _, ord_l = interior_convergence_order(lam_s, mu_s, s, 0.05, 0.45)
    ok = all(lo <= o <= hi for o in (ord_f[-1], ord_l[-1]))
    return ok, f"foundation orders {ord_f}, layer orders {ord_l} (want [{lo}, {hi}])"


# -- closed form against its own balance ------------------------------------


def check_closed_form_ode(lo=1.8, hi=2.2):
    p = params_from_deltas(8, 1, 0.125, 0.9)
    x2 = np.linspace(-1.4, 1.4, 201)
    errs = []
    for delta in (2e-2, 1e-2, 5e-3):
        errs.append(float(np.max(np.abs(membrane_ode_residual(p, x2, delta)))))
    orders = [float(np.log2(errs[i] / errs[i + 1])) for i in range(len(errs) - 1)]
    ok = all(lo <= o <= hi for o in orders)
    return ok, f"residuals {['%.3e' % e for e in errs]}, orders {orders}"


# -- solver-level identities -------------------------------------------------


def check_zero_traction(N=64):
    # dh=0.375 keeps the layer 4 rows deep at this reduced N
    p = params_from_deltas(8, 1, 0.375, 1, tau0=0.0, tau_max=0.0)
    g = build_grid(p, N)
    u, rep = solve(p, g, SolverConfig(method="sor"))
    w, rep2 = solve_two_body(p, g, SolverConfig(method="sor"))
    worst = max(
        float(np.max(np.abs(u.u2))), float(np.max(np.abs(u.u3))),
        float(np.max(np.abs(w.foundation.u2))), float(np.max(np.abs(w.layer.u3))),
    )
    ok = worst == 0.0 and rep.converged and rep2.converged
    return ok, f"max |field| = {worst:.1e} (want exact zero)"


def check_linearity(N=48, tol=1e-10):
    g = build_grid(params_from_deltas(8, 1, 0.125, 1), N)
    cfg = SolverConfig(method="sor")
    u1, _ = solve(params_from_deltas(8, 1, 0.125, 1), g, cfg)
    u2, _ = solve(params_from_deltas(8, 1, 0.125, 1, tau0=2.0, tau_max=2.0), g, cfg)
    scale = float(np.max(np.abs(u2.u2)))
    dev = max(
        float(np.max(np.abs(u2.u2 - 2.0 * u1.u2))),
        float(np.max(np.abs(u2.u3 - 2.0 * u1.u3))),
    ) / scale
    return dev <= tol, f"relative deviation {dev:.3e} (tol {tol})"


def admissible_perturbation(rng, M, N, amplitude=1e-6):
    """Random perturbation satisfying the essential conditions: clamped
    bottom and zero slope of the radial trace at the two shell ends."""
    d2 = rng.uniform(-amplitude, amplitude, (M, N))
    d3 = rng.uniform(-amplitude, amplitude, (M, N))
    d2[0] = 0.0
    d3[0] = 0.0
    d3[-1, 0] = (4.0 * d3[-1, 1] - d3[-1, 2]) / 3.0
    d3[-1, -1] = (4.0 * d3[-1, -2] - d3[-1, -3]) / 3.0
    return d2, d3


def check_energy_minimum(N=64, n_perturbations=50, seed=321):
    p = params_from_deltas(8, 1, 0.125, 1)
    g = build_grid(p, N)
    u, rep = solve(p, g, SolverConfig(method="sor", tol=1e-10))
    J_star = discrete_energy(u, p, g)
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(n_perturbations):
        d2, d3 = admissible_perturbation(rng, g.M, g.N)
        cand = u.copy()
        cand.u2 += d2
        cand.u3 += d3
        worst = min(worst, discrete_energy(cand, p, g) - J_star)
    ok = worst >= 0.0 and rep.converged
    return ok, f"min(J - J*) over {n_perturbations} perturbations = {worst:.3e}"


def check_method_agreement(N=40, tol=5e-7):
    p = params_from_deltas(6, 1, 0.25, 1)
    g = build_grid(p, N)
    system = shell_system(p, g)
    xs = {}
    for method in ("direct", "sor", "jacobi"):
        xs[method], rep = solve_system(system, SolverConfig(method=method, tol=1e-10))
        if method != "direct" and not rep.converged:
            return False, f"{method} failed to converge at N={N}"
    scale = float(np.max(np.abs(xs["direct"])))
    dev = max(
        float(np.max(np.abs(xs["sor"] - xs["direct"]))),
        float(np.max(np.abs(xs["jacobi"] - xs["direct"]))),
    ) / scale
    return dev <= tol, f"max relative deviation {dev:.3e} (tol {tol})"


# -- figure reproductions (full tier) ---------------------------------------

FIG1_U2 = 2.75e-4
FIG1_U3 = -2.26e-4
FIG2_V2 = 2.78e-4
FIG2_V3 = -3.24e-4


def _within(got, want, rel):
    return abs(got - want) <= rel * abs(want)


def check_fig1(method="jacobi", N=250, rel=0.05):
    p = params_from_deltas(6, 1, 0.25, 1)
    g = build_grid(p, N)
    u, rep = solve(p, g, SolverConfig(method=method))
    u2t, u3t = u.trace
    peak = int(np.argmax(np.abs(u2t)))
    ok = (
        rep.converged
        and peak in (0, g.N - 1)
        and _within(abs(u2t[-1]), FIG1_U2, rel)
        and _within(u3t[-1], FIG1_U3, rel)
    )
    return ok, (
        f"u2(end) = {u2t[-1]:.4e} (want {FIG1_U2:.2e} +-{rel:.0%}), "
        f"u3(end) = {u3t[-1]:.4e} (want {FIG1_U3:.2e})"
    )


def check_fig2(method="jacobi", N=250, rel=0.05):
    p = params_from_deltas(6, 1, 0.25, 1)
    g = build_grid(p, N)
    w, rep = solve_two_body(p, g, SolverConfig(method=method))
    v2, v3 = w.interface
    ok = (
        rep.converged
        and _within(abs(v2[-1]), FIG2_V2, rel)
        and _within(v3[-1], FIG2_V3, rel)
    )
    return ok, (
        f"v2(end) = {v2[-1]:.4e} (want {FIG2_V2:.2e} +-{rel:.0%}), "
        f"v3(end) = {v3[-1]:.4e} (want {FIG2_V3:.2e})"
    )


QUICK_CHECKS = (
    ("christoffel_vs_embedding", check_christoffel),
    ("metric_components", check_metric),
    ("elliptic_vs_refined_quadrature", check_elliptic),
    ("interior_mms_orders", check_mms_orders),
    ("closed_form_ode_residual", check_closed_form_ode),
    ("zero_traction_zero_field", check_zero_traction),
    ("traction_linearity", check_linearity),
    ("energy_minimum", check_energy_minimum),
    ("method_agreement", check_method_agreement),
)

FULL_CHECKS = (
    ("contact_trace_shell_N250", check_fig1),
    ("contact_trace_two_body_N250", check_fig2),
)


def run_suite(level="quick"):
    """Run the oracle suite; returns a list of (name, passed, detail)."""
    checks = list(QUICK_CHECKS)
    if level == "full":
        checks += list(FULL_CHECKS)
    results = []
    for name, fn in checks:
        try:
            passed, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append((name, passed, detail))
    return results
