"""Differential geometry of the elliptic-cylinder contact chart.

The body of interest is an infinitely long annular semi-prism: its
cross-section is the upper half of an ellipse with horizontal radius
``a`` and vertical radius ``b``.  Points are addressed by curvilinear
coordinates ``(x2, x3)`` where ``x2 in [-pi/2, pi/2]`` runs along the
upper surface of the cross-section and ``x3`` is the signed offset from
that surface along its unit normal; ``x3 in [-L, 0]`` spans the elastic
foundation and ``x3 in [0, h]`` an overlying layer.

The Cartesian embedding of the chart (per unit length in the prism
direction ``x1``) is

    X(x1, x2, x3) = (x1, a sin x2, b cos x2)
                    + x3/phi(x2) * (0, b sin x2, a cos x2),

    phi(x2) = sqrt(b^2 sin^2 x2 + a^2 cos^2 x2).

The induced metric is diagonal with

    g22 = psi2(x2, x3)^2,   g33 = 1,   g23 = 0,
    psi2 = phi + x3*a*b/phi^2,

which the test suite confirms against finite differences of the
embedding rather than taking on faith.  Everything else in this module
(curvatures, Christoffel symbols, elliptic arc length) follows from
that metric.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad


@dataclass(frozen=True)
class SurfaceFamily:
    """Elliptic-cylinder upper surface with horizontal radius ``a`` and
    vertical radius ``b`` (both > 0)."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0.0 and self.b > 0.0):
            raise ValueError(f"radii must be positive, got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class Curvatures:
    """Curvature invariants of the upper surface at one ``x2``.

    ``H`` is the mean curvature, ``K`` the Gaussian curvature (identically
    zero for this ruled surface) and ``F_II_mixed`` the mixed
    second-fundamental-form component.  The sign convention is fixed so
    that ``H = -F_II_mixed/2 > 0`` (outward unit normal).
    """

    H: float
    K: float
    F_II_mixed: float


@dataclass(frozen=True)
class ChristoffelSet:
    """Nonzero Christoffel symbols of the (x2, x3) chart metric.

    With g22 = psi2^2 and g33 = 1 the only nonzero symbols are

        G2_22 = d2(psi2)/psi2,  G2_23 = G2_32 = d3(psi2)/psi2,
        G3_22 = -psi2 * d3(psi2).
    """

    G2_22: float
    G2_23: float
    G3_22: float


def varphi(surface, x2):
    """phi(x2) = sqrt(b^2 sin^2 x2 + a^2 cos^2 x2), the chart scale of
    the upper surface (equals |d(sigma)/dx2|)."""
    a, b = surface.a, surface.b
    s, c = np.sin(x2), np.cos(x2)
    return np.sqrt(b * b * s * s + a * a * c * c)


def dvarphi(surface, x2):
    """First x2-derivative of phi."""
    a, b = surface.a, surface.b
    return (b * b - a * a) * np.sin(x2) * np.cos(x2) / varphi(surface, x2)


def d2varphi(surface, x2):
    """Second x2-derivative of phi."""
    a, b = surface.a, surface.b
    f = varphi(surface, x2)
    df = dvarphi(surface, x2)
    return ((b * b - a * a) * np.cos(2.0 * x2) - df * df) / f


def psi_bar2(surface, x2, x3):
    """Chart scale psi2(x2, x3) = phi + x3*a*b/phi^2 of the offset surface.

    Raises ValueError if the metric degenerates (psi2 <= 0), which happens
    when the offset x3 reaches the inward focal distance of the curvature.
    """
    a, b = surface.a, surface.b
    f = varphi(surface, x2)
    psi = f + x3 * a * b / (f * f)
    if np.any(np.asarray(psi) <= 0.0):
        raise ValueError(
            "degenerate metric: psi2 <= 0 for x3 reaching -phi^3/(a*b); "
            f"got min psi2 = {np.min(psi):.6g}"
        )
    return psi


def metric_scalars(surface, x2, x3):
    """All chart-metric scalars needed by the difference operators.

    Returns a dict with (broadcast) arrays:

        psi  = psi2(x2, x3)
        p    = d(psi2)/dx2
        q    = d(psi2)/dx3 = a*b/phi^2      (independent of x3)
        p2   = d^2(psi2)/dx2^2
        q2   = d(q)/dx2
    """
    a, b = surface.a, surface.b
    f = varphi(surface, x2)
    df = dvarphi(surface, x2)
    ddf = d2varphi(surface, x2)
    ab = a * b
    psi = psi_bar2(surface, x2, x3)
    q = ab / (f * f)
    p = df * (1.0 - 2.0 * x3 * ab / f**3)
    p2 = ddf * (1.0 - 2.0 * x3 * ab / f**3) + 6.0 * x3 * ab * df * df / f**4
    q2 = -2.0 * ab * df / f**3
    psi, p, q, p2, q2 = np.broadcast_arrays(psi, p, q, p2, q2)
    return {"psi": psi, "p": p, "q": q, "p2": p2, "q2": q2}


def curvatures(surface, x2):
    """Mean/Gaussian curvature and the mixed second-fundamental-form
    component of the upper surface at ``x2``."""
    a, b = surface.a, surface.b
    f = varphi(surface, x2)
    F = -a * b / f**3
    return Curvatures(H=-0.5 * F, K=0.0 * F, F_II_mixed=F)


def d_F_II_mixed(surface, x2):
    """x2-derivative of the mixed second-fundamental-form component.

    Vanishes identically for a = b (constant curvature)."""
    a, b = surface.a, surface.b
    f = varphi(surface, x2)
    return 3.0 * a * b * dvarphi(surface, x2) / f**4


def christoffel(surface, x2, x3):
    """Closed-form Christoffel symbols of the chart metric at (x2, x3).

    The expressions are hand-derived from g22 = psi2^2, g33 = 1; the test
    suite locks them against central finite differences of the embedding
    map, which is the source of truth.
    """
    m = metric_scalars(surface, x2, x3)
    psi, p, q = m["psi"], m["p"], m["q"]
    return ChristoffelSet(G2_22=p / psi, G2_23=q / psi, G3_22=-psi * q)


def embedding(surface, x1, x2, x3):
    """Cartesian embedding X(x1, x2, x3) of the chart (the map whose
    induced metric everything here is derived from)."""
    a, b = surface.a, surface.b
    f = varphi(surface, x2)
    s, c = np.sin(x2), np.cos(x2)
    y = a * s + x3 * b * s / f
    z = b * c + x3 * a * c / f
    return np.asarray([x1 * np.ones_like(y + 0.0 * x1), y, z])


def ellip_E(x2, e2):
    """Incomplete elliptic integral of the second kind,

        E(x2, e^2) = integral_0^x2 sqrt(1 - e^2 sin^2 t) dt,

    by adaptive quadrature (abs tol 1e-12).  Negative e^2 (b > a) is
    permitted; the odd extension is used for negative x2.  Raises
    ValueError when e^2 > 1 and x2 runs past the zero of the integrand
    (the integrand would turn imaginary).
    """
    x2_arr = np.asarray(x2, dtype=float)
    if x2_arr.ndim == 0:
        return _ellip_E_scalar(float(x2_arr), float(e2))
    out = np.empty(x2_arr.shape)
    flat = x2_arr.ravel()
    o = out.ravel()
    for i, v in enumerate(flat):
        o[i] = _ellip_E_scalar(float(v), float(e2))
    return out


def _ellip_E_scalar(x2, e2):
    sign = 1.0
    if x2 < 0.0:
        sign, x2 = -1.0, -x2
    if x2 == 0.0:
        return 0.0
    if e2 > 1.0:
        s = np.sin(min(x2, 0.5 * np.pi))
        if e2 * s * s > 1.0:
            raise ValueError(
                f"elliptic integrand imaginary: e2={e2} with amplitude {x2}"
            )
    val, _ = quad(
        lambda t: np.sqrt(1.0 - e2 * np.sin(t) ** 2),
        0.0,
        x2,
        epsabs=1e-12,
        epsrel=1e-12,
        limit=200,
    )
    return sign * val


def ellip_E_complete(e2):
    """Complete elliptic integral of the second kind, E(pi/2, e^2)."""
    return ellip_E(0.5 * np.pi, e2)


# Thin-shell validity thresholds for max(h*H): above WARN the bending
# correction quadratic in h*H exceeds ~1 percent, above FAIL the
# shell-energy split underlying the model is no longer defensible.
HH_WARN = 0.1
HH_FAIL = 0.5


@dataclass(frozen=True)
class ShellAssumptionReport:
    max_hH: float
    ok: bool
    warning: bool
    message: str


def validate_shell_assumption(surface, h, samples=721):
    """Check the thin-shell geometry condition 0 <= h^2 K < h H << 1.

    For this surface family K = 0 identically, so the hard part of the
    condition reduces to hH > 0 everywhere; the smallness of max(hH) is
    graded against HH_WARN / HH_FAIL.  Raises ValueError on a hard
    violation (non-positive hH, negative K, or max hH > HH_FAIL).
    """
    if h <= 0.0:
        raise ValueError(f"shell thickness must be positive, got {h}")
    x2 = np.linspace(-0.5 * np.pi, 0.5 * np.pi, samples)
    cur = curvatures(surface, x2)
    hH = h * cur.H
    hhK = h * h * cur.K
    if np.any(cur.K < 0.0) or np.any(hH <= hhK):
        raise ValueError("surface violates 0 <= h^2*K < h*H (hyperbolic or flat)")
    # K = 0, H = a*b/(2 phi^3): the max sits where phi is smallest.
    max_hH = 0.5 * h * surface.a * surface.b / min(surface.a, surface.b) ** 3
    if max_hH > HH_FAIL:
        raise ValueError(
            f"max(h*H) = {max_hH:.4g} > {HH_FAIL}: shell too thick for its curvature"
        )
    warning = max_hH > HH_WARN
    msg = (
        f"max(h*H) = {max_hH:.4g}"
        + (" exceeds smallness threshold" if warning else " within thin-shell regime")
    )
    return ShellAssumptionReport(max_hH=float(max_hH), ok=True, warning=warning, message=msg)
