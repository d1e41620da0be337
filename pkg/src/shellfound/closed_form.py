"""Closed-form planar membrane solution and asymptotic scale diagnostics.

When the overlying body is reduced to a pure membrane on an elastic
pseudo-foundation (stretching energy h*Lam, foundation reaction
mu_b/L per unit area, end tractions tau), the azimuthal displacement
on the elliptic arc has the closed form

    w2(x2) = tau * sinh(a*alpha*E(x2, e)) / (alpha*Lam*phi(x2)*cosh(a*alpha*E(e))),

    alpha = sqrt(mu_b/(h*L*Lam)),  e^2 = 1 - (b/a)^2,

with E the incomplete elliptic integral of the second kind (complete
for the cosh normalization).  Substituting s = phi*w2 shows this solves
the membrane balance

    h*Lam * d2( phi^-1 * d2(phi*w2) ) = (mu_b/L) * phi * w2

with natural end conditions Lam*(s'/phi) = tau, which the test suite
verifies against an independent dense boundary-value solve.

The dimensionless group  scale = 2*a*alpha*E(e)  flags where the planar
solution can be trusted: proximity to one marks the regime in which the
membrane reduction balances the foundation reaction.
"""

from dataclasses import dataclass

import numpy as np

from .geometry import ellip_E, ellip_E_complete, varphi
from .material import lame, lambda_plane


@dataclass(frozen=True)
class AsymptoticScales:
    alpha: float  # 1/length
    e2: float  # squared elliptic modulus, negative for b > a
    phi_scale: float  # 2*a*alpha*E(e)


def scales(params):
    """Asymptotic scales of one parameter set."""
    _, mu_b = lame(params.foundation)
    Lam = lambda_plane(params.shell)
    a, b = params.surface.a, params.surface.b
    alpha = np.sqrt(mu_b / (params.h * params.L * Lam))
    e2 = 1.0 - (b / a) ** 2
    return AsymptoticScales(
        alpha=float(alpha),
        e2=float(e2),
        phi_scale=float(2.0 * a * alpha * ellip_E_complete(e2)),
    )


def w2_closed(params, x2):
    """Closed-form azimuthal membrane displacement at x2 (scalar or array).

    The formula is derived for equal end tractions; the common value
    scales the solution linearly."""
    if params.tau0 != params.tau_max:
        raise ValueError("closed form requires equal end tractions")
    s = scales(params)
    Lam = lambda_plane(params.shell)
    a = params.surface.a
    E_val = ellip_E(x2, s.e2)
    denom = s.alpha * Lam * varphi(params.surface, x2) * np.cosh(
        a * s.alpha * ellip_E_complete(s.e2)
    )
    return params.tau0 * np.sinh(a * s.alpha * E_val) / denom


def membrane_ode_residual(params, x2, delta):
    """Discrete residual of the membrane balance at points x2 with a
    compact check stencil of spacing delta; used to confirm the closed
    form satisfies its own equation at second order.

    In terms of s = phi*w2 the balance reads
    h*Lam*(s'/phi)' = (mu_b/L)*phi*s."""
    _, mu_b = lame(params.foundation)
    Lam = lambda_plane(params.shell)
    x2 = np.asarray(x2, dtype=float)
    phi = lambda t: varphi(params.surface, t)
    s = lambda t: phi(t) * w2_closed(params, t)
    inner = lambda t: (s(t + 0.5 * delta) - s(t - 0.5 * delta)) / delta / phi(t)
    lhs = params.h * Lam * (inner(x2 + 0.5 * delta) - inner(x2 - 0.5 * delta)) / delta
    rhs = (mu_b / params.L) * phi(x2) * s(x2)
    return lhs - rhs


def regime_report(params):
    """Diagnostic ratios of the asymptotic regime conditions (reported,
    never enforced): the membrane stiffness against the foundation shear
    reaction, against the foundation p-wave stiffness, and the bending
    term against the foundation reaction.  Curvature-dependent entries
    are sampled at the flattest and most curved points of the arc."""
    lam_b, mu_b = lame(params.foundation)
    Lam = lambda_plane(params.shell)
    a, b = params.surface.a, params.surface.b
    h, L = params.h, params.L
    e2 = 1.0 - (b / a) ** 2
    arc = 2.0 * a * ellip_E_complete(e2)
    F2 = [(a * b / f**3) ** 2 for f in (min(a, b), max(a, b))]
    return {
        "membrane_vs_shear_reaction": h * Lam / (mu_b * arc**2 / L),
        "membrane_vs_pwave": h * Lam / ((lam_b + 2.0 * mu_b) * L),
        "bending_vs_pwave_range": tuple(
            h * Lam * f2 / ((lam_b + 2.0 * mu_b) / L) for f2 in F2
        ),
        "phi_scale": scales(params).phi_scale,
    }
