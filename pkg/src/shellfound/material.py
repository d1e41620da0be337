"""Isotropic material parameters and the fixed problem description.

Two bodies appear throughout: the elastic foundation (barred quantities
in the notes: E_bar, nu_bar, lambda_bar, mu_bar) and the thin overlying
body (plain E, nu).  All experiments share one fixed baseline

    a = 2, L = 1, E_bar = 1e3, nu_bar = 1/4, tau0 = tau_max = 1,

and vary the shell through the dimensionless ratios

    dE = E/E_bar,  dnu = nu/nu_bar,  dh = h/L,  db = b/a.
"""

from dataclasses import dataclass

from .geometry import SurfaceFamily


@dataclass(frozen=True)
class IsotropicMaterial:
    """Young's modulus E > 0 and Poisson's ratio nu in (-1, 1/2)."""

    E: float
    nu: float

    def __post_init__(self):
        if not self.E > 0.0:
            raise ValueError(f"Young's modulus must be positive, got {self.E}")
        if not (-1.0 < self.nu < 0.5):
            raise ValueError(f"Poisson's ratio must lie in (-1, 1/2), got {self.nu}")


def lame(material):
    """Lame parameters (lambda, mu):

    lambda = nu*E/((1+nu)(1-2nu)),  mu = E/(2(1+nu)).
    """
    E, nu = material.E, material.nu
    lam = nu * E / ((1.0 + nu) * (1.0 - 2.0 * nu))
    mu = 0.5 * E / (1.0 + nu)
    return lam, mu


def lambda_plane(material):
    """Plane modulus Lambda = 4*mu*(lambda+mu)/(lambda+2mu) = E/((1+nu)(1-nu))
    governing the membrane stiffness of the overlying body."""
    E, nu = material.E, material.nu
    return E / ((1.0 + nu) * (1.0 - nu))


# Baseline held fixed across every experiment.
BASE_A = 2.0
BASE_L = 1.0
BASE_E_FOUNDATION = 1.0e3
BASE_NU_FOUNDATION = 0.25
BASE_TAU0 = 1.0
BASE_TAU_MAX = 1.0


@dataclass(frozen=True)
class ModelParams:
    """Complete physical description of one bonded-shell problem."""

    surface: SurfaceFamily
    L: float
    h: float
    foundation: IsotropicMaterial
    shell: IsotropicMaterial
    tau0: float
    tau_max: float

    def __post_init__(self):
        if self.L <= 0.0 or self.h <= 0.0:
            raise ValueError(f"L and h must be positive, got L={self.L}, h={self.h}")

    @property
    def deltas(self):
        """Dimensionless ratios (dE, dnu, dh, db) relative to the baseline."""
        return (
            self.shell.E / BASE_E_FOUNDATION,
            self.shell.nu / BASE_NU_FOUNDATION,
            self.h / self.L,
            self.surface.b / self.surface.a,
        )


def params_from_deltas(dE, dnu, dh, db, tau0=BASE_TAU0, tau_max=BASE_TAU_MAX):
    """Build ModelParams from the dimensionless ratios applied to the
    fixed baseline.  Rejects ratios that leave the admissible material or
    geometry ranges."""
    E = dE * BASE_E_FOUNDATION
    nu = dnu * BASE_NU_FOUNDATION
    h = dh * BASE_L
    b = db * BASE_A
    if h <= 0.0 or b <= 0.0:
        raise ValueError(f"ratios give nonpositive dimension: h={h}, b={b}")
    return ModelParams(
        surface=SurfaceFamily(a=BASE_A, b=b),
        L=BASE_L,
        h=h,
        foundation=IsotropicMaterial(E=BASE_E_FOUNDATION, nu=BASE_NU_FOUNDATION),
        shell=IsotropicMaterial(E=E, nu=nu),
        tau0=tau0,
        tau_max=tau_max,
    )
