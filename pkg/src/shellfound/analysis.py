"""Relative-error metric between the two models and parameter sweeps.

For one parameter set both models are solved on the same foundation
grid and compared component by component over the foundation sample
points (all N columns, rows l = 1..M-1, i.e. everything above the
clamped bottom, trace row included):

    RelativeError(u^i) = sqrt( sum |u_shell^i - u_twobody^i|^2 )
                       / sqrt( sum |u_shell^i + u_twobody^i|^2 ).

A sweep varies one of the ratios dE, dnu, dh, db with the others held
at the defaults (dE=8, dnu=1, dh=1/8, db=1) and records both error
components per sample, solver convergence flags and the asymptotic
scale diagnostic.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .closed_form import scales
from .grid import build_grid, build_layer_grid
from .material import params_from_deltas
from .solver import SolverConfig, SolverDivergence, shell_system, solve_system
from .two_body import two_body_system

SWEEP_DEFAULTS = {"dE": 8.0, "dnu": 1.0, "dh": 0.125, "db": 1.0}
PARAM_NAMES = tuple(SWEEP_DEFAULTS)


def relative_error(shell_field, two_body_field, component):
    """Relative error of one displacement component (2 or 3) between the
    bonded-shell and the two-body foundation fields on a shared grid.

    Returns NaN (undefined) when the denominator vanishes: fields that
    are exactly opposite, or both identically zero."""
    if component not in (2, 3):
        raise ValueError("component must be 2 or 3")
    us = shell_field.u2 if component == 2 else shell_field.u3
    ut = two_body_field.u2 if component == 2 else two_body_field.u3
    if us.shape != ut.shape:
        raise ValueError("fields must share one foundation grid")
    rows = slice(1, us.shape[0])
    diff = us[rows] - ut[rows]
    tot = us[rows] + ut[rows]
    denom = math.sqrt(float(np.sum(tot * tot)))
    if denom == 0.0:
        return math.nan
    return math.sqrt(float(np.sum(diff * diff))) / denom


@dataclass(frozen=True)
class SweepSample:
    delta: float
    azimuthal_error: float
    radial_error: float
    converged_shell: bool
    converged_twobody: bool
    phi_scale: float

    @property
    def valid(self):
        return (
            self.converged_shell
            and self.converged_twobody
            and math.isfinite(self.azimuthal_error)
            and math.isfinite(self.radial_error)
        )


@dataclass
class ErrorCurve:
    param: str
    samples: list = field(default_factory=list)

    def deltas(self):
        return [s.delta for s in self.samples]

    def values(self, component):
        key = "azimuthal_error" if component == "azimuthal" else "radial_error"
        return [getattr(s, key) for s in self.samples]


def _deltas_for(param, value):
    d = dict(SWEEP_DEFAULTS)
    d[param] = value
    return d


def sweep_point(param, value, N=250, cfg=SolverConfig(), x0_pair=(None, None)):
    """Solve both models at one sweep sample; returns (sample, (xs, xt))
    with the raw solution vectors for warm-starting neighbours."""
    from dataclasses import replace

    p = params_from_deltas(**_deltas_for(param, value))
    grid = build_grid(p, N)
    lgrid = build_layer_grid(p, N)
    sys_s = shell_system(p, grid)
    sys_t = two_body_system(p, grid, lgrid)
    cfg_t = cfg
    if cfg.method == "sor" and cfg.relax is None:
        cfg_t = replace(cfg, relax=1.0)  # same cap as solve_two_body
    conv_s = conv_t = False
    xs = xt = None
    az = rad = math.nan
    try:
        xs, rep_s = solve_system(sys_s, cfg, x0_pair[0])
        conv_s = rep_s.converged
        xt, rep_t = solve_system(sys_t, cfg_t, x0_pair[1])
        conv_t = rep_t.converged
        if conv_s and conv_t:
            us = sys_s.unpack(xs)
            ut, _ = sys_t.unpack(xt)
            az = relative_error(us, ut, 2)
            rad = relative_error(us, ut, 3)
    except SolverDivergence:
        pass
    sample = SweepSample(
        delta=float(value),
        azimuthal_error=az,
        radial_error=rad,
        converged_shell=conv_s,
        converged_twobody=conv_t,
        phi_scale=scales(p).phi_scale,
    )
    return sample, (xs, xt)


def sweep(param, values, N=250, cfg=SolverConfig(), workers=1, warm_start=True):
    """Relative-error curve over one ratio; non-converged points are kept
    in the curve but flagged invalid rather than aborting the sweep."""
    if param not in PARAM_NAMES:
        raise ValueError(f"param must be one of {PARAM_NAMES}, got {param!r}")
    values = sorted(float(v) for v in values)
    if len(set(values)) != len(values):
        raise ValueError("sweep values must be strictly increasing")
    curve = ErrorCurve(param=param)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(sweep_point, param, v, N, cfg) for v in values]
            curve.samples = [f.result()[0] for f in futures]
        return curve
    carry = (None, None)
    for v in values:
        sample, sols = sweep_point(param, v, N, cfg, carry if warm_start else (None, None))
        curve.samples.append(sample)
        if warm_start:
            carry = sols
    return curve


def locate_extremum(curve, component="azimuthal", kind="min", refine=False):
    """Sample-grid extremum of one error component.

    Returns (delta, value, monotone) where monotone flags an extremum
    sitting on the first or last valid sample.  With refine=True a
    parabola through the three neighbouring samples sharpens an interior
    extremum.  Raises ValueError when fewer than 3 valid samples exist.
    """
    pts = [
        (s.delta, s.azimuthal_error if component == "azimuthal" else s.radial_error)
        for s in curve.samples
        if s.valid
    ]
    if len(pts) < 3:
        raise ValueError("extremum location needs at least 3 valid samples")
    values = [v for _, v in pts]
    i = min(range(len(pts)), key=lambda j: values[j] if kind == "min" else -values[j])
    delta, value = pts[i]
    monotone = i in (0, len(pts) - 1)
    if refine and not monotone:
        (x0, y0), (x1, y1), (x2, y2) = pts[i - 1], pts[i], pts[i + 1]
        denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
        acoef = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
        bcoef = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom
        ccoef = y1 - acoef * x1 * x1 - bcoef * x1
        if acoef != 0.0:
            xv = -bcoef / (2.0 * acoef)
            if x0 < xv < x2:
                delta, value = xv, acoef * xv * xv + bcoef * xv + ccoef
    return delta, value, monotone


def window_extremum(curve, center, halfwidth, component="azimuthal", kind="min"):
    """Extremal valid sample within [center-halfwidth, center+halfwidth];
    the tolerance-window check used by the acceptance harness."""
    pts = [
        (s.delta, s.azimuthal_error if component == "azimuthal" else s.radial_error)
        for s in curve.samples
        if s.valid and abs(s.delta - center) <= halfwidth + 1e-12
    ]
    if not pts:
        raise ValueError("no valid samples inside the window")
    sel = min if kind == "min" else max
    delta, value = sel(pts, key=lambda t: t[1])
    return delta, value


def curve_csv_lines(curve, header_lines=()):
    """CSV serialization: comment header, then one row per sample in the
    documented column order."""
    lines = [f"# {h}" for h in header_lines]
    lines.append("delta,azimuthal_error,radial_error,converged_shell,converged_twobody,phi_scale")
    for s in curve.samples:
        lines.append(
            f"{s.delta:.17g},{s.azimuthal_error:.17g},{s.radial_error:.17g},"
            f"{int(s.converged_shell)},{int(s.converged_twobody)},{s.phi_scale:.17g}"
        )
    return lines
