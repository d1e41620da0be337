"""Batch front end: named presets, config files, experiment commands.

Commands
--------
solve-shell     bonded-shell solve; writes the contact trace CSV
solve-two-body  two-body solve; writes the interface trace CSV
closed-form     closed-form membrane samples and scale diagnostics
sweep           relative-error curve over one ratio
compare         both models at one parameter set plus their errors
verify          oracle suites (quick) and figure reproductions (full)

Configuration is a flat chain: preset values, then key=value lines from
--config, then explicit command-line flags, later wins.  Every CSV
starts with comment lines carrying the fully resolved parameter set and
grid so a file is reproducible from its own header; runtimes and
iteration counts go to the run manifest instead, keeping CSV bodies
byte-stable across reruns.

Exit codes: 0 success, 2 configuration error, 3 solver divergence,
4 non-convergence.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import verify as verify_mod
from .analysis import curve_csv_lines, sweep
from .closed_form import regime_report, scales, w2_closed
from .grid import build_grid, build_layer_grid
from .material import params_from_deltas
from .presets import RUN_PRESETS, SWEEP_PRESETS
from .solver import SolverConfig, SolverDivergence, save_checkpoint, solve
from .two_body import solve_two_body

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_NOT_CONVERGED = 4


class ConfigError(Exception):
    pass


def _read_config_file(path):
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}: expected key=value, got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key] = val
    return out


_FLOAT_KEYS = ("dE", "dnu", "dh", "db", "tol", "relax", "tau0", "tau_max")
_INT_KEYS = ("n", "max_iter", "workers")


def _resolve(args, need_ratios=True):
    """Merge preset, config file and explicit flags into one flat dict."""
    merged = {
        "dE": None, "dnu": 1.0, "dh": None, "db": 1.0,
        "n": 250, "tol": 1e-8, "max_iter": 5_000_000, "relax": None,
        "method": "sor", "workers": 1, "tau0": 1.0, "tau_max": 1.0,
    }
    preset = getattr(args, "preset", None)
    if preset:
        if preset not in RUN_PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r}; choose from {sorted(RUN_PRESETS)}"
            )
        merged.update(RUN_PRESETS[preset])
    if getattr(args, "config", None):
        raw = _read_config_file(args.config)
        for key, val in raw.items():
            if key in _FLOAT_KEYS:
                merged[key] = float(val)
            elif key in _INT_KEYS:
                merged[key] = int(val)
            elif key in ("method",):
                merged[key] = val
            else:
                raise ConfigError(f"unknown config key {key!r}")
    for key in (*_FLOAT_KEYS, *_INT_KEYS, "method"):
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    if need_ratios:
        missing = [k for k in ("dE", "dh") if merged[k] is None]
        if missing:
            raise ConfigError(
                f"missing parameter(s) {missing}: give --preset or explicit ratios"
            )
    if merged["method"] not in ("jacobi", "sor", "direct"):
        raise ConfigError(f"unknown method {merged['method']!r}")
    return merged


def _solver_config(merged):
    return SolverConfig(
        tol=merged["tol"],
        max_iter=merged["max_iter"],
        relax=merged["relax"],
        method=merged["method"],
        workers=merged["workers"],
    )


def _params(merged):
    return params_from_deltas(
        merged["dE"], merged["dnu"], merged["dh"], merged["db"],
        tau0=merged["tau0"], tau_max=merged["tau_max"],
    )


def _header_lines(merged, grid, layer_grid=None):
    keys = ("dE", "dnu", "dh", "db", "n", "tol", "max_iter", "relax", "method",
            "workers", "tau0", "tau_max")
    lines = ["shellfound run", " ".join(f"{k}={merged[k]}" for k in keys)]
    lines.append(
        f"grid N={grid.N} M={grid.M} dx2={grid.dx2:.17g} dx3={grid.dx3:.17g} "
        f"psi0={grid.psi0:.17g}"
    )
    if layer_grid is not None:
        lines.append(
            f"layer Ml={layer_grid.Ml} dx3={layer_grid.dx3:.17g} "
            f"psi0={layer_grid.psi0:.17g}"
        )
    return lines


def _write_lines(path, lines):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path}")


def _trace_csv(path, header, x2, c2, c3, names):
    lines = [f"# {h}" for h in header]
    lines.append("x2," + ",".join(names))
    for xv, a, b in zip(x2, c2, c3):
        lines.append(f"{xv:.17g},{a:.17g},{b:.17g}")
    _write_lines(path, lines)


def _manifest(path, merged, grid, report, extra=()):
    lines = [f"{k}={v}" for k, v in merged.items()]
    lines.append(f"grid_N={grid.N}")
    lines.append(f"grid_M={grid.M}")
    lines.append(f"grid_dx2={grid.dx2:.17g}")
    lines.append(f"grid_dx3={grid.dx3:.17g}")
    if report is not None:
        lines.append(f"iterations={report.iterations}")
        lines.append(f"converged={report.converged}")
        lines.append(f"final_residual={report.final_residual:.6e}")
        lines.append(f"runtime_s={report.runtime:.3f}")
        for cls, r in sorted(report.residual_by_class.items()):
            lines.append(f"residual[{cls}]={r:.6e}")
    lines.extend(extra)
    _write_lines(path, lines)


def _report_exit(report):
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_solve_shell(args):
    merged = _resolve(args)
    p = _params(merged)
    grid = build_grid(p, merged["n"])
    field, report = solve(p, grid, _solver_config(merged))
    out = Path(args.outdir)
    u2t, u3t = field.trace
    _trace_csv(out / "shell_trace.csv", _header_lines(merged, grid),
               grid.x2, u2t, u3t, ("u2", "u3"))
    _manifest(out / "shell_manifest.txt", merged, grid, report)
    if args.checkpoint:
        save_checkpoint(Path(args.checkpoint), grid, field)
        print(f"wrote {args.checkpoint}")
    print(f"u2 at ends: {u2t[0]:.6e} / {u2t[-1]:.6e}; u3 at ends: {u3t[0]:.6e} / {u3t[-1]:.6e}")
    return _report_exit(report)


def cmd_solve_two_body(args):
    merged = _resolve(args)
    p = _params(merged)
    grid = build_grid(p, merged["n"])
    lgrid = build_layer_grid(p, merged["n"])
    w, report = solve_two_body(p, grid, _solver_config(merged), layer_grid=lgrid)
    out = Path(args.outdir)
    v2, v3 = w.interface
    _trace_csv(out / "two_body_trace.csv", _header_lines(merged, grid, lgrid),
               grid.x2, v2, v3, ("v2", "v3"))
    _manifest(out / "two_body_manifest.txt", merged, grid, report,
              extra=(f"layer_Ml={lgrid.Ml}", f"layer_dx3={lgrid.dx3:.17g}"))
    if args.checkpoint:
        save_checkpoint(Path(args.checkpoint), grid, w.foundation, lgrid, w.layer)
        print(f"wrote {args.checkpoint}")
    print(f"v2 at ends: {v2[0]:.6e} / {v2[-1]:.6e}; v3 at ends: {v3[0]:.6e} / {v3[-1]:.6e}")
    return _report_exit(report)


def cmd_closed_form(args):
    merged = _resolve(args)
    p = _params(merged)
    grid = build_grid(p, merged["n"])
    w2 = w2_closed(p, grid.x2)
    s = scales(p)
    regime = regime_report(p)
    header = _header_lines(merged, grid)
    header.append(f"alpha={s.alpha:.17g} e2={s.e2:.17g} phi_scale={s.phi_scale:.17g}")
    out = Path(args.outdir)
    lines = [f"# {h}" for h in header]
    lines.append("x2,w2")
    for xv, wv in zip(grid.x2, w2):
        lines.append(f"{xv:.17g},{wv:.17g}")
    _write_lines(out / "closed_form.csv", lines)
    extra = [f"scale[{k}]={v}" for k, v in regime.items()]
    _manifest(out / "closed_form_manifest.txt", merged, grid, None, extra=extra)
    return EXIT_OK


def cmd_sweep(args):
    merged = _resolve(args, need_ratios=False)
    if args.sweep_preset:
        if args.sweep_preset not in SWEEP_PRESETS:
            raise ConfigError(
                f"unknown sweep preset {args.sweep_preset!r}; "
                f"choose from {sorted(SWEEP_PRESETS)}"
            )
        spec = SWEEP_PRESETS[args.sweep_preset]
        param, values = spec["param"], spec["values"]
    else:
        if not args.param:
            raise ConfigError("sweep needs --param or --sweep-preset")
        param = args.param
        if args.values:
            values = [float(v) for v in args.values.split(",")]
        elif args.from_ is not None and args.to is not None and args.steps:
            values = list(np.linspace(args.from_, args.to, args.steps))
        else:
            raise ConfigError("sweep needs --values or --from/--to/--steps")
    curve = sweep(
        param, values, N=merged["n"], cfg=_solver_config(merged),
        workers=merged["workers"],
    )
    header = [
        "shellfound sweep",
        f"param={param} n={merged['n']} method={merged['method']} "
        f"tol={merged['tol']} defaults=dE:8,dnu:1,dh:0.125,db:1",
    ]
    out = Path(args.outdir)
    _write_lines(out / f"sweep_{param}.csv", curve_csv_lines(curve, header))
    bad = [s.delta for s in curve.samples if not s.valid]
    if bad:
        print(f"non-converged samples at {bad}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_compare(args):
    merged = _resolve(args)
    p = _params(merged)
    grid = build_grid(p, merged["n"])
    lgrid = build_layer_grid(p, merged["n"])
    cfg = _solver_config(merged)
    field, rep_s = solve(p, grid, cfg)
    w, rep_t = solve_two_body(p, grid, cfg, layer_grid=lgrid)
    from .analysis import relative_error

    az = relative_error(field, w.foundation, 2)
    rad = relative_error(field, w.foundation, 3)
    s = scales(p)
    out = Path(args.outdir)
    header = _header_lines(merged, grid, lgrid)
    lines = [f"# {h}" for h in header]
    lines.append("azimuthal_error,radial_error,phi_scale")
    lines.append(f"{az:.17g},{rad:.17g},{s.phi_scale:.17g}")
    _write_lines(out / "compare.csv", lines)
    u2t, u3t = field.trace
    v2, v3 = w.interface
    _trace_csv(out / "shell_trace.csv", header, grid.x2, u2t, u3t, ("u2", "u3"))
    _trace_csv(out / "two_body_trace.csv", header, grid.x2, v2, v3, ("v2", "v3"))
    _manifest(out / "compare_manifest.txt", merged, grid, rep_s,
              extra=(f"azimuthal_error={az:.6e}", f"radial_error={rad:.6e}"))
    print(f"azimuthal error {az * 100:.3f}%  radial error {rad * 100:.3f}%")
    if not (rep_s.converged and rep_t.converged):
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_verify(args):
    results = verify_mod.run_suite(level=args.level)
    out = Path(args.outdir)
    lines = []
    for name, passed, detail in results:
        line = f"{'PASS' if passed else 'FAIL'} {name}: {detail}"
        print(line)
        lines.append(line)
    _write_lines(out / "verify_report.txt", lines)
    n_fail = sum(1 for _, ok, _ in results if not ok)
    print(f"{len(results) - n_fail}/{len(results)} checks passed")
    return EXIT_OK


def _add_common(sub):
    sub.add_argument("--preset", help="named parameter preset")
    sub.add_argument("--config", help="flat key=value config file")
    sub.add_argument("--dE", type=float, help="shell/foundation modulus ratio")
    sub.add_argument("--dnu", type=float, help="Poisson ratio ratio")
    sub.add_argument("--dh", type=float, help="thickness/depth ratio")
    sub.add_argument("--db", type=float, help="vertical/horizontal radius ratio")
    sub.add_argument("--tau0", type=float, help="traction at x2 = -pi/2")
    sub.add_argument("--tau-max", dest="tau_max", type=float,
                     help="traction at x2 = +pi/2")
    sub.add_argument("--n", type=int, help="azimuthal grid points")
    sub.add_argument("--tol", type=float, help="solver tolerance")
    sub.add_argument("--max-iter", dest="max_iter", type=int)
    sub.add_argument("--relax", type=float, help="relaxation factor")
    sub.add_argument("--method", choices=("jacobi", "sor", "direct"))
    sub.add_argument("--workers", type=int, help="parallel workers")
    sub.add_argument("--outdir", default=".", help="output directory")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="shellfound",
        description="bonded shell / elastic foundation workbench",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    for name, fn in (
        ("solve-shell", cmd_solve_shell),
        ("solve-two-body", cmd_solve_two_body),
        ("closed-form", cmd_closed_form),
        ("compare", cmd_compare),
    ):
        sub = subs.add_parser(name)
        _add_common(sub)
        if name.startswith("solve"):
            sub.add_argument("--checkpoint", help="write a field checkpoint here")
        sub.set_defaults(fn=fn)

    sub = subs.add_parser("sweep")
    _add_common(sub)
    sub.add_argument("--param", choices=("dE", "dnu", "dh", "db"))
    sub.add_argument("--sweep-preset", help="fig3..fig6 canonical sweeps")
    sub.add_argument("--from", dest="from_", type=float)
    sub.add_argument("--to", type=float)
    sub.add_argument("--steps", type=int)
    sub.add_argument("--values", help="comma-separated sample list")
    sub.set_defaults(fn=cmd_sweep)

    sub = subs.add_parser("verify")
    sub.add_argument("--level", choices=("quick", "full"), default="quick")
    sub.add_argument("--outdir", default=".")
    sub.set_defaults(fn=cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverDivergence as exc:
        print(f"solver divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGED


if __name__ == "__main__":
    sys.exit(main())
