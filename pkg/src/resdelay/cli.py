"""Command-line front-end.

Each subcommand runs one analysis pipeline end to end and emits
figure-ready CSV curves (``E,value``, 17 significant digits, LF endings)
plus a machine-readable JSON report that validates against
``report_schema.json``.

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .counting import count_resonances, reconstruction_report
from .errors import ParseError, ResdelayError
from .numerics import Curve, find_extrema
from .phasedata import (
    delay_from_table,
    extract_resonance,
    load_bundled_p33,
    parse_phase_table,
)
from .poles import RESONANCE, SearchRegion, classify_pole, find_poles
from .reflect import (
    ExpStep,
    reflection_amplitude,
    reflection_time_delay,
    reflectivity_curve,
    theta_curve,
)
from .scattering import (
    DeltaShell,
    SquareWell,
    delay_curve,
    time_delay_delta_shell_analytic,
    time_delay_square_well_analytic,
    time_delay,
)
from .counting import lorentzian_sum

ENV_OUT = "RESDELAY_OUT"


def _json_default(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _write_curve_csv(curve: Curve, path: Path) -> None:
    lines = ["E,value"]
    for e, v in zip(curve.energies, curve.values):
        lines.append(f"{e:.17g},{v:.17g}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _emit(report: dict, curves: list[tuple[str, Curve]], args) -> None:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    curve_entries = []
    for stem, curve in curves:
        entry = curve.to_dict()
        if args.format == "csv":
            path = out / f"{stem}.csv"
            _write_curve_csv(curve, path)
            entry["file"] = path.name
        curve_entries.append(entry)
    report["curves"] = curve_entries
    (out / f"{report['provenance']['subcommand']}_report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True, default=_json_default) + "\n",
        encoding="utf-8",
        newline="\n",
    )


def _base_report(args, subcommand: str) -> dict:
    config = {
        k: v for k, v in sorted(vars(args).items()) if k not in ("func",)
    }
    return {
        "provenance": {
            "subcommand": subcommand,
            "version": __version__,
            "config": config,
        },
        "poles": [],
        "count": None,
        "reconstruction": None,
        "curves": [],
    }


def _classified_poles(model, region, curve, tol):
    poles = find_poles(model, region, tol=tol)
    return [classify_pole(p, curve) for p in poles]


def _refine_extremum(fn, x0, step, kind="min", n=64):
    """Fine parabolic pass around a coarse extremum."""
    grid = np.linspace(x0 - 2 * step, x0 + 2 * step, n)
    vals = np.array([fn(x) for x in grid])
    i = int(np.argmin(vals) if kind == "min" else np.argmax(vals))
    i = min(max(i, 1), n - 2)
    y0, y1, y2 = vals[i - 1], vals[i], vals[i + 1]
    den = y0 - 2 * y1 + y2
    if den == 0:
        return float(grid[i])
    h = grid[1] - grid[0]
    return float(grid[i] + 0.5 * (y0 - y2) / den * h)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def run_sqwell(args) -> dict:
    model = SquareWell(V0=args.V0, a=args.a, l=args.l)
    analytic = model.l == 0
    display = delay_curve(
        model, args.emin, args.emax, args.grid, analytic=analytic,
        label=f"time_delay_l{model.l}",
    )
    # classification needs coverage out to the last pole of interest
    pole_re_hi = max(args.pole_emax, args.emax)
    cls_curve = delay_curve(
        model, args.emin, pole_re_hi, max(args.grid, 900), analytic=analytic,
        label="classification",
    )
    region = SearchRegion(
        (0.0, pole_re_hi), (-args.pole_gmax / 2.0, 0.0), n_re=120, n_im=10
    )
    poles = _classified_poles(model, region, cls_curve, args.tol)
    resonances = [p for p in poles if p.classification == RESONANCE][:15]

    report = _base_report(args, "sqwell")
    report["poles"] = [p.to_dict() for p in poles]
    if analytic:
        delay_fn = lambda E: time_delay_square_well_analytic(model, E)
    else:
        delay_fn = lambda E: time_delay(model, E)
    count = count_resonances(delay_fn, args.emin, args.emax, tol=args.tol)
    report["count"] = count.to_dict()
    curves = [(f"fig1a_l{model.l}", display)]
    if resonances:
        recon = Curve(
            display.energies,
            np.array([lorentzian_sum(resonances, E) for E in display.energies]),
            label="lorentzian_sum",
        )
        report["reconstruction"] = reconstruction_report(display, resonances).to_dict()
        curves.append((f"fig1a_l{model.l}_lorentzian", recon))
        # first peak separated out for clarity
        first = resonances[0]
        lo = max(args.emin, first.position - 3 * first.gamma)
        hi = min(args.emax, first.position + 3 * first.gamma)
        if hi > lo:
            curves.append(
                (f"fig1b_l{model.l}", delay_curve(model, lo, hi, 200,
                                                  analytic=analytic,
                                                  label="first_peak"))
            )
    report["peak_count"] = sum(
        1 for p in find_extrema(display) if p.kind == "max"
    )
    _emit(report, curves, args)
    return report


def run_deltashell(args) -> dict:
    model = DeltaShell(V0=args.V0, a=args.a)
    display = delay_curve(model, args.emin, args.emax, args.grid,
                          label="time_delay")
    cls_curve = delay_curve(model, args.emin, args.emax, max(args.grid, 1200),
                            label="classification")
    region = SearchRegion(
        (0.0, args.emax), (-args.pole_gmax / 2.0, 0.0), n_re=50, n_im=8
    )
    poles = _classified_poles(model, region, cls_curve, args.tol)
    resonances = [p for p in poles if p.classification == RESONANCE]

    report = _base_report(args, "deltashell")
    report["poles"] = [p.to_dict() for p in poles]
    count = count_resonances(
        lambda E: time_delay_delta_shell_analytic(model, E),
        args.emin, args.emax, tol=args.tol,
    )
    report["count"] = count.to_dict()
    curves = [("fig2", display)]
    if resonances:
        recon = Curve(
            display.energies,
            np.array([lorentzian_sum(resonances, E) for E in display.energies]),
            label="lorentzian_sum",
        )
        report["reconstruction"] = reconstruction_report(display, resonances).to_dict()
        curves.append(("fig2_lorentzian", recon))
    report["peak_count"] = sum(1 for p in find_extrema(display) if p.kind == "max")
    _emit(report, curves, args)
    return report


def run_step(args) -> dict:
    step = ExpStep(V1=args.V1, V2=args.V2, a=args.a)
    thr = step.threshold
    lo = max(args.emin, thr + 2e-6)
    if not args.emax > lo:
        raise ValueError("emax must exceed the barrier top")
    refl = reflectivity_curve(step, lo, args.emax, max(args.grid, 2000))
    theta = theta_curve(step, lo, args.emax, args.grid)
    dly = Curve(
        refl.energies,
        np.array([reflection_time_delay(step, E) for E in refl.energies]),
        label="reflection_time_delay",
    )
    # dip in R(E): coarse minimum, then a fine parabolic pass
    dips = [p for p in find_extrema(refl) if p.kind == "min"]
    report = _base_report(args, "step")
    if dips:
        coarse = min(dips, key=lambda p: p.height)
        grid_step = refl.grid_step
        dip_e = _refine_extremum(
            lambda E: abs(reflection_amplitude(step, E)) ** 2,
            coarse.position, grid_step, kind="min",
        )
        delay_ext = _refine_extremum(
            lambda E: reflection_time_delay(step, E),
            coarse.position, grid_step, kind="min",
        )
        report["dip"] = {"E": dip_e, "delay_extremum_E": delay_ext}
    count = count_resonances(
        lambda E: reflection_time_delay(step, E), lo, args.emax, tol=args.tol
    )
    report["count"] = count.to_dict()
    _emit(report, [("fig3_reflectivity", refl), ("fig3_theta", theta),
                   ("fig3_delay", dly)], args)
    return report


def run_data(args) -> dict:
    if args.input is None:
        table = load_bundled_p33()
    else:
        table = parse_phase_table(
            Path(args.input).read_text("utf-8"), source=str(args.input)
        )
    curve = delay_from_table(table, smooth_window=args.smooth)
    w_lo = args.wlo if args.wlo is not None else float(table.W[0])
    w_hi = args.whi if args.whi is not None else float(table.W[-1])
    res = extract_resonance(curve, w_lo, w_hi)
    report = _base_report(args, "data")
    report["resonance"] = res.to_dict()
    report["count"] = {
        "n_R": res.n_R,
        "N": math.floor(res.n_R),
        "Delta": res.n_R - math.floor(res.n_R),
        "E_range": [w_lo, w_hi],
        "quadrature_tol": 0.0,
        "evaluations": len(curve),
        "near_integer": False,
    }
    _emit(report, [("fig4", curve)], args)
    return report


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resdelay",
        description="Resonance counting from scattering time delay",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--out", default=os.environ.get(ENV_OUT, "."),
                       help="output directory (env RESDELAY_OUT)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--grid", type=int, default=600)

    p = sub.add_parser("sqwell", help="square-well time delay and poles")
    p.add_argument("--V0", type=float, default=5.0,
                   help="well depth (positive attractive)")
    p.add_argument("--a", type=float, default=10.0)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--emin", type=float, default=1e-6)
    p.add_argument("--emax", type=float, default=10.0)
    p.add_argument("--pole-emax", type=float, default=50.0,
                   help="upper Re(E) bound of the pole search")
    p.add_argument("--pole-gmax", type=float, default=12.0,
                   help="largest width admitted in the pole search")
    common(p)
    p.set_defaults(func=run_sqwell)

    p = sub.add_parser("deltashell", help="delta-shell time delay and poles")
    p.add_argument("--V0", type=float, default=10.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--emin", type=float, default=1e-6)
    p.add_argument("--emax", type=float, default=170.0)
    p.add_argument("--pole-gmax", type=float, default=30.0)
    common(p)
    p.set_defaults(func=run_deltashell)

    p = sub.add_parser("step", help="exponential-step reflectometry")
    p.add_argument("--V1", type=float, default=1.0)
    p.add_argument("--V2", type=float, default=1.0)
    p.add_argument("--a", type=float, default=1.31)
    p.add_argument("--emin", type=float, default=2.0)
    p.add_argument("--emax", type=float, default=10.0)
    common(p)
    p.set_defaults(func=run_step)

    p = sub.add_parser("data", help="phase-shift table analysis")
    p.add_argument("--input", default=None,
                   help="phase-shift CSV (default: bundled P33 table)")
    p.add_argument("--wlo", type=float, default=None)
    p.add_argument("--whi", type=float, default=None)
    p.add_argument("--smooth", type=int, default=1,
                   help="odd moving-average window (1 = no smoothing)")
    common(p)
    p.set_defaults(func=run_data)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ValueError, ParseError) as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 2
    except ResdelayError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
