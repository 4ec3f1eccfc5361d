"""Command-line interface.

Four subcommands cover the package surface: ``decompose`` compiles a
coordinate transform into the supported gate families, ``verify`` runs the
named identity-check suites, ``simulate`` produces readout distributions
and post-states for the measurement presets, and ``scenario`` runs the
packaged studies.

Reports are JSON (stdout, or ``<out>.json`` with ``--out``); commands with
tabular results also write ``<out>.csv`` (RFC 4180) and render a matching
``<out>.png`` figure unless ``--no-plot`` is given. Exit codes: 0 success,
1 usage or validation error, 2 target not decomposable, 3 numerical guard
tripped. ``QMEASURE_GRID_POINTS`` overrides the default grid size.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__, cvgates, scenarios, verify
from .cvgates import (
    CoordTransform,
    NotDecomposableError,
    UnsupportedRegimeError,
    sequence_to_json,
)
from .gridsim import (
    GaussianSpec,
    Grid1D,
    GridLeakageError,
    GridSupportError,
    apply_transform,
    choose_grids,
    outcome_distribution,
    postmeasurement_state,
    sample_gaussian,
)
from .fockspace import TruncationError

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_DECOMPOSABLE = 2
EXIT_NUMERICAL_GUARD = 3


class CliError(Exception):
    """Validation failure that should surface as exit code 1."""


class _Parser(argparse.ArgumentParser):
    # Usage problems are exit code 1, not argparse's default 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _round12(x: float) -> float:
    """12 significant digits: stable in reports, lossless at tolerance."""
    return float(f"{x:.12g}")


def _parse_gaussian(text: str, flag: str) -> GaussianSpec:
    parts = text.split(",")
    if len(parts) not in (2, 3):
        raise CliError(f"{flag} expects 'center,width[,momentum]', got {text!r}")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise CliError(f"{flag} has a non-numeric component: {text!r}") from None
    try:
        return GaussianSpec(values[0], values[1], values[2] if len(values) == 3 else 0.0)
    except ValueError as exc:
        raise CliError(f"{flag}: {exc}") from None


def _parse_abcd(text: str) -> CoordTransform:
    parts = text.split(",")
    if len(parts) != 4:
        raise CliError(f"--abcd expects four comma-separated numbers, got {text!r}")
    try:
        a, b, c, d = (float(p) for p in parts)
    except ValueError:
        raise CliError(f"--abcd has a non-numeric component: {text!r}") from None
    try:
        return CoordTransform(a, b, c, d)
    except ValueError as exc:
        raise CliError(f"--abcd: {exc}") from None


def _resolve_target(args) -> tuple[CoordTransform, dict]:
    if args.abcd is not None and args.preset is not None:
        raise CliError("give either --preset or --abcd, not both")
    if args.abcd is not None:
        target = _parse_abcd(args.abcd)
        return target, {"abcd": list(target.as_tuple())}
    if args.preset is None:
        raise CliError("one of --preset or --abcd is required")
    lam = args.lam
    try:
        if args.preset == "vnm":
            target = cvgates.vnm_transform(lam)
        elif args.preset == "csm":
            target = cvgates.csm_transform(lam)
        else:
            target = cvgates.ssm_transform(lam, args.p)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    echo = {"preset": args.preset, "lambda": lam}
    if args.preset == "ssm":
        echo["p"] = args.p
    echo["abcd"] = list(target.as_tuple())
    return target, echo


def _base_points(args) -> int:
    if getattr(args, "grid_points", None):
        return args.grid_points
    env = os.environ.get("QMEASURE_GRID_POINTS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise CliError(f"QMEASURE_GRID_POINTS is not an integer: {env!r}") from None
    return 1024


def _make_report(command: str, parameters: dict, results: dict, residuals: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "command": command,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "parameters": parameters,
        "results": results,
        "residuals": residuals,
    }


def _emit(report: dict, args, csv_rows=None, csv_header=None, figure=None) -> list[str]:
    """Write the report and its side files; returns the written paths."""
    written = []
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        json_path = args.out + ".json"
        with open(json_path, "w") as fh:
            fh.write(text + "\n")
        written.append(json_path)
        if csv_rows is not None:
            csv_path = args.out + ".csv"
            with open(csv_path, "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\r\n")
                writer.writerow(csv_header)
                writer.writerows(csv_rows)
            written.append(csv_path)
        if figure is not None and not args.no_plot:
            written.append(figure(args.out + ".png"))
        for path in written:
            print(f"wrote {path}", file=sys.stderr)
    else:
        print(text)
    return written


# ---------------------------------------------------------------------------
# decompose
# ---------------------------------------------------------------------------

_FAMILIES = ("von-neumann", "two-mode", "single-mode", "hamiltonian")


def _decompose_family(family: str, target: CoordTransform) -> tuple[dict, float | None]:
    if family == "von-neumann":
        d = cvgates.decompose_von_neumann(target)
        seq = d.sequence()
        resid = float(np.abs(cvgates.compose(seq).matrix - target.matrix).max())
        return {
            "p": d.parity,
            "alpha": _round12(d.alpha),
            "beta": _round12(d.beta),
            "gamma": _round12(d.gamma),
            "sequence": sequence_to_json(seq),
        }, resid
    if family == "two-mode":
        d = cvgates.decompose_two_mode(target)
        seq = d.sequence()
        resid = float(np.abs(cvgates.compose(seq).matrix - target.matrix).max())
        return {
            "r": _round12(d.r),
            "theta1": _round12(d.theta1),
            "theta2": _round12(d.theta2),
            "p": d.parity,
            "sequence": sequence_to_json(seq),
        }, resid
    if family == "single-mode":
        d = cvgates.decompose_single_mode(target)
        seq = d.sequence()
        resid = float(np.abs(cvgates.compose(seq).matrix - target.matrix).max())
        return {
            "r": _round12(d.r),
            "theta1": _round12(d.theta1),
            "theta2": _round12(d.theta2),
            "p": d.parity,
            "sequence": sequence_to_json(seq),
        }, resid
    if family == "hamiltonian":
        params = cvgates.hamiltonian_params(target)
        resid = float(np.abs(params.transform().matrix - target.matrix).max())
        return {
            "u": _round12(params.u),
            "v": _round12(params.v),
            "w": _round12(params.w),
            "rotation_rate": _round12(params.angle),
        }, resid
    raise ValueError(f"unknown family {family!r}")


def cmd_decompose(args) -> int:
    target, echo = _resolve_target(args)
    if not target.is_circuit_unitary(1e-9):
        raise CliError(f"decomposition needs |ad - bc| = 1, got det = {target.det!r}")
    families = list(_FAMILIES) if args.family == "all" else [args.family]
    results, residuals = {}, {}
    failed = False
    for family in families:
        try:
            results[family], resid = _decompose_family(family, target)
            residuals[family] = resid
        except (NotDecomposableError, UnsupportedRegimeError, ValueError) as exc:
            results[family] = {"error": str(exc)}
            residuals[family] = None
            failed = True
    echo["family"] = args.family
    report = _make_report("decompose", echo, results, residuals)
    _emit(report, args)
    # 'all' is best effort: families outside their domain are reported inline
    if failed and args.family != "all":
        return EXIT_NOT_DECOMPOSABLE
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    suites = verify.run_suites(names)
    results, residuals = {}, {}
    all_passed = True
    for name, checks in suites.items():
        results[name] = {c.name: c.as_dict() for c in checks}
        residuals[name] = {c.name: c.residual for c in checks}
        for c in checks:
            all_passed &= c.passed
            status = "ok" if c.passed else "FAIL"
            print(
                f"{name}/{c.name}: residual {c.residual:.3e} "
                f"(tolerance {c.tolerance:g}) {status}",
                file=sys.stderr,
            )
    report = _make_report("verify", {"suite": args.suite}, results, residuals)
    _emit(report, args)
    return EXIT_OK if all_passed else EXIT_NUMERICAL_GUARD


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _closed_form_density(args_preset, target, sys_spec, probe_spec, lam, positions):
    """Reference readout density, evaluated without the grid engine.

    The scaled-input form is exact for the contractive and swapping
    presets; everything else uses direct quadrature of the substituted
    Gaussian densities. The quadrature window is the narrower of the two
    factor-support windows in x, with the step keyed to the narrowest
    feature either factor projects onto the x axis.
    """
    if args_preset in ("csm", "ssm"):
        return sys_spec.density(positions / lam) / lam
    a, b, c, d = target.as_tuple()
    det = abs(target.det)
    y_max = float(np.abs(positions).max())
    r_sys = abs(sys_spec.center) + 10 * sys_spec.width
    r_probe = abs(probe_spec.center) + 10 * probe_spec.width
    windows, features = [], []
    for coef_x, coef_y, reach, width in (
        (a, b, r_sys, sys_spec.width),
        (c, d, r_probe, probe_spec.width),
    ):
        if abs(coef_x) > 1e-12:
            windows.append((reach + abs(coef_y) * y_max) / abs(coef_x))
            features.append(width / abs(coef_x))
    span = min(windows)
    n = int(np.clip(12 * span / min(features), 1001, 200001))
    xq = np.linspace(-span, span, n)
    hq = xq[1] - xq[0]
    out = np.empty_like(positions)
    for i, y in enumerate(positions):
        out[i] = np.sum(sys_spec.density(a * xq + b * y) * probe_spec.density(c * xq + d * y)) * hq * det
    return out


def cmd_simulate(args) -> int:
    target, echo = _resolve_target(args)
    sys_spec = _parse_gaussian(args.system, "--system")
    if args.probe_width is not None:
        if args.probe_width <= 0:
            raise CliError("--probe-width must be positive")
        probe_spec = GaussianSpec(0.0, args.probe_width)
    else:
        probe_spec = _parse_gaussian(args.probe, "--probe")
    base = _base_points(args)
    if args.grid_extent is not None:
        grid = Grid1D.centered(args.grid_extent, base)
        grid_x = grid_y = grid
    else:
        grid_x, grid_y = choose_grids(target, sys_spec, probe_spec, base_points=base)
    psi = sample_gaussian(sys_spec, grid_x)
    phi = sample_gaussian(probe_spec, grid_y)
    joint = apply_transform(target, psi, phi)
    dist = outcome_distribution(joint)

    lam = echo.get("lambda", 1.0)
    reference = _closed_form_density(
        args.preset, target, sys_spec, probe_spec, lam, dist.positions
    )
    l1 = dist.l1_distance(reference)

    modal = float(dist.positions[int(np.argmax(dist.density))])
    post = postmeasurement_state(joint, modal)
    post_info = {
        "outcome": _round12(modal),
        "center": _round12(post.mean_position()),
        "width": _round12(float(np.sqrt(post.position_variance()))),
    }
    residuals = {
        "l1_distance_to_closed_form": l1,
        "mass_deficit": joint.mass_deficit,
        "distribution_norm_error": abs(dist.integral() - 1.0),
    }
    if args.preset is not None:
        # Raw readout vs the rescaled input density: exact for the csm and
        # ssm presets, a probe-width noise measure for vnm.
        scaled_born = sys_spec.density(dist.positions / lam) / lam
        residuals["l1_distance_to_scaled_born"] = dist.l1_distance(scaled_born)
    if args.preset == "csm":
        closed = np.sqrt(lam) * probe_spec.amplitude(modal - lam * grid_x.points)
        residuals["post_state_l2_to_closed_form"] = post.l2_distance(
            type(post)(grid_x, closed), align_phase=True
        )
    elif args.preset == "ssm":
        sign = 1.0 if echo.get("p", 0) == 1 else -1.0
        closed = np.sqrt(lam) * probe_spec.amplitude(sign * lam * grid_x.points)
        residuals["post_state_l2_to_closed_form"] = post.l2_distance(
            type(post)(grid_x, closed), align_phase=True
        )

    echo.update(
        {
            "system": [sys_spec.center, sys_spec.width, sys_spec.momentum],
            "probe": [probe_spec.center, probe_spec.width, probe_spec.momentum],
            "grid_x": [grid_x.x_min, grid_x.x_max, grid_x.n_points],
            "grid_y": [grid_y.x_min, grid_y.x_max, grid_y.n_points],
        }
    )
    results = {
        "post_state": post_info,
        "offgrid_points": joint.offgrid_points,
        "distribution_points": len(dist.positions),
    }
    report = _make_report("simulate", echo, results, residuals)

    rows = list(zip(dist.positions.tolist(), dist.density.tolist(), reference.tolist()))

    def figure(path):
        from .plotting import save_distribution_figure

        label = args.preset or "custom"
        return save_distribution_figure(
            path, dist, reference, title=f"{label} readout distribution"
        )

    _emit(
        report,
        args,
        csv_rows=rows,
        csv_header=["coordinate", "density", "reference_density"],
        figure=figure,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# scenario
# ---------------------------------------------------------------------------

def cmd_scenario_two_peak(args) -> int:
    report_obj = scenarios.two_peak_scenario(
        lam=args.lam,
        separation=args.sep,
        probe_width=args.probe_width,
        peak_width=args.peak_width,
        base_points=_base_points(args),
    )
    results = report_obj.summary()
    residuals = {
        "scaled_norm_error": abs(report_obj.scaled.distribution.integral() - 1.0),
        "unscaled_norm_error": abs(report_obj.unscaled.distribution.integral() - 1.0),
    }
    parameters = {
        "lambda": args.lam,
        "separation": args.sep,
        "probe_width": args.probe_width,
        "peak_width": report_obj.peak_width,
    }
    report = _make_report("scenario", {"name": "two-peak", **parameters}, results, residuals)

    rows = []
    for series, readout in (("scaled", report_obj.scaled), ("unscaled", report_obj.unscaled)):
        dist = readout.distribution
        rows += [
            (series, float(p), float(d))
            for p, d in zip(dist.positions, dist.density)
        ]

    def figure(path):
        from .plotting import save_two_peak_figure

        return save_two_peak_figure(path, report_obj)

    _emit(
        report,
        args,
        csv_rows=rows,
        csv_header=["series", "coordinate", "density"],
        figure=figure,
    )
    return EXIT_OK


def cmd_scenario_repeated(args) -> int:
    if args.seed is None:
        raise CliError("scenario 'repeated' requires --seed for reproducible sampling")
    probe_spec = _parse_gaussian(args.probe, "--probe")
    grid = Grid1D.default(_base_points(args))
    probe = sample_gaussian(probe_spec, grid)
    report_obj = scenarios.repeated_measurement_scenario(
        scheme=args.scheme,
        rounds=args.rounds,
        probe=probe,
        seed=args.seed,
        lam=args.lam,
        parity=args.p,
    )
    results = report_obj.summary()
    residuals = {"post_center_spread": report_obj.center_spread}
    parameters = {
        "name": "repeated",
        "scheme": args.scheme,
        "rounds": args.rounds,
        "seed": args.seed,
        "lambda": args.lam,
        "p": args.p,
        "probe": [probe_spec.center, probe_spec.width, probe_spec.momentum],
    }
    report = _make_report("scenario", parameters, results, residuals)

    rows = [
        (i + 1, r.outcome, r.post_center, r.post_width)
        for i, r in enumerate(report_obj.rounds)
    ]

    def figure(path):
        from .plotting import save_repeated_figure

        return save_repeated_figure(path, report_obj)

    _emit(
        report,
        args,
        csv_rows=rows,
        csv_header=["round", "outcome", "post_center", "post_width"],
        figure=figure,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_target_options(p):
    p.add_argument("--preset", choices=("vnm", "csm", "ssm"), help="measurement circuit preset")
    p.add_argument(
        "--lambda",
        dest="lam",
        type=float,
        default=1.0,
        help="scaling parameter of the preset (default 1)",
    )
    p.add_argument("--p", type=int, choices=(0, 1), default=0, help="parity flag (ssm only)")
    p.add_argument("--abcd", help="explicit transform entries 'a,b,c,d'")


def _add_output_options(p):
    p.add_argument("--out", help="output path prefix (<out>.json/.csv/.png)")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")


def build_parser() -> _Parser:
    parser = _Parser(prog="qmeasure", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"qmeasure {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose", help="compile a transform into gate families")
    _add_target_options(p)
    p.add_argument(
        "--family",
        choices=_FAMILIES + ("all",),
        default="all",
        help="gate family to solve for (default all)",
    )
    _add_output_options(p)
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("verify", help="run identity-check suites")
    p.add_argument(
        "--suite",
        choices=tuple(verify.SUITES) + ("all",),
        default="all",
        help="which suite to run (default all)",
    )
    _add_output_options(p)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("simulate", help="simulate a readout distribution")
    _add_target_options(p)
    p.add_argument("--system", default="0,1", help="system Gaussian 'center,width[,momentum]'")
    p.add_argument("--probe", default="0,0.5", help="probe Gaussian 'center,width[,momentum]'")
    p.add_argument(
        "--probe-width",
        type=float,
        help="shorthand for a zero-centered probe of this width",
    )
    p.add_argument("--grid-points", type=int, help="base grid size (env QMEASURE_GRID_POINTS)")
    p.add_argument("--grid-extent", type=float, help="fix both grids to [-extent, extent]")
    _add_output_options(p)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("scenario", help="run a packaged study")
    scen = p.add_subparsers(dest="scenario_name", required=True, parser_class=_Parser)

    tp = scen.add_parser("two-peak", help="two-peak resolvability study")
    tp.add_argument("--lambda", dest="lam", type=float, required=True)
    tp.add_argument("--sep", type=float, required=True, help="peak separation")
    tp.add_argument("--probe-width", type=float, required=True)
    tp.add_argument("--peak-width", type=float, help="peak width (default sep/10)")
    tp.add_argument("--grid-points", type=int)
    tp.add_argument("--seed", type=int, help="unused; accepted for interface symmetry")
    _add_output_options(tp)
    tp.set_defaults(handler=cmd_scenario_two_peak)

    rp = scen.add_parser("repeated", help="repeated-measurement study")
    rp.add_argument("--scheme", choices=("csm", "ssm"), required=True)
    rp.add_argument("--rounds", type=int, required=True)
    rp.add_argument("--seed", type=int, help="sampling seed (required)")
    rp.add_argument("--lambda", dest="lam", type=float, default=1.0)
    rp.add_argument("--p", type=int, choices=(0, 1), default=0)
    rp.add_argument("--probe", default="0,0.5")
    rp.add_argument("--grid-points", type=int)
    _add_output_options(rp)
    rp.set_defaults(handler=cmd_scenario_repeated)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except CliError as exc:
        print(f"qmeasure: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"qmeasure: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotDecomposableError, UnsupportedRegimeError) as exc:
        print(f"qmeasure: not decomposable: {exc}", file=sys.stderr)
        return EXIT_NOT_DECOMPOSABLE
    except (GridLeakageError, GridSupportError, TruncationError) as exc:
        print(f"qmeasure: numerical guard: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_GUARD


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
