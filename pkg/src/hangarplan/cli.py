"""Command-line interface.

Subcommands: ``select`` (rank camera-lens pairs), ``plan`` (full scenario
plan with report JSON and layout SVG), ``sweep`` (drone boustrophedon time
estimate), ``compare`` (blueprint cost comparison).

Exit codes: 0 success, 2 infeasible problem, 64 usage error, 74 I/O error.
Output is plain text; the PLANNER_NO_COLOR environment variable is honoured
trivially because no ANSI styling is ever emitted.
"""

from __future__ import annotations

import argparse
import sys
from decimal import Decimal
from pathlib import Path

from . import data
from .catalog import (
    DEFAULT_WEIGHTS,
    ObjectiveWeights,
    load_bundled_catalog,
    load_catalog,
    rank_pairs,
    select_best,
)
from .costing import compare_blueprints, comparison_table, format_gbp
from .errors import (
    EmptyGridError,
    InfeasibleError,
    NoFeasiblePairError,
    PlannerError,
    TimeBudgetExceededError,
    UncoverablePointError,
)
from .geometry import PerimeterFormat, parse_perimeter
from .pipeline import (
    load_bundled_outline,
    load_preset,
    plan_scenario,
    render_layout_svg,
    sweep_time,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_USAGE = 64
EXIT_IO = 74

_DEFAULT_PRESET = "defect"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); remap to 64
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="hangarplan",
                     description="Camera selection and ceiling-layout planning for hangar bays")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: _Parser) -> None:
        p.add_argument("--catalog", help="directory holding cameras.csv and lenses.csv "
                                         "(default: bundled snapshot)")
        p.add_argument("--preset", default=None,
                       help=f"bundled preset name or a preset JSON path "
                            f"(default: {_DEFAULT_PRESET}); bundled: "
                            + ", ".join(data.preset_names()))
        p.add_argument("--working-distance", type=float, default=None, metavar="M",
                       help="override the derived working distance, metres")
        p.add_argument("--budget", type=float, default=None, metavar="GBP",
                       help="total per-unit hardware budget cap")
        p.add_argument("--weights", default=None, metavar="A,B,G",
                       help="objective weights alpha,beta,gamma")

    p_select = sub.add_parser("select", help="rank feasible camera-lens pairs")
    common(p_select)
    p_select.add_argument("--gsd-max", type=float, default=None, metavar="MM_PX",
                          help="override the derived GSD bound")
    p_select.add_argument("--cell", default=None, metavar="WxL",
                          help="override the coverage cell, metres, e.g. 3x3")
    p_select.add_argument("--top", type=int, default=10, help="rows to print")

    p_plan = sub.add_parser("plan", help="plan a full scenario")
    common(p_plan)
    p_plan.add_argument("--polygon", default=None,
                        help="perimeter file (.svg or .json; default: bundled outline)")
    p_plan.add_argument("--overlap", type=float, default=None,
                        help="override footprint overlap fraction")
    p_plan.add_argument("--grid-spacing", type=float, default=None, metavar="M",
                        help="override target grid spacing, metres")
    p_plan.add_argument("--bay", default=None, metavar="WxL",
                        help="override bay rectangle, metres, e.g. 40x50")
    p_plan.add_argument("--time-budget", type=float, default=60.0, metavar="S",
                        help="solver time budget, seconds")
    p_plan.add_argument("--out-report", default=None, help="write report JSON here")
    p_plan.add_argument("--out-svg", default=None, help="write layout SVG here")

    p_sweep = sub.add_parser("sweep", help="drone surface-sweep time estimate")
    p_sweep.add_argument("--area", type=float, default=63.0, help="surface area, m^2")
    p_sweep.add_argument("--swath", type=float, default=1.0, help="imaging swath, m")
    p_sweep.add_argument("--speed", type=float, default=0.5, help="flight speed, m/s")
    p_sweep.add_argument("--pass", dest="pass_length", type=float, default=17.0,
                         help="length of one pass, m")
    p_sweep.add_argument("--turn", type=float, default=5.0, help="time per 180 turn, s")

    p_compare = sub.add_parser("compare", help="compare against MoCap/UWB blueprints")
    p_compare.add_argument("--report", default=None,
                           help="plan report JSON to include as the camera-system row")

    return parser


def _load_catalog(args) -> tuple:
    import warnings as _warnings

    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always")
        if args.catalog is None:
            result = load_bundled_catalog()
        else:
            root = Path(args.catalog)
            result = load_catalog((root / "cameras.csv").read_text(encoding="utf-8"),
                                  (root / "lenses.csv").read_text(encoding="utf-8"))
    for warning in caught:
        print(f"catalog warning: {warning.message}", file=sys.stderr)
    return result


def _load_preset(args):
    name = args.preset or _DEFAULT_PRESET
    if name.endswith(".json"):
        import json

        from .pipeline import ScenarioSpec

        return ScenarioSpec.from_json_dict(json.loads(Path(name).read_text(encoding="utf-8")))
    try:
        return load_preset(name)
    except FileNotFoundError:
        raise _UsageError(f"unknown preset {name!r}; bundled: {', '.join(data.preset_names())}")


def _parse_weights(text: str | None) -> ObjectiveWeights:
    if text is None:
        return DEFAULT_WEIGHTS
    try:
        alpha, beta, gamma = (float(v) for v in text.split(","))
    except ValueError:
        raise _UsageError(f"--weights expects three comma-separated numbers, got {text!r}")
    return ObjectiveWeights(alpha_distortion=alpha, beta_shutter_bonus=beta,
                            gamma_fps_penalty=gamma)


def _parse_pair(text: str, flag: str) -> tuple[float, float]:
    try:
        w, l = (float(v) for v in text.lower().split("x"))
    except ValueError:
        raise _UsageError(f"{flag} expects WxL, got {text!r}")
    if w <= 0 or l <= 0:
        raise _UsageError(f"{flag} dimensions must be positive")
    return w, l


def _cmd_select(args) -> int:
    from dataclasses import replace as dc_replace

    cameras, lenses = _load_catalog(args)
    spec = _load_preset(args)
    if args.cell:
        spec = dc_replace(spec, coverage_cell_m=_parse_pair(args.cell, "--cell"))
    if args.budget is not None:
        spec = dc_replace(spec, budget_gbp=args.budget)
    req = spec.requirement(args.working_distance)
    if args.gsd_max is not None:
        from dataclasses import replace as req_replace

        req = req_replace(req, gsd_max_mm_px=args.gsd_max)
    weights = _parse_weights(args.weights)

    from .catalog import feasible_pairs

    pairs = feasible_pairs(cameras, lenses, req)
    if not pairs:
        try:
            select_best(cameras, lenses, req, weights)
        except NoFeasiblePairError as exc:
            total = exc.total_pairs
            print(f"no feasible pair among {total} camera-lens combinations:")
            print(f"  {total - exc.failed_coverage} pairs passed coverage")
            print(f"  {total - exc.failed_resolution} pairs passed resolution")
            print(f"  {total - exc.failed_budget} pairs passed budget")
            print(f"  {total - exc.failed_shutter} pairs passed shutter")
        return EXIT_INFEASIBLE

    ranked = rank_pairs(pairs, weights)
    print(f"requirement: cell {req.target_w_mm / 1000:g}x{req.target_h_mm / 1000:g} m, "
          f"GSD <= {req.gsd_max_mm_px:.4g} mm/px at {req.working_distance_mm / 1000:.4g} m")
    header = f"{'#':>2}  {'camera':<12} {'lens':<12} {'O':>10} {'C_total':>9} " \
             f"{'D':>8} {'GSD_w':>7} {'shutter':<8} {'fps':>6}"
    print(header)
    print("-" * len(header))
    for rank, pair in enumerate(ranked[:args.top], start=1):
        print(f"{rank:>2}  {pair.camera.id:<12} {pair.lens.id:<12} "
              f"{pair.objective:>10.1f} {format_gbp(pair.total_cost_gbp):>9} "
              f"{pair.fov.distortion:>8.1f} {pair.fov.gsd_w_mm_px:>7.3f} "
              f"{pair.camera.shutter.value:<8} {pair.camera.fps:>6.1f}")
    return EXIT_OK


def _cmd_plan(args) -> int:
    from dataclasses import replace as dc_replace

    cameras, lenses = _load_catalog(args)
    spec = _load_preset(args)
    if args.overlap is not None:
        if not 0.0 <= args.overlap < 1.0:
            raise _UsageError("--overlap must be in [0, 1)")
        spec = dc_replace(spec, overlap_fraction=args.overlap)
    if args.grid_spacing is not None:
        if args.grid_spacing <= 0:
            raise _UsageError("--grid-spacing must be positive")
        spec = dc_replace(spec, grid_spacing_m=args.grid_spacing)
    if args.bay is not None:
        spec = dc_replace(spec, bay_m=_parse_pair(args.bay, "--bay"))
    if args.budget is not None:
        spec = dc_replace(spec, budget_gbp=args.budget)

    if args.polygon is None:
        polygon = load_bundled_outline()
    else:
        path = Path(args.polygon)
        fmt = PerimeterFormat.SVG_PATH if path.suffix.lower() == ".svg" \
            else PerimeterFormat.JSON_VERTICES
        polygon = parse_perimeter(path.read_text(encoding="utf-8"), fmt)

    report, _geometry = plan_scenario(
        spec, cameras, lenses, polygon,
        weights=_parse_weights(args.weights),
        working_distance_m=args.working_distance,
        time_budget_s=args.time_budget,
    )

    if args.out_report:
        Path(args.out_report).write_text(report.to_json(), encoding="utf-8")
    if args.out_svg:
        Path(args.out_svg).write_text(render_layout_svg(report, polygon), encoding="utf-8")

    for warning in report.warnings:
        print(f"warning: {warning}")
    print(f"cameras={report.camera_count} cost={format_gbp(report.bom.total_gbp)} "
          f"optimal={str(report.optimal).lower()}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if args.speed <= 0:
        raise _UsageError("--speed must be positive")
    if args.area <= 0 or args.swath <= 0 or args.pass_length <= 0:
        raise _UsageError("--area, --swath and --pass must be positive")
    plan = sweep_time(args.area, args.swath, args.speed, args.pass_length, args.turn)
    print(f"passes={plan.pass_count} pass_length={plan.pass_length_m:g} m "
          f"speed={plan.speed_m_s:g} m/s turn={plan.turn_time_s:g} s")
    print(f"total_time={plan.total_time_s:.1f} s ({plan.total_time_s / 60.0:.1f} min)")
    return EXIT_OK


def _cmd_compare(args) -> int:
    bom = None
    label = "Camera plan"
    if args.report:
        import json

        raw = json.loads(Path(args.report).read_text(encoding="utf-8"))
        from .costing import BillOfMaterials, BomLine

        lines = tuple(
            BomLine(description=line["description"],
                    unit_price_gbp=Decimal(line["unit_price_pence"]) / 100,
                    quantity=line["quantity"],
                    subtotal_gbp=Decimal(line["subtotal_pence"]) / 100)
            for line in raw["bom"]["lines"])
        bom = BillOfMaterials(lines=lines, switch_count=raw["bom"]["switch_count"],
                              total_gbp=Decimal(raw["bom"]["total_pence"]) / 100)
        label = f"Camera plan ({raw['scenario']['name']})"
    print(comparison_table(compare_blueprints(bom, plan_label=label)))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "select":
            return _cmd_select(args)
        if args.command == "plan":
            return _cmd_plan(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "compare":
            return _cmd_compare(args)
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoFeasiblePairError, InfeasibleError, EmptyGridError,
            UncoverablePointError, TimeBudgetExceededError) as exc:
        # a pre-incumbent timeout means no plan exists within the budget;
        # a timeout WITH an incumbent never raises (plan exits 0, flagged)
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except PlannerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
