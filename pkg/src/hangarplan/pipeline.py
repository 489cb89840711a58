"""End-to-end scenario planning.

A scenario preset fixes the target object, its pixel budget, the bay
geometry and the coverage region; planning then runs the two optimisation
layers in sequence: camera-lens selection against the derived GSD bound and
coverage cell, followed by exact set-cover placement of the selected
camera's ground footprint over the discretised region.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from enum import Enum

from . import data
from .catalog import (
    DEFAULT_WEIGHTS,
    CameraSpec,
    LensSpec,
    ObjectiveWeights,
    SelectionRequirement,
    select_best,
)
from .costing import BillOfMaterials, bill_of_materials
from .errors import NonPositiveInputError, PlannerError
from .geometry import (
    BufferedRegion,
    Polygon,
    Rect,
    Side,
    TargetGrid,
    buffer_polygon,
    discretize,
    scale_to_length,
)
from .optics import Footprint, distance_per_frame, ground_footprint
from .placement import (
    CoverageInstance,
    PlacementSolution,
    build_coverage_matrix,
    candidate_lattice,
    solve_set_cover_exact,
    verify_solution,
)

REPORT_SCHEMA_VERSION = 1

# standard single-bay footprint used when an external scenario names no bay
DEFAULT_BAY_M = (40.0, 50.0)


class Mode(Enum):
    DEFECT_DETECTION = "defect_detection"
    DRONE_LOCALISATION = "drone_localisation"
    GROUND_ROBOT_LOCALISATION = "ground_robot_localisation"
    VEHICLE_MONITORING = "vehicle_monitoring"
    HUMAN_MONITORING = "human_monitoring"


# localisation tracks moving robots, where a global shutter is treated as a
# hard requirement rather than a ranking bonus
_GLOBAL_SHUTTER_MODES = {Mode.DRONE_LOCALISATION, Mode.GROUND_ROBOT_LOCALISATION}


@dataclass(frozen=True)
class ScenarioSpec:
    """Everything a planning run needs beyond the catalog and the outline."""

    name: str
    mode: Mode
    target_w_mm: float
    target_h_mm: float
    target_px: int
    coverage_cell_m: tuple[float, float]
    ceiling_height_m: float
    target_height_band_m: tuple[float, float]
    velocity_band_m_s: tuple[float, float] | None
    overlap_fraction: float
    envelope_offset_m: float
    coverage_side: Side
    grid_spacing_m: float
    bay_m: tuple[float, float] | None
    aircraft_length_m: float
    budget_gbp: float | None = None

    def __post_init__(self):
        low, high = self.target_height_band_m
        if low > high:
            raise ValueError("target_height_band_m low must not exceed high")
        if self.ceiling_height_m - high <= 0:
            raise ValueError("ceiling must sit above the target height band")
        if self.target_px <= 0 or self.target_w_mm <= 0 or self.target_h_mm <= 0:
            raise ValueError("target dimensions and pixel budget must be positive")

    @property
    def gsd_max_mm_px(self) -> float:
        """Resolution bound: the smaller target dimension must still span the
        required pixel count."""
        return min(self.target_w_mm, self.target_h_mm) / self.target_px

    @property
    def working_distance_m(self) -> float:
        """Ceiling height minus the midpoint of the target height band."""
        low, high = self.target_height_band_m
        return self.ceiling_height_m - (low + high) / 2.0

    def requirement(self, working_distance_m: float | None = None) -> SelectionRequirement:
        from decimal import Decimal

        d = self.working_distance_m if working_distance_m is None else working_distance_m
        return SelectionRequirement(
            target_w_mm=self.coverage_cell_m[0] * 1000.0,
            target_h_mm=self.coverage_cell_m[1] * 1000.0,
            gsd_max_mm_px=self.gsd_max_mm_px,
            working_distance_mm=d * 1000.0,
            budget_gbp=None if self.budget_gbp is None else Decimal(str(self.budget_gbp)),
            require_global_shutter=self.mode in _GLOBAL_SHUTTER_MODES,
        )

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "mode": self.mode.value,
            "target_w_mm": self.target_w_mm,
            "target_h_mm": self.target_h_mm,
            "target_px": self.target_px,
            "coverage_cell_m": list(self.coverage_cell_m),
            "ceiling_height_m": self.ceiling_height_m,
            "target_height_band_m": list(self.target_height_band_m),
            "velocity_band_m_s": None if self.velocity_band_m_s is None
                                 else list(self.velocity_band_m_s),
            "overlap_fraction": self.overlap_fraction,
            "envelope_offset_m": self.envelope_offset_m,
            "coverage_side": self.coverage_side.value,
            "grid_spacing_m": self.grid_spacing_m,
            "bay_m": None if self.bay_m is None else list(self.bay_m),
            "aircraft_length_m": self.aircraft_length_m,
            "budget_gbp": self.budget_gbp,
        }

    @classmethod
    def from_json_dict(cls, raw: dict) -> "ScenarioSpec":
        return cls(
            name=raw["name"],
            mode=Mode(raw["mode"]),
            target_w_mm=float(raw["target_w_mm"]),
            target_h_mm=float(raw["target_h_mm"]),
            target_px=int(raw["target_px"]),
            coverage_cell_m=tuple(raw["coverage_cell_m"]),
            ceiling_height_m=float(raw["ceiling_height_m"]),
            target_height_band_m=tuple(raw["target_height_band_m"]),
            velocity_band_m_s=None if raw.get("velocity_band_m_s") is None
                              else tuple(raw["velocity_band_m_s"]),
            overlap_fraction=float(raw["overlap_fraction"]),
            envelope_offset_m=float(raw["envelope_offset_m"]),
            coverage_side=Side(raw["coverage_side"]),
            grid_spacing_m=float(raw["grid_spacing_m"]),
            bay_m=None if raw.get("bay_m") is None else tuple(raw["bay_m"]),
            aircraft_length_m=float(raw["aircraft_length_m"]),
            budget_gbp=raw.get("budget_gbp"),
        )


def load_preset(name: str) -> ScenarioSpec:
    """Load a bundled scenario preset by name (see ``data.preset_names()``)."""
    return ScenarioSpec.from_json_dict(json.loads(data.read_preset(name)))


@dataclass(frozen=True)
class MotionCheck:
    velocity_m_s: float
    fps: float
    distance_per_frame_m: float
    threshold_m: float

    @property
    def exceeded(self) -> bool:
        return self.distance_per_frame_m > self.threshold_m


@dataclass(frozen=True)
class PlanReport:
    """Deterministic, serialisable summary of one planning run."""

    scenario: ScenarioSpec
    camera: CameraSpec
    lens: LensSpec
    pair_objective: float
    working_distance_m: float
    gsd_w_mm_px: float
    gsd_h_mm_px: float
    footprint: Footprint
    grid_points: int
    candidate_count: int
    camera_count: int
    positions: tuple[tuple[float, float], ...]
    optimal: bool
    solver_nodes: int
    motion: MotionCheck | None
    bom: BillOfMaterials
    warnings: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "scenario": self.scenario.to_json_dict(),
            "selection": {
                "camera_id": self.camera.id,
                "lens_id": self.lens.id,
                "camera_price_pence": int(self.camera.price_gbp * 100),
                "lens_price_pence": int(self.lens.price_gbp * 100),
                "objective": round(self.pair_objective, 6),
                "shutter": self.camera.shutter.value,
                "fps": self.camera.fps,
            },
            "working_distance_m": round(self.working_distance_m, 9),
            "gsd_mm_px": {"w": round(self.gsd_w_mm_px, 9), "h": round(self.gsd_h_mm_px, 9)},
            "footprint_m": {"w": round(self.footprint.width_m, 9),
                            "l": round(self.footprint.length_m, 9)},
            "grid_points": self.grid_points,
            "candidates": self.candidate_count,
            "solution": {
                "cameras": self.camera_count,
                "optimal": self.optimal,
                "nodes": self.solver_nodes,
                "positions": [[round(x, 9), round(y, 9)] for x, y in self.positions],
            },
            "motion": None if self.motion is None else {
                "velocity_m_s": self.motion.velocity_m_s,
                "fps": self.motion.fps,
                "distance_per_frame_m": round(self.motion.distance_per_frame_m, 9),
                "threshold_m": round(self.motion.threshold_m, 9),
                "exceeded": self.motion.exceeded,
            },
            "bom": self.bom.to_json_dict(),
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class PlanGeometry:
    """Intermediate geometry of a plan, recomputable from (scenario, polygon)."""

    outline: Polygon
    region: BufferedRegion
    grid: TargetGrid
    instance: CoverageInstance
    solution: PlacementSolution


def _scenario_geometry(spec: ScenarioSpec, polygon: Polygon,
                       footprint: Footprint) -> tuple[Polygon, BufferedRegion, TargetGrid]:
    outline = scale_to_length(polygon, spec.aircraft_length_m)
    region = buffer_polygon(outline, spec.envelope_offset_m)
    bay = None
    if spec.coverage_side is Side.EXTERNAL:
        bay_w, bay_l = spec.bay_m if spec.bay_m is not None else DEFAULT_BAY_M
        x_min, y_min, x_max, y_max = region.bounds()
        bay = Rect.from_center((x_min + x_max) / 2.0, (y_min + y_max) / 2.0,
                               bay_w, bay_l)
    grid = discretize(region, spec.grid_spacing_m, spec.coverage_side, bay)
    return outline, region, grid


def plan_scenario(spec: ScenarioSpec, cameras: list[CameraSpec], lenses: list[LensSpec],
                  polygon: Polygon, weights: ObjectiveWeights = DEFAULT_WEIGHTS,
                  working_distance_m: float | None = None,
                  time_budget_s: float = 60.0) -> tuple[PlanReport, PlanGeometry]:
    """Run selection, geometry, placement, verification and costing.

    Returns the serialisable report plus the intermediate geometry (for
    rendering and diagnostics).  Failures propagate as the underlying
    errors with the scenario name prepended.
    """
    d_m = spec.working_distance_m if working_distance_m is None else working_distance_m
    try:
        pair = select_best(cameras, lenses, spec.requirement(d_m), weights)
        footprint = ground_footprint(pair.camera.sensor, pair.lens.focal_mm, d_m)
        outline, region, grid = _scenario_geometry(spec, polygon, footprint)
        lattice = candidate_lattice(region, footprint, spec.overlap_fraction)
        instance = build_coverage_matrix(grid, lattice)
        solution = solve_set_cover_exact(instance, time_budget_s)
    except PlannerError as exc:
        # keep the concrete type and its attributes, prepend the scenario
        exc.args = (f"scenario {spec.name!r}: {exc}",)
        raise

    report_check = verify_solution(instance, solution)
    if not report_check.ok:
        raise PlannerError(
            f"scenario {spec.name!r}: solution failed verification on "
            f"{len(report_check.violations)} point(s)")

    warnings: list[str] = []
    if not solution.optimal:
        warnings.append("set-cover search hit the time budget; camera count is an upper bound")
    utilisation = pair.camera.bandwidth_utilisation()
    if utilisation > 1.0:
        warnings.append(
            f"camera {pair.camera.id} uncompressed stream is {utilisation:.0%} of its GigE link")
    if pair.camera.sensor.pitch_deviation() > 0.05:
        warnings.append(f"camera {pair.camera.id} sensor data is internally inconsistent")

    motion = None
    if spec.velocity_band_m_s is not None:
        v = spec.velocity_band_m_s[1]
        dpf = distance_per_frame(v, pair.camera.fps)
        threshold = min(spec.target_w_mm, spec.target_h_mm) / 2.0 / 1000.0
        motion = MotionCheck(velocity_m_s=v, fps=pair.camera.fps,
                             distance_per_frame_m=dpf, threshold_m=threshold)
        if motion.exceeded:
            warnings.append(
                f"target moves {dpf * 1000.0:.0f} mm per frame at {v} m/s, more than half "
                f"the smaller target dimension; tracking continuity is at risk")

    bom = bill_of_materials(pair, solution.count)
    positions = tuple(instance.candidates[j] for j in solution.chosen)

    report = PlanReport(
        scenario=replace(spec),
        camera=pair.camera,
        lens=pair.lens,
        pair_objective=pair.objective if pair.objective is not None else float("nan"),
        working_distance_m=d_m,
        gsd_w_mm_px=pair.fov.gsd_w_mm_px,
        gsd_h_mm_px=pair.fov.gsd_h_mm_px,
        footprint=footprint,
        grid_points=len(grid),
        candidate_count=instance.n_candidates,
        camera_count=solution.count,
        positions=positions,
        optimal=solution.optimal,
        solver_nodes=solution.stats.nodes,
        motion=motion,
        bom=bom,
        warnings=tuple(warnings),
    )
    geometry = PlanGeometry(outline=outline, region=region, grid=grid,
                            instance=instance, solution=solution)
    return report, geometry


@dataclass(frozen=True)
class SweepPlan:
    area_m2: float
    swath_m: float
    speed_m_s: float
    pass_length_m: float
    pass_count: int
    turn_time_s: float
    total_time_s: float


def sweep_time(area_m2: float, swath_m: float, speed_m_s: float,
               pass_length_m: float, turn_time_s: float) -> SweepPlan:
    """Boustrophedon sweep estimate: parallel passes one swath apart with a
    fixed-cost turn between consecutive passes."""
    for name, value in (("area_m2", area_m2), ("swath_m", swath_m),
                        ("speed_m_s", speed_m_s), ("pass_length_m", pass_length_m)):
        if value <= 0:
            raise NonPositiveInputError(f"{name} must be positive, got {value}")
    if turn_time_s < 0:
        raise NonPositiveInputError("turn_time_s must be non-negative")
    passes = math.ceil(area_m2 / (swath_m * pass_length_m))
    total = passes * pass_length_m / speed_m_s + (passes - 1) * turn_time_s
    return SweepPlan(area_m2=area_m2, swath_m=swath_m, speed_m_s=speed_m_s,
                     pass_length_m=pass_length_m, pass_count=passes,
                     turn_time_s=turn_time_s, total_time_s=total)


# --- layout rendering ---

_SVG_SCALE = 100.0  # 1 user unit = 0.01 m
_MARGIN_UNITS = 200.0


def _fmt(value: float) -> str:
    return f"{value:.1f}"


def render_layout_svg(report: PlanReport, polygon: Polygon) -> str:
    """Draw the outline, envelope, target grid and chosen camera footprints.

    The geometry is recomputed from the report's scenario, so the output is
    a pure function of (report, polygon).  Coordinates are in units of
    0.01 m with the origin at the bottom-left of the drawing.
    """
    outline, region, grid = _scenario_geometry(report.scenario, polygon, report.footprint)

    xs = [p[0] for p in grid.points] + [v[0] for v in region.boundary.vertices]
    ys = [p[1] for p in grid.points] + [v[1] for v in region.boundary.vertices]
    half_w = report.footprint.width_m / 2.0
    half_l = report.footprint.length_m / 2.0
    for (cx, cy) in report.positions:
        xs += [cx - half_w, cx + half_w]
        ys += [cy - half_l, cy + half_l]
    x_min, x_max = min(xs), max(xs)
    y_min, y_max = min(ys), max(ys)

    def tx(x: float) -> float:
        return (x - x_min) * _SVG_SCALE + _MARGIN_UNITS

    def ty(y: float) -> float:
        # svg y grows downward; flip so the document origin is bottom-left
        return (y_max - y) * _SVG_SCALE + _MARGIN_UNITS

    width = (x_max - x_min) * _SVG_SCALE + 2 * _MARGIN_UNITS
    height = (y_max - y_min) * _SVG_SCALE + 2 * _MARGIN_UNITS

    def path_of(poly: Polygon) -> str:
        coords = " L ".join(f"{_fmt(tx(x))} {_fmt(ty(y))}" for x, y in poly.vertices)
        return f"M {coords} Z"

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- camera layout: {report.scenario.name}; 1 user unit = 0.01 m; "
        "origin bottom-left -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<path d="{path_of(outline)}" fill="none" stroke="#222" stroke-width="6"/>',
        f'<path d="{path_of(region.boundary)}" fill="none" stroke="#c22" '
        'stroke-width="4" stroke-dasharray="20,14"/>',
    ]
    parts.append('<g fill="#2a2">')
    for (x, y) in grid.points:
        parts.append(f'<circle cx="{_fmt(tx(x))}" cy="{_fmt(ty(y))}" r="4"/>')
    parts.append("</g>")
    parts.append('<g fill="#36c" fill-opacity="0.18" stroke="#36c" stroke-width="3">')
    for (cx, cy) in report.positions:
        parts.append(
            f'<rect x="{_fmt(tx(cx - half_w))}" y="{_fmt(ty(cy + half_l))}" '
            f'width="{_fmt(report.footprint.width_m * _SVG_SCALE)}" '
            f'height="{_fmt(report.footprint.length_m * _SVG_SCALE)}"/>')
    parts.append("</g>")
    parts.append('<g font-family="sans-serif" font-size="40" fill="#103">')
    for index, (cx, cy) in enumerate(report.positions):
        parts.append(f'<circle cx="{_fmt(tx(cx))}" cy="{_fmt(ty(cy))}" r="8" fill="#103"/>')
        parts.append(f'<text x="{_fmt(tx(cx) + 12)}" y="{_fmt(ty(cy) - 12)}">{index}</text>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def load_bundled_outline() -> Polygon:
    """The shipped narrow-body top-view trace, in source (pixel) units."""
    from .geometry import PerimeterFormat, parse_perimeter

    return parse_perimeter(data.read_text("a320_topview.svg"), PerimeterFormat.SVG_PATH)
