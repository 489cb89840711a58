"""Camera and lens market catalog: loading, feasibility filtering, ranking.

A pair is feasible at a working distance when its projected field of view
covers the required cell, its GSD is within the resolution bound on both
axes, the hardware cost fits the budget, and (when demanded) the shutter is
global.  Surviving pairs are ranked by a multi-objective score combining
hardware cost, a distortion heuristic, a global-shutter bonus, and a
frame-rate penalty outside the preferred band.

Prices are carried as exact decimals (whole pence); only the objective mixes
them with floating-point penalty terms.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, replace
from decimal import Decimal
from enum import Enum

from .errors import (
    DuplicateIdError,
    EmptyInputError,
    MissingColumnError,
    NoFeasiblePairError,
    NonPositiveValueError,
)
from .optics import FieldOfView, SensorGeometry, fov_at_distance

# Stated pixel pitch may disagree with sensor size / resolution by up to
# this fraction before a sanity warning is emitted.
PITCH_WARN_FRACTION = 0.05

GIGE_BYTES_PER_GBPS = 1e9 / 8.0


class CatalogSanityWarning(UserWarning):
    """Catalog row is internally inconsistent but still usable."""


class Shutter(Enum):
    GLOBAL = "global"
    ROLLING = "rolling"


@dataclass(frozen=True)
class CameraSpec:
    id: str
    brand: str
    sensor: SensorGeometry
    format: str
    megapixels: float
    shutter: Shutter
    fps: float
    gige_gbps: float
    price_gbp: Decimal

    def bandwidth_utilisation(self) -> float:
        """Uncompressed 8-bit stream rate over the GigE link capacity."""
        bytes_per_s = self.sensor.res_w_px * self.sensor.res_h_px * self.fps
        return bytes_per_s / (self.gige_gbps * GIGE_BYTES_PER_GBPS)


@dataclass(frozen=True)
class LensSpec:
    id: str
    description: str
    focal_mm: float
    price_gbp: Decimal


@dataclass(frozen=True)
class SelectionRequirement:
    """Constraints a camera-lens pair must satisfy at the working distance."""

    target_w_mm: float
    target_h_mm: float
    gsd_max_mm_px: float
    working_distance_mm: float
    budget_gbp: Decimal | None = None
    require_global_shutter: bool = False

    def __post_init__(self):
        for name in ("target_w_mm", "target_h_mm", "gsd_max_mm_px", "working_distance_mm"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.budget_gbp is not None and self.budget_gbp <= 0:
            raise ValueError("budget_gbp must be positive when present")


@dataclass(frozen=True)
class ObjectiveWeights:
    """Coefficients of the pair-ranking objective."""

    alpha_distortion: float = 1.0
    beta_shutter_bonus: float = 200.0
    gamma_fps_penalty: float = 10.0
    fps_band: tuple[float, float] = (20.0, 50.0)

    def __post_init__(self):
        if min(self.alpha_distortion, self.beta_shutter_bonus, self.gamma_fps_penalty) < 0:
            raise ValueError("objective weights must be non-negative")
        if self.fps_band[0] > self.fps_band[1]:
            raise ValueError("fps_band low must not exceed high")

    def fps_penalty(self, fps: float) -> float:
        low, high = self.fps_band
        return max(0.0, low - fps) + max(0.0, fps - high)


DEFAULT_WEIGHTS = ObjectiveWeights()


@dataclass(frozen=True)
class RankedPair:
    camera: CameraSpec
    lens: LensSpec
    fov: FieldOfView
    total_cost_gbp: Decimal
    objective: float | None = None


def _read_rows(source: str, required: tuple[str, ...], what: str) -> list[dict]:
    """Rows from CSV text or a JSON array of objects, with the same keys."""
    if source.lstrip().startswith("["):
        import json

        rows = json.loads(source)
        fieldnames = set(rows[0]) if rows else set()
    else:
        reader = csv.DictReader(io.StringIO(source))
        fieldnames = set(reader.fieldnames or ())
        rows = list(reader)
    missing = [c for c in required if c not in fieldnames]
    if missing:
        raise MissingColumnError(f"{what} catalog lacks column(s): {', '.join(missing)}")
    return rows


def _positive(row: dict, key: str, kind=float):
    value = kind(row[key])
    if value <= 0:
        raise NonPositiveValueError(f"{key}={row[key]!r} in row {row.get('id')!r} must be positive")
    return value


_CAMERA_COLUMNS = ("id", "brand", "sensor_w_mm", "sensor_h_mm", "res_w_px", "res_h_px",
                   "format", "mpix", "shutter", "pixel_um", "fps", "gige_gbps", "price_gbp")
_LENS_COLUMNS = ("id", "description", "focal_mm", "price_gbp")


def load_catalog(cameras_source: str, lenses_source: str) -> tuple[list[CameraSpec], list[LensSpec]]:
    """Parse the camera and lens CSV catalogs.

    Emits a :class:`CatalogSanityWarning` for any camera whose stated pixel
    pitch disagrees with sensor size / resolution by more than 5%.
    """
    cameras: list[CameraSpec] = []
    seen: set[str] = set()
    for row in _read_rows(cameras_source, _CAMERA_COLUMNS, "camera"):
        sensor = SensorGeometry(
            width_mm=_positive(row, "sensor_w_mm"),
            height_mm=_positive(row, "sensor_h_mm"),
            res_w_px=_positive(row, "res_w_px", int),
            res_h_px=_positive(row, "res_h_px", int),
            pixel_um=_positive(row, "pixel_um"),
        )
        cam = CameraSpec(
            id=row["id"],
            brand=row["brand"],
            sensor=sensor,
            format=str(row["format"]),
            megapixels=_positive(row, "mpix"),
            shutter=Shutter(str(row["shutter"]).strip().lower()),
            fps=_positive(row, "fps"),
            gige_gbps=_positive(row, "gige_gbps"),
            price_gbp=Decimal(str(row["price_gbp"])),
        )
        if cam.price_gbp <= 0:
            raise NonPositiveValueError(f"price_gbp of {cam.id!r} must be positive")
        if cam.id in seen:
            raise DuplicateIdError(f"duplicate camera id {cam.id!r}")
        seen.add(cam.id)
        if sensor.pitch_deviation() > PITCH_WARN_FRACTION:
            warnings.warn(
                f"camera {cam.id!r}: stated pixel pitch {sensor.pixel_um} um deviates "
                f"{sensor.pitch_deviation():.0%} from sensor size / resolution",
                CatalogSanityWarning,
                stacklevel=2,
            )
        cameras.append(cam)

    lenses: list[LensSpec] = []
    seen = set()
    for row in _read_rows(lenses_source, _LENS_COLUMNS, "lens"):
        lens = LensSpec(
            id=row["id"],
            description=row["description"],
            focal_mm=_positive(row, "focal_mm"),
            price_gbp=Decimal(str(row["price_gbp"])),
        )
        if lens.price_gbp <= 0:
            raise NonPositiveValueError(f"price_gbp of {lens.id!r} must be positive")
        if lens.id in seen:
            raise DuplicateIdError(f"duplicate lens id {lens.id!r}")
        seen.add(lens.id)
        lenses.append(lens)

    return cameras, lenses


def load_bundled_catalog() -> tuple[list[CameraSpec], list[LensSpec]]:
    """Load the catalog snapshot shipped with the package."""
    from . import data

    return load_catalog(data.read_text("cameras.csv"), data.read_text("lenses.csv"))


def _passes(camera: CameraSpec, lens: LensSpec, req: SelectionRequirement,
            fov: FieldOfView) -> tuple[bool, bool, bool, bool]:
    """(coverage, resolution, budget, shutter) pass flags for one pair."""
    coverage = (fov.width_m * 1000.0 >= req.target_w_mm
                and fov.height_m * 1000.0 >= req.target_h_mm)
    resolution = (fov.gsd_w_mm_px <= req.gsd_max_mm_px
                  and fov.gsd_h_mm_px <= req.gsd_max_mm_px)
    budget = (req.budget_gbp is None
              or camera.price_gbp + lens.price_gbp <= req.budget_gbp)
    shutter = (not req.require_global_shutter) or camera.shutter is Shutter.GLOBAL
    return coverage, resolution, budget, shutter


def feasible_pairs(cameras: list[CameraSpec], lenses: list[LensSpec],
                   req: SelectionRequirement) -> list[RankedPair]:
    """All camera-lens pairs satisfying the coverage, resolution, budget and
    shutter constraints at the requirement's working distance (unranked)."""
    out: list[RankedPair] = []
    for camera in cameras:
        for lens in lenses:
            fov = fov_at_distance(camera.sensor, lens.focal_mm, req.working_distance_mm)
            if all(_passes(camera, lens, req, fov)):
                out.append(RankedPair(
                    camera=camera,
                    lens=lens,
                    fov=fov,
                    total_cost_gbp=camera.price_gbp + lens.price_gbp,
                ))
    return out


def rank_pairs(pairs: list[RankedPair], weights: ObjectiveWeights = DEFAULT_WEIGHTS) -> list[RankedPair]:
    """Sort feasible pairs ascending by the combined objective.

    O = C_total + alpha * D - beta * [global shutter] + gamma * fps penalty.
    Ties break on (total cost, camera id, lens id).
    """
    if not pairs:
        raise EmptyInputError("rank_pairs needs at least one pair")
    scored = []
    for pair in pairs:
        objective = (
            float(pair.total_cost_gbp)
            + weights.alpha_distortion * pair.fov.distortion
            - (weights.beta_shutter_bonus if pair.camera.shutter is Shutter.GLOBAL else 0.0)
            + weights.gamma_fps_penalty * weights.fps_penalty(pair.camera.fps)
        )
        scored.append(replace(pair, objective=objective))
    scored.sort(key=lambda p: (p.objective, p.total_cost_gbp, p.camera.id, p.lens.id))
    return scored


def select_best(cameras: list[CameraSpec], lenses: list[LensSpec],
                req: SelectionRequirement,
                weights: ObjectiveWeights = DEFAULT_WEIGHTS) -> RankedPair:
    """Head of the ranked feasible list; raises NoFeasiblePairError with the
    binding-constraint tally when the feasible set is empty."""
    pairs = feasible_pairs(cameras, lenses, req)
    if not pairs:
        failed = [0, 0, 0, 0]
        total = 0
        for camera in cameras:
            for lens in lenses:
                total += 1
                fov = fov_at_distance(camera.sensor, lens.focal_mm, req.working_distance_mm)
                for i, ok in enumerate(_passes(camera, lens, req, fov)):
                    if not ok:
                        failed[i] += 1
        raise NoFeasiblePairError(total, *failed)
    return rank_pairs(pairs, weights)[0]
