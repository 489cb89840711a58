"""Pinhole-model optics.

Unit convention: sensor dimensions, focal lengths and working distances are
millimetres; ground-plane extents are metres; GSD is mm per pixel.  The
conversions live here and nowhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonPositiveFrameRateError, NonPositiveInputError


@dataclass(frozen=True)
class SensorGeometry:
    """Physical sensor size and pixel counts."""

    width_mm: float
    height_mm: float
    res_w_px: int
    res_h_px: int
    pixel_um: float

    def __post_init__(self):
        for name in ("width_mm", "height_mm", "res_w_px", "res_h_px", "pixel_um"):
            if getattr(self, name) <= 0:
                raise NonPositiveInputError(f"sensor {name} must be positive")

    def pitch_deviation(self) -> float:
        """Largest relative disagreement between stated pixel pitch and
        sensor-size / resolution, used as a catalog sanity signal."""
        derived_w = self.width_mm / self.res_w_px * 1000.0
        derived_h = self.height_mm / self.res_h_px * 1000.0
        return max(abs(derived_w - self.pixel_um), abs(derived_h - self.pixel_um)) / self.pixel_um


@dataclass(frozen=True)
class FieldOfView:
    """Ground-plane extent and sampling of one camera at a fixed distance."""

    width_m: float
    height_m: float
    diag_m: float
    gsd_w_mm_px: float
    gsd_h_mm_px: float
    distortion: float


@dataclass(frozen=True)
class Footprint:
    """Axis-aligned ground rectangle seen by a ceiling camera at height h."""

    width_m: float
    length_m: float
    theta_h_deg: float
    theta_v_deg: float


def _require_positive(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if value <= 0:
            raise NonPositiveInputError(f"{name} must be positive, got {value}")


def fov_at_distance(sensor: SensorGeometry, focal_mm: float, distance_mm: float) -> FieldOfView:
    """Project the sensor onto the object plane at the given distance.

    Width/height scale as distance * sensor / focal; GSD divides the
    field of view by the pixel count; the distortion heuristic is the
    diagonal field of view (mm) over the focal length.
    """
    _require_positive(focal_mm=focal_mm, distance_mm=distance_mm)
    fov_w_mm = distance_mm * sensor.width_mm / focal_mm
    fov_h_mm = distance_mm * sensor.height_mm / focal_mm
    diag_mm = math.hypot(fov_w_mm, fov_h_mm)
    return FieldOfView(
        width_m=fov_w_mm / 1000.0,
        height_m=fov_h_mm / 1000.0,
        diag_m=diag_mm / 1000.0,
        gsd_w_mm_px=fov_w_mm / sensor.res_w_px,
        gsd_h_mm_px=fov_h_mm / sensor.res_h_px,
        distortion=diag_mm / focal_mm,
    )


def working_distance_for_gsd(sensor: SensorGeometry, focal_mm: float,
                             gsd_mm_px: float) -> float:
    """Distance (mm) at which the horizontal GSD equals the given value."""
    _require_positive(focal_mm=focal_mm, gsd_mm_px=gsd_mm_px)
    return gsd_mm_px * focal_mm * sensor.res_w_px / sensor.width_mm


def angular_fov_deg(sensor_dim_mm: float, focal_mm: float) -> float:
    """Angular field of view of one sensor axis, in degrees."""
    _require_positive(sensor_dim_mm=sensor_dim_mm, focal_mm=focal_mm)
    return math.degrees(2.0 * math.atan(sensor_dim_mm / (2.0 * focal_mm)))


def ground_footprint(sensor: SensorGeometry, focal_mm: float, height_m: float) -> Footprint:
    """Ground rectangle of a nadir-pointing camera mounted height_m above
    the target plane: W = 2h tan(theta_h / 2), L = 2h tan(theta_v / 2)."""
    _require_positive(focal_mm=focal_mm, height_m=height_m)
    theta_h = angular_fov_deg(sensor.width_mm, focal_mm)
    theta_v = angular_fov_deg(sensor.height_mm, focal_mm)
    return Footprint(
        width_m=2.0 * height_m * math.tan(math.radians(theta_h) / 2.0),
        length_m=2.0 * height_m * math.tan(math.radians(theta_v) / 2.0),
        theta_h_deg=theta_h,
        theta_v_deg=theta_v,
    )


def distance_per_frame(velocity_m_s: float, fps: float) -> float:
    """Ground distance a target moves between consecutive frames."""
    if fps <= 0:
        raise NonPositiveFrameRateError(f"fps must be positive, got {fps}")
    if velocity_m_s < 0:
        raise NonPositiveInputError("velocity must be non-negative")
    return velocity_m_s / fps
