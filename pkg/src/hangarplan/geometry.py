"""Bay-plane geometry: perimeter parsing, metric scaling, envelope buffering,
and target-grid discretisation.

Conventions used throughout:

* polygons are simple closed vertex loops, first vertex not repeated;
* points exactly on a boundary count as *inside* for every membership test
  (conservative: coverage is required for them, never waived);
* all grids are seeded from the bounding-box minimum and sorted
  lexicographically so that downstream matrices have a reproducible order.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from enum import Enum
from xml.dom import minidom

from shapely.geometry import Polygon as _ShapelyPolygon

from .errors import (
    DegeneratePolygonError,
    EmptyGridError,
    MalformedSourceError,
    SelfIntersectingError,
    UnsupportedCommandError,
    ZeroExtentError,
)

Point = tuple[float, float]


class PerimeterFormat(Enum):
    SVG_PATH = "svg"
    JSON_VERTICES = "json"


class Side(Enum):
    INTERNAL = "internal"
    EXTERNAL = "external"


def _orient(a: Point, b: Point, c: Point) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a: Point, b: Point, p: Point) -> bool:
    """p is known collinear with a-b; test bounding box membership."""
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def _segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    o1 = _orient(a, b, c)
    o2 = _orient(a, b, d)
    o3 = _orient(c, d, a)
    o4 = _orient(c, d, b)
    if ((o1 > 0) != (o2 > 0) and o1 != 0 and o2 != 0
            and (o3 > 0) != (o4 > 0) and o3 != 0 and o4 != 0):
        return True
    if o1 == 0 and _on_segment(a, b, c):
        return True
    if o2 == 0 and _on_segment(a, b, d):
        return True
    if o3 == 0 and _on_segment(c, d, a):
        return True
    if o4 == 0 and _on_segment(c, d, b):
        return True
    return False


@dataclass(frozen=True)
class Polygon:
    """Simple closed polygon; the last vertex connects back to the first."""

    vertices: tuple[Point, ...]
    closed: bool = True

    def __init__(self, vertices, closed: bool = True):
        verts = [(float(x), float(y)) for x, y in vertices]
        # strip an explicit closing vertex if present
        if len(verts) > 1 and verts[0] == verts[-1]:
            verts = verts[:-1]
        # drop consecutive duplicates (zero-length edges)
        verts = [v for i, v in enumerate(verts) if v != verts[i - 1] or len(verts) == 1]
        object.__setattr__(self, "vertices", tuple(verts))
        object.__setattr__(self, "closed", closed)
        self._validate()

    def _validate(self) -> None:
        if len(set(self.vertices)) < 3:
            raise DegeneratePolygonError(
                f"polygon needs at least 3 distinct vertices, got {len(set(self.vertices))}"
            )
        self._check_simple()
        if abs(self.signed_area()) == 0.0:
            raise DegeneratePolygonError("polygon has zero signed area")

    def _check_simple(self) -> None:
        n = len(self.vertices)
        edges = [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if j == i or (j == i + 1) or (i == 0 and j == n - 1):
                    continue  # adjacent edges share a vertex by construction
                a, b = edges[i]
                c, d = edges[j]
                if _segments_intersect(a, b, c, d):
                    raise SelfIntersectingError(
                        f"edges {i} and {j} intersect: {a}-{b} vs {c}-{d}"
                    )

    def __len__(self) -> int:
        return len(self.vertices)

    def signed_area(self) -> float:
        s = 0.0
        verts = self.vertices
        for i in range(len(verts)):
            x1, y1 = verts[i]
            x2, y2 = verts[(i + 1) % len(verts)]
            s += x1 * y2 - x2 * y1
        return 0.5 * s

    def area(self) -> float:
        return abs(self.signed_area())

    def perimeter(self) -> float:
        verts = self.vertices
        return sum(
            math.hypot(verts[(i + 1) % len(verts)][0] - verts[i][0],
                       verts[(i + 1) % len(verts)][1] - verts[i][1])
            for i in range(len(verts))
        )

    def centroid(self) -> Point:
        """Area centroid of the enclosed region."""
        a = self.signed_area()
        cx = cy = 0.0
        verts = self.vertices
        for i in range(len(verts)):
            x1, y1 = verts[i]
            x2, y2 = verts[(i + 1) % len(verts)]
            cross = x1 * y2 - x2 * y1
            cx += (x1 + x2) * cross
            cy += (y1 + y2) * cross
        return cx / (6.0 * a), cy / (6.0 * a)

    def bounds(self) -> tuple[float, float, float, float]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def scaled(self, factor: float) -> "Polygon":
        return Polygon([(x * factor, y * factor) for x, y in self.vertices])


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle, used for the bay outline."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    @classmethod
    def from_center(cls, cx: float, cy: float, width: float, length: float) -> "Rect":
        return cls(cx - width / 2.0, cy - length / 2.0, cx + width / 2.0, cy + length / 2.0)

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def length(self) -> float:
        return self.y_max - self.y_min

    def contains(self, pt: Point) -> bool:
        return (self.x_min <= pt[0] <= self.x_max
                and self.y_min <= pt[1] <= self.y_max)

    def encloses(self, bounds: tuple[float, float, float, float], tol: float = 1e-9) -> bool:
        bx0, by0, bx1, by1 = bounds
        return (self.x_min <= bx0 + tol and self.y_min <= by0 + tol
                and self.x_max >= bx1 - tol and self.y_max >= by1 - tol)


@dataclass(frozen=True)
class BufferedRegion:
    """A polygon together with its uniform outward offset envelope."""

    base: Polygon
    offset_m: float
    boundary: Polygon

    def area(self) -> float:
        return self.boundary.area()

    def bounds(self) -> tuple[float, float, float, float]:
        return self.boundary.bounds()

    def centroid(self) -> Point:
        return self.boundary.centroid()

    def contains(self, pt: Point) -> bool:
        return point_in_polygon(pt, self.boundary)


@dataclass(frozen=True)
class TargetGrid:
    """Lattice of target points that the camera layout must cover."""

    spacing_m: float
    origin: Point
    points: tuple[Point, ...]
    side: Side
    bay: Rect | None = None

    def __len__(self) -> int:
        return len(self.points)


def point_in_polygon(pt: Point, polygon: Polygon) -> bool:
    """Even-odd ray-crossing membership test; boundary points count as inside."""
    x, y = pt
    verts = polygon.vertices
    n = len(verts)
    # scale-aware tolerance for the on-edge test
    span = max(abs(c) for v in verts for c in v) or 1.0
    eps = 1e-9 * span

    inside = False
    for i in range(n):
        x1, y1 = verts[i]
        x2, y2 = verts[(i + 1) % n]
        # on-edge check: collinear and within the segment's bounding box
        cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1)
        if abs(cross) <= eps * max(1.0, math.hypot(x2 - x1, y2 - y1)):
            if (min(x1, x2) - eps <= x <= max(x1, x2) + eps
                    and min(y1, y2) - eps <= y <= max(y1, y2) + eps):
                return True
        # half-open crossing rule avoids double-counting shared vertices
        if (y1 > y) != (y2 > y):
            x_int = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < x_int:
                inside = not inside
    return inside


_SVG_NUMBER = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")
_SVG_COMMAND = re.compile(r"[A-Za-z]")
_SUPPORTED = set("MmLlHhVvZz")
_CURVES = set("CcSsQqTtAa")


def _parse_svg_path_d(d: str) -> list[Point]:
    pts: list[Point] = []
    pos = 0
    cur = (0.0, 0.0)
    command = None
    closed = False
    n_subpaths = 0
    while pos < len(d):
        ch = d[pos]
        if ch.isspace() or ch == ",":
            pos += 1
            continue
        if _SVG_COMMAND.match(ch):
            if ch in _CURVES:
                raise UnsupportedCommandError(f"curve command {ch!r} not supported")
            if ch not in _SUPPORTED:
                raise MalformedSourceError(f"unknown path command {ch!r}")
            command = ch
            pos += 1
            if ch in "Zz":
                closed = True
                continue
            if ch in "Mm":
                n_subpaths += 1
                if n_subpaths > 1:
                    raise MalformedSourceError("path contains more than one subpath")
            continue
        m = _SVG_NUMBER.match(d, pos)
        if not m:
            raise MalformedSourceError(f"unparseable path data at offset {pos}: {d[pos:pos + 12]!r}")
        if command is None:
            raise MalformedSourceError("path data begins with a coordinate, not a command")
        if closed:
            raise MalformedSourceError("coordinates after close command")

        def take_number() -> float:
            nonlocal pos
            mm = _SVG_NUMBER.match(d, pos)
            if not mm:
                raise MalformedSourceError(f"expected number at offset {pos}")
            pos = mm.end()
            while pos < len(d) and (d[pos].isspace() or d[pos] == ","):
                pos += 1
            return float(mm.group())

        if command in "MmLl":
            x = take_number()
            y = take_number()
            if command.islower():
                cur = (cur[0] + x, cur[1] + y)
            else:
                cur = (x, y)
            # per SVG spec, extra pairs after a moveto are implicit linetos
            if command == "M":
                command = "L"
            elif command == "m":
                command = "l"
        elif command in "Hh":
            x = take_number()
            cur = (cur[0] + x, cur[1]) if command == "h" else (x, cur[1])
        elif command in "Vv":
            y = take_number()
            cur = (cur[0], cur[1] + y) if command == "v" else (cur[0], y)
        pts.append(cur)
    return pts


def parse_perimeter(source: str, fmt: PerimeterFormat) -> Polygon:
    """Parse a perimeter file (SVG path or JSON vertex list) into a Polygon.

    The returned polygon is in the source's own units; apply
    :func:`scale_to_length` to bring it to metres.
    """
    if fmt is PerimeterFormat.JSON_VERTICES:
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise MalformedSourceError(f"invalid JSON: {exc}") from exc
        if isinstance(data, dict):
            if "vertices" not in data:
                raise MalformedSourceError('JSON perimeter object lacks a "vertices" key')
            data = data["vertices"]
        if not isinstance(data, list):
            raise MalformedSourceError("JSON perimeter must be a vertex list")
        try:
            verts = [(float(p[0]), float(p[1])) for p in data]
        except (TypeError, ValueError, IndexError) as exc:
            raise MalformedSourceError(f"vertex entries must be [x, y] pairs: {exc}") from exc
        return Polygon(verts)

    if fmt is PerimeterFormat.SVG_PATH:
        try:
            doc = minidom.parseString(source)
        except Exception as exc:
            raise MalformedSourceError(f"invalid SVG document: {exc}") from exc
        try:
            paths = doc.getElementsByTagName("path")
            if len(paths) != 1:
                raise MalformedSourceError(f"expected exactly one <path>, found {len(paths)}")
            d = paths[0].getAttribute("d")
            if not d:
                raise MalformedSourceError("<path> element has no 'd' attribute")
            verts = _parse_svg_path_d(d)
        finally:
            doc.unlink()
        return Polygon(verts)

    raise MalformedSourceError(f"unknown perimeter format {fmt!r}")


def scale_to_length(p: Polygon, true_length_m: float) -> Polygon:
    """Uniformly scale so the x extent equals the certified aircraft length."""
    if true_length_m <= 0:
        raise ValueError("true_length_m must be positive")
    x_min, _, x_max, _ = p.bounds()
    extent = x_max - x_min
    if extent == 0:
        raise ZeroExtentError("all x coordinates are equal; cannot derive a scale factor")
    return p.scaled(true_length_m / extent)


def _quad_segs_for_tolerance(delta_m: float, arc_tolerance: float) -> int:
    """Segments per quarter-circle so the polyline sagitta stays within tolerance."""
    if arc_tolerance >= delta_m:
        return 1
    theta = 2.0 * math.acos(1.0 - arc_tolerance / delta_m)
    return max(1, math.ceil((math.pi / 2.0) / theta))


def buffer_polygon(p: Polygon, delta_m: float, arc_tolerance: float = 0.01) -> BufferedRegion:
    """Offset a polygon outward by ``delta_m`` (disc Minkowski sum).

    Convex corners are rounded; the rounding polyline deviates from the true
    arc by at most ``arc_tolerance``.
    """
    if delta_m < 0:
        raise ValueError("delta_m must be non-negative")
    if delta_m == 0:
        return BufferedRegion(base=p, offset_m=0.0, boundary=p)
    shp = _ShapelyPolygon(p.vertices)
    out = shp.buffer(delta_m, quad_segs=_quad_segs_for_tolerance(delta_m, arc_tolerance))
    boundary = Polygon(list(out.exterior.coords))
    return BufferedRegion(base=p, offset_m=float(delta_m), boundary=boundary)


def _lattice_axis(lo: float, hi: float, spacing: float) -> list[float]:
    n = math.floor((hi - lo) / spacing + 1e-9)
    return [lo + k * spacing for k in range(n + 1)]


def discretize(region: BufferedRegion, spacing_m: float, side: Side,
               bay: Rect | None = None) -> TargetGrid:
    """Seed a square lattice and keep the points on the requested side.

    Internal mode seeds over the envelope's bounding rectangle and keeps
    points inside or on the envelope.  External mode seeds over the bay and
    keeps bay points strictly outside the envelope; it requires a bay
    rectangle enclosing the envelope.
    """
    if spacing_m <= 0:
        raise ValueError("spacing_m must be positive")
    if side is Side.EXTERNAL:
        if bay is None:
            raise ValueError("external discretisation requires a bay rectangle")
        if not bay.encloses(region.bounds()):
            raise ValueError(
                f"bay {bay} does not enclose the buffered region {region.bounds()}"
            )
        origin = (bay.x_min, bay.y_min)
        xs = _lattice_axis(bay.x_min, bay.x_max, spacing_m)
        ys = _lattice_axis(bay.y_min, bay.y_max, spacing_m)
        pts = [(x, y) for x in xs for y in ys
               if not point_in_polygon((x, y), region.boundary)]
    else:
        x_min, y_min, x_max, y_max = region.bounds()
        origin = (x_min, y_min)
        xs = _lattice_axis(x_min, x_max, spacing_m)
        ys = _lattice_axis(y_min, y_max, spacing_m)
        pts = [(x, y) for x in xs for y in ys
               if point_in_polygon((x, y), region.boundary)]

    pts = sorted(set(pts))
    if not pts:
        raise EmptyGridError(f"no lattice point satisfies the {side.value} membership test")
    return TargetGrid(spacing_m=float(spacing_m), origin=origin,
                      points=tuple(pts), side=side, bay=bay)
