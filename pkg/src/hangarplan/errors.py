"""Exception hierarchy shared across the planner."""


class PlannerError(Exception):
    """Base class for all hangarplan errors."""


# --- geometry ---

class MalformedSourceError(PlannerError):
    """Perimeter file content could not be parsed."""


class UnsupportedCommandError(MalformedSourceError):
    """SVG path uses a command outside the supported move/line/close set."""


class DegeneratePolygonError(PlannerError):
    """Fewer than 3 distinct vertices, or zero signed area."""


class SelfIntersectingError(PlannerError):
    """Polygon edges cross each other."""


class ZeroExtentError(PlannerError):
    """Polygon has no x extent, so no scale factor can be derived."""


class EmptyGridError(PlannerError):
    """Discretisation produced no target points."""


# --- optics ---

class NonPositiveInputError(PlannerError):
    """An optical quantity that must be strictly positive was not."""


class NonPositiveFrameRateError(NonPositiveInputError):
    """Frame rate must be strictly positive."""


# --- catalog ---

class MissingColumnError(PlannerError):
    """Catalog file lacks a required column."""


class NonPositiveValueError(PlannerError):
    """Catalog row carries a non-positive value where a positive one is required."""


class DuplicateIdError(PlannerError):
    """Two catalog rows share an id."""


class EmptyInputError(PlannerError):
    """An operation that needs at least one element received none."""


class NoFeasiblePairError(PlannerError):
    """No camera-lens pair satisfies the selection constraints.

    Carries per-constraint failure counts so callers can report which
    constraint was binding.
    """

    def __init__(self, total_pairs, failed_coverage, failed_resolution,
                 failed_budget, failed_shutter):
        self.total_pairs = total_pairs
        self.failed_coverage = failed_coverage
        self.failed_resolution = failed_resolution
        self.failed_budget = failed_budget
        self.failed_shutter = failed_shutter
        super().__init__(
            f"no feasible camera-lens pair out of {total_pairs}: "
            f"{failed_coverage} failed coverage, {failed_resolution} failed resolution, "
            f"{failed_budget} failed budget, {failed_shutter} failed shutter"
        )


# --- placement ---

class NonPositiveFootprintError(PlannerError):
    """Camera footprint must have positive width and length."""


class UncoverablePointError(PlannerError):
    """Some target points are covered by no candidate camera."""

    def __init__(self, points):
        self.points = tuple(points)
        shown = ", ".join(f"({x:.3f}, {y:.3f})" for x, y in self.points[:5])
        more = "" if len(self.points) <= 5 else f" (+{len(self.points) - 5} more)"
        super().__init__(f"{len(self.points)} target point(s) covered by no candidate: {shown}{more}")


class InfeasibleError(PlannerError):
    """Set-cover instance has an uncoverable row."""


class TimeBudgetExceededError(PlannerError):
    """Solver ran out of time before finding any feasible incumbent."""


# --- costing ---

class NonPositiveQuantityError(PlannerError):
    """Bill-of-materials quantities must be at least 1."""
