"""hangarplan: cost-optimal camera selection and ceiling-camera placement
for aircraft maintenance bays.

The package couples two optimisation layers: a market-catalog filter/ranker
that picks a camera-lens pair meeting coverage, resolution, budget and
shutter constraints, and an exact set-cover solver that places the fewest
cameras whose ground footprints cover a discretised region around a scaled
aircraft outline.  A small CLI (``hangarplan``) exposes both layers plus a
drone sweep-time estimator and a cost comparison against commercial
motion-capture and ultra-wideband blueprints.
"""

from .catalog import (
    CameraSpec,
    LensSpec,
    ObjectiveWeights,
    RankedPair,
    SelectionRequirement,
    Shutter,
    feasible_pairs,
    load_bundled_catalog,
    load_catalog,
    rank_pairs,
    select_best,
)
from .costing import BillOfMaterials, bill_of_materials, compare_blueprints
from .geometry import (
    BufferedRegion,
    PerimeterFormat,
    Polygon,
    Rect,
    Side,
    TargetGrid,
    buffer_polygon,
    discretize,
    parse_perimeter,
    point_in_polygon,
    scale_to_length,
)
from .optics import (
    FieldOfView,
    Footprint,
    SensorGeometry,
    angular_fov_deg,
    distance_per_frame,
    fov_at_distance,
    ground_footprint,
    working_distance_for_gsd,
)
from .pipeline import (
    Mode,
    PlanReport,
    ScenarioSpec,
    SweepPlan,
    load_bundled_outline,
    load_preset,
    plan_scenario,
    render_layout_svg,
    sweep_time,
)
from .placement import (
    CandidateLattice,
    CoverageInstance,
    PlacementSolution,
    build_coverage_matrix,
    candidate_lattice,
    solve_set_cover_exact,
    solve_set_cover_greedy,
    verify_solution,
)

__version__ = "0.1.0"
