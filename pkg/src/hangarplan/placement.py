"""Camera placement as minimum set cover.

Candidate camera centres are laid on a lattice whose pitch is the footprint
scaled by (1 - overlap), anchored so one lattice point sits exactly on the
envelope centroid.  A Boolean incidence matrix records which candidate's
closed ground rectangle contains which target point, and the fewest-cameras
problem is solved exactly by branch and bound over binary include/exclude
decisions, seeded by the greedy cover and pruned with two lower bounds
(disjoint uncovered rows, and remaining points over the best single-column
coverage).  Dominated columns are removed and essential columns forced
before the search starts.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import (
    InfeasibleError,
    NonPositiveFootprintError,
    TimeBudgetExceededError,
    UncoverablePointError,
)
from .geometry import BufferedRegion, Point, Side, TargetGrid
from .optics import Footprint


@dataclass(frozen=True)
class CandidateLattice:
    """Regular lattice of candidate camera centres."""

    step_x_m: float
    step_y_m: float
    centres: tuple[Point, ...]
    footprint: Footprint
    overlap_fraction: float

    def __len__(self) -> int:
        return len(self.centres)


@dataclass(frozen=True)
class CoverageInstance:
    """Target points, surviving candidates, and the sparse incidence matrix.

    ``rows[i]`` holds the indices (into ``candidates``) of every candidate
    whose footprint contains point ``i``.  Candidates that cover no point
    have already been pruned.
    """

    points: TargetGrid
    lattice: CandidateLattice
    candidates: tuple[Point, ...]
    rows: tuple[tuple[int, ...], ...]

    @property
    def n_points(self) -> int:
        return len(self.rows)

    @property
    def n_candidates(self) -> int:
        return len(self.candidates)

    def covers(self, candidate_index: int, point: Point) -> bool:
        cx, cy = self.candidates[candidate_index]
        half_w = self.lattice.footprint.width_m / 2.0
        half_l = self.lattice.footprint.length_m / 2.0
        eps = 1e-9 * max(1.0, half_w, half_l)
        return (abs(point[0] - cx) <= half_w + eps
                and abs(point[1] - cy) <= half_l + eps)

    def to_json(self) -> str:
        """Regression-fixture dump: points, candidates, footprint, matrix."""
        return json.dumps({
            "points": [list(p) for p in self.points.points],
            "candidates": [list(c) for c in self.candidates],
            "footprint": {"width_m": self.lattice.footprint.width_m,
                          "length_m": self.lattice.footprint.length_m},
            "rows": [list(r) for r in self.rows],
        }, sort_keys=True)

    @classmethod
    def from_json(cls, blob: str) -> "CoverageInstance":
        """Rebuild a dumped instance (for regression fixtures and external
        solver harnesses)."""
        raw = json.loads(blob)
        width = float(raw["footprint"]["width_m"])
        length = float(raw["footprint"]["length_m"])
        points = TargetGrid(
            spacing_m=1.0, origin=(0.0, 0.0),
            points=tuple((float(x), float(y)) for x, y in raw["points"]),
            side=Side.INTERNAL)
        candidates = tuple((float(x), float(y)) for x, y in raw["candidates"])
        lattice = CandidateLattice(
            step_x_m=width, step_y_m=length, centres=candidates,
            footprint=Footprint(width_m=width, length_m=length,
                                theta_h_deg=90.0, theta_v_deg=90.0),
            overlap_fraction=0.0)
        return cls(points=points, lattice=lattice, candidates=candidates,
                   rows=tuple(tuple(int(j) for j in row) for row in raw["rows"]))


@dataclass(frozen=True)
class SolverStats:
    nodes: int
    runtime_s: float


@dataclass(frozen=True)
class PlacementSolution:
    chosen: tuple[int, ...]
    count: int
    optimal: bool
    per_point_cover_count: tuple[int, ...]
    stats: SolverStats


@dataclass(frozen=True)
class CoverageReport:
    multiplicity: tuple[int, ...]
    violations: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def candidate_lattice(region: BufferedRegion, footprint: Footprint,
                      overlap_fraction: float) -> CandidateLattice:
    """Candidate centres on a (1 - overlap)-pitch lattice through the
    envelope centroid, spanning the envelope's bounding box expanded by one
    footprint on every side so edge points remain coverable."""
    if footprint.width_m <= 0 or footprint.length_m <= 0:
        raise NonPositiveFootprintError(
            f"footprint must be positive, got {footprint.width_m} x {footprint.length_m}")
    if not 0.0 <= overlap_fraction < 1.0:
        raise ValueError(f"overlap_fraction must be in [0, 1), got {overlap_fraction}")

    step_x = (1.0 - overlap_fraction) * footprint.width_m
    step_y = (1.0 - overlap_fraction) * footprint.length_m
    cx, cy = region.centroid()
    x_min, y_min, x_max, y_max = region.bounds()
    x_lo, x_hi = x_min - footprint.width_m, x_max + footprint.width_m
    y_lo, y_hi = y_min - footprint.length_m, y_max + footprint.length_m

    def axis(c: float, lo: float, hi: float, step: float) -> list[float]:
        k_lo = math.ceil((lo - c) / step - 1e-9)
        k_hi = math.floor((hi - c) / step + 1e-9)
        return [c + k * step for k in range(k_lo, k_hi + 1)]

    xs = axis(cx, x_lo, x_hi, step_x)
    ys = axis(cy, y_lo, y_hi, step_y)
    centres = tuple(sorted((x, y) for x in xs for y in ys))
    return CandidateLattice(step_x_m=step_x, step_y_m=step_y, centres=centres,
                            footprint=footprint, overlap_fraction=overlap_fraction)


def build_coverage_matrix(points: TargetGrid, lattice: CandidateLattice) -> CoverageInstance:
    """Evaluate the closed-rectangle visibility test for every point and
    candidate.  Candidates covering nothing are dropped; a point covered by
    nothing raises UncoverablePointError."""
    if not points.points or not lattice.centres:
        raise InfeasibleError("coverage matrix needs at least one point and one candidate")

    half_w = lattice.footprint.width_m / 2.0
    half_l = lattice.footprint.length_m / 2.0
    eps = 1e-9 * max(1.0, half_w, half_l)

    px = np.fromiter((p[0] for p in points.points), dtype=float)
    py = np.fromiter((p[1] for p in points.points), dtype=float)
    n = len(points.points)

    kept: list[Point] = []
    covered_lists: list[np.ndarray] = []
    for (cx, cy) in lattice.centres:
        mask = (np.abs(px - cx) <= half_w + eps) & (np.abs(py - cy) <= half_l + eps)
        idx = np.nonzero(mask)[0]
        if idx.size:
            kept.append((cx, cy))
            covered_lists.append(idx)

    rows: list[list[int]] = [[] for _ in range(n)]
    for j, idx in enumerate(covered_lists):
        for i in idx:
            rows[int(i)].append(j)

    uncovered = [points.points[i] for i in range(n) if not rows[i]]
    if uncovered:
        raise UncoverablePointError(uncovered)

    return CoverageInstance(points=points, lattice=lattice,
                            candidates=tuple(kept),
                            rows=tuple(tuple(r) for r in rows))


def _row_masks(inst: CoverageInstance) -> list[int]:
    return [sum(1 << j for j in row) for row in inst.rows]


def _greedy_cover(col_masks: list[int], all_rows: int) -> list[int]:
    """Classic greedy: repeatedly take the column covering the most uncovered
    rows, ties to the lowest index."""
    chosen: list[int] = []
    covered = 0
    while covered != all_rows:
        best_j, best_gain = -1, 0
        for j, mask in enumerate(col_masks):
            gain = (mask & ~covered).bit_count()
            if gain > best_gain:
                best_j, best_gain = j, gain
        if best_gain == 0:
            raise InfeasibleError("greedy: uncoverable rows remain")
        chosen.append(best_j)
        covered |= col_masks[best_j]
    return chosen


def _independent_rows_bound(uncov: int, active: int, row_cols: list[int],
                            row_order: list[int]) -> int:
    """Count rows whose active coverer sets are pairwise disjoint; each such
    row needs its own camera, so the count lower-bounds the cover size."""
    used = 0
    count = 0
    for i in row_order:
        if not (uncov >> i) & 1:
            continue
        cmask = row_cols[i] & active
        if cmask and not (cmask & used):
            count += 1
            used |= cmask
    return count


class _Timeout(Exception):
    pass


def _branch_and_bound(col_masks: list[int], n_rows: int, incumbent: list[int],
                      deadline: float) -> tuple[list[int], bool, int]:
    """Exact search over the reduced core. Returns (best, proven, nodes)."""
    m = len(col_masks)
    all_rows = (1 << n_rows) - 1
    all_cols = (1 << m) - 1
    row_cols = [0] * n_rows
    for j, mask in enumerate(col_masks):
        r = mask
        while r:
            i = (r & -r).bit_length() - 1
            row_cols[i] |= 1 << j
            r &= r - 1
    # visiting rows in ascending coverer count strengthens the disjoint bound
    row_order = sorted(range(n_rows), key=lambda i: (row_cols[i].bit_count(), i))

    best = list(incumbent)
    best_n = len(best)
    nodes = 0

    def dfs(covered: int, chosen: list[int], active: int) -> None:
        nonlocal best, best_n, nodes
        nodes += 1
        if nodes % 256 == 0 and time.monotonic() > deadline:
            raise _Timeout
        if covered == all_rows:
            if len(chosen) < best_n:
                best = list(chosen)
                best_n = len(chosen)
            return
        if len(chosen) + 1 >= best_n:
            return
        uncov = all_rows & ~covered

        # branch row: fewest active coverers; bail out early on a forced row
        branch_row = -1
        branch_cnt = m + 1
        maxcov = 0
        r = uncov
        while r:
            i = (r & -r).bit_length() - 1
            r &= r - 1
            cmask = row_cols[i] & active
            cnt = cmask.bit_count()
            if cnt == 0:
                return  # dead branch: row uncoverable under exclusions
            if cnt < branch_cnt:
                branch_cnt = cnt
                branch_row = i
                if cnt == 1:
                    break

        a = active
        while a:
            j = (a & -a).bit_length() - 1
            a &= a - 1
            c = (col_masks[j] & uncov).bit_count()
            if c > maxcov:
                maxcov = c
        lb = max(
            -(-uncov.bit_count() // maxcov),
            _independent_rows_bound(uncov, active, row_cols, row_order),
        )
        if len(chosen) + lb >= best_n:
            return

        # branch on the covering columns in ascending (lexicographic) index
        options = row_cols[branch_row] & active
        order = []
        o = options
        while o:
            j = (o & -o).bit_length() - 1
            o &= o - 1
            order.append(j)

        remaining_active = active
        for j in order:
            chosen.append(j)
            dfs(covered | col_masks[j], chosen, remaining_active & ~(1 << j))
            chosen.pop()
            # later branches assume j is excluded: some sibling must cover the row
            remaining_active &= ~(1 << j)

    try:
        dfs(0, [], all_cols)
        return best, True, nodes
    except _Timeout:
        return best, False, nodes


def _reduce(row_masks: list[int], m: int) -> tuple[list[int], list[int], list[int]]:
    """Dominance and essential-column reductions.

    Returns (forced original columns, reduced row masks over kept columns,
    kept original column indices).
    """
    forced: list[int] = []
    rows = row_masks
    active_cols = set(range(m))

    while True:
        changed = False

        # drop rows already covered by forced columns
        forced_mask = sum(1 << j for j in forced)
        active_mask = sum(1 << j for j in active_cols)
        rows = [r & active_mask for r in rows if not (r & forced_mask)]
        if any(r == 0 for r in rows):
            raise InfeasibleError("reduction exposed an uncoverable row")

        # dedupe, then drop rows whose coverer set contains another row's
        rows = sorted(set(rows), key=lambda r: (r.bit_count(), r))
        minimal: list[int] = []
        for r in rows:
            if not any(k & r == k for k in minimal):
                minimal.append(r)
        rows = minimal

        # essential columns: singleton rows force their only coverer
        for r in rows:
            if r.bit_count() == 1:
                j = r.bit_length() - 1
                if j not in forced:
                    forced.append(j)
                    active_cols.discard(j)
                    changed = True
        if changed:
            continue

        # column dominance over the remaining rows
        col_rows: dict[int, int] = {}
        for j in sorted(active_cols):
            mask = 0
            for i, r in enumerate(rows):
                if (r >> j) & 1:
                    mask |= 1 << i
            col_rows[j] = mask
        drop: set[int] = set()
        cols_sorted = sorted(active_cols)
        for j in cols_sorted:
            if j in drop:
                continue
            for k in cols_sorted:
                if k == j or k in drop:
                    continue
                cj, ck = col_rows[j], col_rows[k]
                if cj | ck == ck and (cj != ck or j > k):
                    drop.add(j)
                    break
        if drop:
            active_cols -= drop
            mask_keep = sum(1 << j for j in active_cols)
            rows = [r & mask_keep for r in rows]
            changed = True

        if not changed:
            break

    kept = sorted(active_cols)
    remap = {j: pos for pos, j in enumerate(kept)}
    reduced = []
    for r in rows:
        mask = 0
        while r:
            j = (r & -r).bit_length() - 1
            r &= r - 1
            mask |= 1 << remap[j]
        reduced.append(mask)
    return forced, reduced, kept


def _multiplicities(inst: CoverageInstance, chosen: tuple[int, ...]) -> tuple[int, ...]:
    chosen_set = set(chosen)
    return tuple(sum(1 for j in row if j in chosen_set) for row in inst.rows)


def solve_set_cover_exact(inst: CoverageInstance,
                          time_budget_s: float = 60.0) -> PlacementSolution:
    """Minimum-camera cover by branch and bound.

    Always returns a feasible solution; ``optimal`` is True only when the
    search closed within the time budget.  Raises TimeBudgetExceededError
    only in the degenerate case where not even the greedy incumbent could be
    built in time.
    """
    start = time.monotonic()
    deadline = start + time_budget_s
    row_masks = _row_masks(inst)
    if any(r == 0 for r in row_masks):
        raise InfeasibleError("instance has uncovered rows")

    forced, reduced_rows, kept = _reduce(row_masks, inst.n_candidates)
    nodes = 0
    if reduced_rows:
        # core columns as row masks
        core_cols = []
        for pos, _ in enumerate(kept):
            mask = 0
            for i, r in enumerate(reduced_rows):
                if (r >> pos) & 1:
                    mask |= 1 << i
            core_cols.append(mask)
        all_core = (1 << len(reduced_rows)) - 1
        if time.monotonic() > deadline:
            raise TimeBudgetExceededError("time budget exhausted before an incumbent existed")
        incumbent = _greedy_cover(core_cols, all_core)
        core_best, proven, nodes = _branch_and_bound(
            core_cols, len(reduced_rows), incumbent, deadline)
        chosen = sorted(forced + [kept[pos] for pos in core_best])
    else:
        chosen = sorted(forced)
        proven = True

    return PlacementSolution(
        chosen=tuple(chosen),
        count=len(chosen),
        optimal=proven,
        per_point_cover_count=_multiplicities(inst, tuple(chosen)),
        stats=SolverStats(nodes=nodes, runtime_s=time.monotonic() - start),
    )


def solve_set_cover_greedy(inst: CoverageInstance) -> PlacementSolution:
    """Greedy cover (most new points first, ties to the lowest index).

    ``optimal`` is True only when the greedy count matches the root lower
    bound, which certifies it without a search.
    """
    start = time.monotonic()
    row_masks = _row_masks(inst)
    if any(r == 0 for r in row_masks):
        raise InfeasibleError("instance has uncovered rows")
    m = inst.n_candidates
    col_masks = [0] * m
    for i, r in enumerate(row_masks):
        rr = r
        while rr:
            j = (rr & -rr).bit_length() - 1
            rr &= rr - 1
            col_masks[j] |= 1 << i
    all_rows = (1 << inst.n_points) - 1
    chosen = sorted(_greedy_cover(col_masks, all_rows))

    row_cols = row_masks
    order = sorted(range(inst.n_points), key=lambda i: (row_cols[i].bit_count(), i))
    lb = max(
        _independent_rows_bound(all_rows, (1 << m) - 1, row_cols, order),
        -(-inst.n_points // max(mask.bit_count() for mask in col_masks)),
    )
    return PlacementSolution(
        chosen=tuple(chosen),
        count=len(chosen),
        optimal=len(chosen) == lb,
        per_point_cover_count=_multiplicities(inst, tuple(chosen)),
        stats=SolverStats(nodes=0, runtime_s=time.monotonic() - start),
    )


def verify_solution(inst: CoverageInstance, sol: PlacementSolution) -> CoverageReport:
    """Recompute coverage from scratch (geometric test, not the stored
    matrix) and report per-point multiplicity plus uncovered points."""
    multiplicity = []
    violations = []
    for i, point in enumerate(inst.points.points):
        count = sum(1 for j in sol.chosen if inst.covers(j, point))
        multiplicity.append(count)
        if count == 0:
            violations.append(i)
    return CoverageReport(multiplicity=tuple(multiplicity), violations=tuple(violations))
