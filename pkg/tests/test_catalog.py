import random
from decimal import Decimal

import pytest

from hangarplan.catalog import (
    CatalogSanityWarning,
    ObjectiveWeights,
    SelectionRequirement,
    Shutter,
    feasible_pairs,
    load_bundled_catalog,
    load_catalog,
    rank_pairs,
    select_best,
)
from hangarplan.errors import (
    DuplicateIdError,
    EmptyInputError,
    MissingColumnError,
    NoFeasiblePairError,
    NonPositiveValueError,
)

DEFECT_REQ = SelectionRequirement(
    target_w_mm=3000.0, target_h_mm=3000.0, gsd_max_mm_px=0.89,
    working_distance_mm=18540.0)

DRONE_REQ = SelectionRequirement(
    target_w_mm=7000.0, target_h_mm=7000.0, gsd_max_mm_px=6.02,
    working_distance_mm=18490.0, require_global_shutter=True)


class TestLoadCatalog:
    def test_bundled_row_counts(self, catalog):
        cameras, lenses = catalog
        # the published market table prints 44 camera rows (one budget line
        # repeats the "Basler(14)" label and is disambiguated on load)
        assert len(cameras) == 44
        assert len(lenses) == 10

    def test_basler14_row(self, catalog):
        cameras, _ = catalog
        by_id = {c.id: c for c in cameras}
        cam = by_id["Basler(14)"]
        assert cam.price_gbp == Decimal("332")
        assert cam.fps == 51.0
        assert cam.shutter is Shutter.GLOBAL
        # renamed duplicate keeps its own data
        assert by_id["Basler(14b)"].price_gbp == Decimal("279")
        assert by_id["Basler(14b)"].shutter is Shutter.ROLLING

    def test_techspec3_row(self, catalog):
        _, lenses = catalog
        lens = {l.id: l for l in lenses}["Techspec(3)"]
        assert lens.focal_mm == 12.0
        assert lens.price_gbp == Decimal("221")

    def test_empty_file_missing_columns(self):
        with pytest.raises(MissingColumnError):
            load_catalog("", "id,description,focal_mm,price_gbp\n")

    def test_missing_lens_column(self):
        with pytest.raises(MissingColumnError):
            load_catalog(
                "id,brand,sensor_w_mm,sensor_h_mm,res_w_px,res_h_px,format,mpix,"
                "shutter,pixel_um,fps,gige_gbps,price_gbp\n",
                "id,description\n")

    def test_duplicate_camera_id(self):
        header = ("id,brand,sensor_w_mm,sensor_h_mm,res_w_px,res_h_px,format,mpix,"
                  "shutter,pixel_um,fps,gige_gbps,price_gbp\n")
        row = "X,Brand,10,10,1000,1000,1in,1,global,10,30,1,100\n"
        with pytest.raises(DuplicateIdError):
            load_catalog(header + row + row, "id,description,focal_mm,price_gbp\n")

    def test_nonpositive_value(self):
        header = ("id,brand,sensor_w_mm,sensor_h_mm,res_w_px,res_h_px,format,mpix,"
                  "shutter,pixel_um,fps,gige_gbps,price_gbp\n")
        row = "X,Brand,0,10,1000,1000,1in,1,global,10,30,1,100\n"
        with pytest.raises(NonPositiveValueError):
            load_catalog(header + row, "id,description,focal_mm,price_gbp\n")

    def test_pitch_mismatch_warns(self):
        with pytest.warns(CatalogSanityWarning, match=r"Flir\(4\)"):
            load_bundled_catalog()

    def test_json_sources_accepted(self):
        import json

        cam_rows = [{"id": "J1", "brand": "B", "sensor_w_mm": 10, "sensor_h_mm": 10,
                     "res_w_px": 1000, "res_h_px": 1000, "format": "1in", "mpix": 1,
                     "shutter": "global", "pixel_um": 10, "fps": 30, "gige_gbps": 1,
                     "price_gbp": 100}]
        lens_rows = [{"id": "L1", "description": "10mm", "focal_mm": 10,
                      "price_gbp": 10}]
        cameras, lenses = load_catalog(json.dumps(cam_rows), json.dumps(lens_rows))
        assert cameras[0].id == "J1" and cameras[0].price_gbp == Decimal("100")
        assert lenses[0].focal_mm == 10.0

    def test_json_missing_column(self):
        with pytest.raises(MissingColumnError):
            load_catalog('[{"id": "X"}]', '[{"id": "L", "description": "d", '
                                          '"focal_mm": 1, "price_gbp": 1}]')

    def test_bandwidth_utilisation(self, catalog):
        cameras, _ = catalog
        by_id = {c.id: c for c in cameras}
        # 2.3 MP x 42 fps x 1 byte is ~77% of a 1 Gbit/s link
        assert by_id["Basler(1)"].bandwidth_utilisation() == pytest.approx(
            1920 * 1200 * 42 * 8 / 1e9, rel=1e-12)


class TestFeasiblePairs:
    def test_defect_contains_paper_pair(self, catalog):
        pairs = feasible_pairs(*catalog, DEFECT_REQ)
        assert ("Allied(7)", "Techspec(7)") in {(p.camera.id, p.lens.id) for p in pairs}

    def test_drone_contains_paper_pair(self, catalog):
        pairs = feasible_pairs(*catalog, DRONE_REQ)
        assert ("Basler(1)", "Techspec(4)") in {(p.camera.id, p.lens.id) for p in pairs}

    def test_zero_gsd_unsatisfiable(self, catalog):
        req = SelectionRequirement(target_w_mm=100.0, target_h_mm=100.0,
                                   gsd_max_mm_px=0.0, working_distance_mm=10000.0)
        assert feasible_pairs(*catalog, req) == []

    def test_filter_soundness(self, catalog):
        # every returned pair must satisfy the constraints when re-checked
        # directly against the raw formulas
        for pair in feasible_pairs(*catalog, DEFECT_REQ):
            d = DEFECT_REQ.working_distance_mm
            fov_w = d * pair.camera.sensor.width_mm / pair.lens.focal_mm
            fov_h = d * pair.camera.sensor.height_mm / pair.lens.focal_mm
            assert fov_w >= DEFECT_REQ.target_w_mm
            assert fov_h >= DEFECT_REQ.target_h_mm
            assert fov_w / pair.camera.sensor.res_w_px <= DEFECT_REQ.gsd_max_mm_px
            assert fov_h / pair.camera.sensor.res_h_px <= DEFECT_REQ.gsd_max_mm_px

    def test_filter_completeness_brute_force(self, catalog):
        cameras, lenses = catalog
        got = {(p.camera.id, p.lens.id) for p in feasible_pairs(cameras, lenses, DRONE_REQ)}
        expected = set()
        d = DRONE_REQ.working_distance_mm
        for cam in cameras:
            for lens in lenses:
                fov_w = d * cam.sensor.width_mm / lens.focal_mm
                fov_h = d * cam.sensor.height_mm / lens.focal_mm
                if (fov_w >= DRONE_REQ.target_w_mm and fov_h >= DRONE_REQ.target_h_mm
                        and fov_w / cam.sensor.res_w_px <= DRONE_REQ.gsd_max_mm_px
                        and fov_h / cam.sensor.res_h_px <= DRONE_REQ.gsd_max_mm_px
                        and cam.shutter is Shutter.GLOBAL):
                    expected.add((cam.id, lens.id))
        assert got == expected

    def test_budget_filter(self, catalog):
        open_req = SelectionRequirement(
            target_w_mm=1000.0, target_h_mm=1000.0, gsd_max_mm_px=50.0,
            working_distance_mm=10000.0)
        capped = SelectionRequirement(
            target_w_mm=1000.0, target_h_mm=1000.0, gsd_max_mm_px=50.0,
            working_distance_mm=10000.0, budget_gbp=Decimal("600"))
        all_pairs = feasible_pairs(*catalog, open_req)
        cheap = feasible_pairs(*catalog, capped)
        assert cheap
        assert len(cheap) < len(all_pairs)
        assert all(p.total_cost_gbp <= 600 for p in cheap)


class TestRankPairs:
    def test_zero_weights_rank_by_cost(self, catalog):
        pairs = feasible_pairs(*catalog, DRONE_REQ)
        weights = ObjectiveWeights(alpha_distortion=0.0, beta_shutter_bonus=0.0,
                                   gamma_fps_penalty=0.0)
        ranked = rank_pairs(pairs, weights)
        costs = [p.total_cost_gbp for p in ranked]
        assert costs == sorted(costs)
        assert all(p.objective == pytest.approx(float(p.total_cost_gbp)) for p in ranked)

    def test_global_shutter_bonus(self, catalog):
        cameras, lenses = catalog
        by_id = {c.id: c for c in cameras}
        # Basler(13) and Lucid(9) share the same sensor; make them otherwise
        # comparable and check the bonus orders a global variant first
        req = SelectionRequirement(target_w_mm=1000.0, target_h_mm=1000.0,
                                   gsd_max_mm_px=50.0, working_distance_mm=10000.0)
        pairs = feasible_pairs([by_id["Basler(13)"], by_id["Basler(16)"]], lenses, req)
        weights = ObjectiveWeights(alpha_distortion=0.0, beta_shutter_bonus=10000.0,
                                   gamma_fps_penalty=0.0)
        ranked = rank_pairs(pairs, weights)
        assert ranked[0].camera.shutter is Shutter.GLOBAL

    def test_fps_penalty_values(self):
        weights = ObjectiveWeights(alpha_distortion=0.0, beta_shutter_bonus=0.0,
                                   gamma_fps_penalty=1.0, fps_band=(20.0, 50.0))
        assert weights.fps_penalty(14.0) == pytest.approx(6.0)
        assert weights.fps_penalty(51.0) == pytest.approx(1.0)
        assert weights.fps_penalty(35.0) == 0.0

    def test_empty_input(self):
        with pytest.raises(EmptyInputError):
            rank_pairs([])

    def test_alpha_monotonicity(self, catalog):
        # two pairs equal in everything but distortion: raising alpha never
        # improves the rank of the wider-field pair
        cameras, lenses = catalog
        by_id = {c.id: c for c in cameras}
        lens_by_id = {l.id: l for l in lenses}
        duo_cams = [by_id["Basler(1)"]]
        duo_lenses = [lens_by_id["Techspec(4)"], lens_by_id["Techspec(5)"]]
        req = SelectionRequirement(target_w_mm=3000.0, target_h_mm=3000.0,
                                   gsd_max_mm_px=50.0, working_distance_mm=18000.0)
        pairs = feasible_pairs(duo_cams, duo_lenses, req)
        assert len(pairs) == 2 and pairs[0].total_cost_gbp == pairs[1].total_cost_gbp
        previous_gap = None
        for alpha in (0.0, 0.5, 1.0, 10.0, 50.0):
            ranked = rank_pairs(pairs, ObjectiveWeights(alpha_distortion=alpha,
                                                        beta_shutter_bonus=0.0,
                                                        gamma_fps_penalty=0.0))
            high_d = max(ranked, key=lambda p: p.fov.distortion)
            low_d = min(ranked, key=lambda p: p.fov.distortion)
            gap = high_d.objective - low_d.objective
            if previous_gap is not None:
                assert gap >= previous_gap - 1e-9
            previous_gap = gap
            if alpha > 0:
                assert ranked[0] is not high_d


class TestSelectBest:
    def test_single_pair_catalog(self, catalog):
        cameras, lenses = catalog
        by_id = {c.id: c for c in cameras}
        lens = {l.id: l for l in lenses}["Techspec(7)"]
        best = select_best([by_id["Allied(7)"]], [lens], DEFECT_REQ)
        assert (best.camera.id, best.lens.id) == ("Allied(7)", "Techspec(7)")

    def test_defect_result_meets_constraints(self, catalog):
        best = select_best(*catalog, DEFECT_REQ)
        assert best.fov.gsd_w_mm_px <= 0.89
        assert best.fov.width_m >= 3.0 and best.fov.height_m >= 3.0

    def test_budget_500_infeasible_with_counts(self, catalog):
        req = SelectionRequirement(
            target_w_mm=3000.0, target_h_mm=3000.0, gsd_max_mm_px=0.89,
            working_distance_mm=18540.0, budget_gbp=Decimal("500"))
        with pytest.raises(NoFeasiblePairError) as excinfo:
            select_best(*catalog, req)
        exc = excinfo.value
        assert exc.total_pairs == 440
        # the cheapest pair (279 + 208 = 487) fits the budget but fails
        # resolution, so the budget constraint is not the only binding one
        assert exc.failed_budget < exc.total_pairs
        assert exc.failed_resolution > 0

    def test_permutation_stability(self, catalog):
        cameras, lenses = catalog
        baseline = select_best(cameras, lenses, DRONE_REQ)
        rng = random.Random(7)
        for _ in range(5):
            cams = list(cameras)
            lns = list(lenses)
            rng.shuffle(cams)
            rng.shuffle(lns)
            shuffled = select_best(cams, lns, DRONE_REQ)
            assert (shuffled.camera.id, shuffled.lens.id) == \
                (baseline.camera.id, baseline.lens.id)
