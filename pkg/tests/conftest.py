import json
import warnings

import pytest

from hangarplan.catalog import load_bundled_catalog
from hangarplan.geometry import PerimeterFormat, Polygon, parse_perimeter
from hangarplan.pipeline import ScenarioSpec, load_bundled_outline


@pytest.fixture(scope="session")
def catalog():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cameras, lenses = load_bundled_catalog()
    return cameras, lenses


@pytest.fixture(scope="session")
def outline() -> Polygon:
    return load_bundled_outline()


@pytest.fixture
def unit_square() -> Polygon:
    return Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


TOY_POLYGON_JSON = json.dumps([[0, 0], [6, 0], [6, 6], [0, 6]])

TOY_CAMERAS_CSV = """id,brand,sensor_w_mm,sensor_h_mm,res_w_px,res_h_px,format,mpix,shutter,pixel_um,fps,gige_gbps,price_gbp
Toy(1),Toy,10,10,1000,1000,1in,1.0,global,10,30.0,1.0,100
"""

TOY_LENSES_CSV = """id,description,focal_mm,price_gbp
ToyLens(1),10mm toy lens,10,10
"""

# 6 x 6 m square "aircraft", 3 x 3 m optical footprint at the derived 3 m
# working distance, zero overlap, zero envelope offset
TOY_PRESET = {
    "name": "toy_square",
    "mode": "defect_detection",
    "target_w_mm": 300.0,
    "target_h_mm": 300.0,
    "target_px": 100,
    "coverage_cell_m": [3.0, 3.0],
    "ceiling_height_m": 4.0,
    "target_height_band_m": [0.5, 1.5],
    "velocity_band_m_s": None,
    "overlap_fraction": 0.0,
    "envelope_offset_m": 0.0,
    "coverage_side": "internal",
    "grid_spacing_m": 1.0,
    "bay_m": None,
    "aircraft_length_m": 6.0,
    "budget_gbp": None,
}


@pytest.fixture
def toy_polygon() -> Polygon:
    return parse_perimeter(TOY_POLYGON_JSON, PerimeterFormat.JSON_VERTICES)


@pytest.fixture
def toy_catalog():
    from hangarplan.catalog import load_catalog

    return load_catalog(TOY_CAMERAS_CSV, TOY_LENSES_CSV)


@pytest.fixture
def toy_spec() -> ScenarioSpec:
    return ScenarioSpec.from_json_dict(TOY_PRESET)


@pytest.fixture
def toy_fixture_dir(tmp_path):
    """Directory with a toy catalog, preset, and polygon for CLI runs."""
    catalog_dir = tmp_path / "catalog"
    catalog_dir.mkdir()
    (catalog_dir / "cameras.csv").write_text(TOY_CAMERAS_CSV)
    (catalog_dir / "lenses.csv").write_text(TOY_LENSES_CSV)
    (tmp_path / "toy_preset.json").write_text(json.dumps(TOY_PRESET))
    (tmp_path / "toy_polygon.json").write_text(TOY_POLYGON_JSON)
    return tmp_path
