"""The UI's frozen fixtures stay pinned to the live server.

The frontend tests assert the DOM shows exactly these fixture payloads; this
module asserts the running server still produces them, and the server tests
pin the server to the CLI. Together: UI display == server == CLI.
"""

import json
import math
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from fpbound.server import create_app
from fpbound.session import build_session
from conftest import DATA, REPO

FIXTURES = REPO / "frontend" / "test" / "fixtures"

pytestmark = pytest.mark.skipif(
    not FIXTURES.exists(), reason="frontend fixtures not generated"
)


@pytest.fixture(scope="module")
def client():
    session = build_session(
        data_path=DATA / "demo_expression.csv",
        labels_path=DATA / "demo_labels.csv",
        alpha=0.1,
        seed=2024,
        n_permutations=100,
        chrom_col="chrom",
    )
    session.ensure_calibration("linear")
    session.ensure_calibration("beta")
    return TestClient(create_app(session))


def load(name: str):
    return json.loads((FIXTURES / name).read_text())


def test_meta_fixture_current(client):
    assert client.get("/api/meta").content == (FIXTURES / "meta.json").read_bytes()


def test_points_fixture_current(client):
    assert client.get("/api/points").content == (FIXTURES / "points.json").read_bytes()


def test_envelope_fixture_current(client):
    live = client.get("/api/envelope", params={"method": "simes"}).content
    assert live == (FIXTURES / "envelope_simes.json").read_bytes()


def test_scripted_bounds_current(client):
    scripted = load("scripted_bounds.json")
    assert set(scripted) == {"brush", "threshold", "all",
                             "union_left", "union_right", "union_both"}
    for name, entry in scripted.items():
        live = client.post("/api/bound", json=entry["request"])
        assert live.status_code == 200, name
        assert live.json() == entry["response"], name


def test_brush_fixture_geometry():
    """The frozen brush ids are exactly the points inside the scripted rectangle."""
    rect = {"x0": 0.05, "x1": 0.8, "y0": 1.3, "y1": 12.0}
    points = load("points.json")["points"]
    expected = []
    for pt in points:
        if pt["log_fc"] is None:
            continue
        y = -math.log10(pt["p"]) if pt["p"] > 0 else 320.0
        if rect["x0"] <= pt["log_fc"] <= rect["x1"] and rect["y0"] <= y <= rect["y1"]:
            expected.append(pt["id"])
    scripted = load("scripted_bounds.json")
    assert scripted["brush"]["request"]["selection"]["ids"] == expected


def test_superadditivity_in_fixtures():
    scripted = load("scripted_bounds.json")
    left = scripted["union_left"]["response"]["tp_lower"]
    right = scripted["union_right"]["response"]["tp_lower"]
    union = scripted["union_both"]["response"]["tp_lower"]
    assert union >= left + right


def test_envelope_last_row_equals_select_all(client):
    env = load("envelope_simes.json")
    body = client.post("/api/bound", json={"selection": {}, "method": "simes"}).json()
    assert env["k"][-1] == body["size"]
    assert env["tp_lower"][-1] == body["tp_lower"]
    assert env["V"][-1] == body["V"]
