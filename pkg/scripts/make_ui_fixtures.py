"""Freeze server payloads for the UI's scripted-selection tests.

Regenerates frontend/test/fixtures/*.json from the demo dataset via the HTTP
layer, so the UI tests display exactly what the server serves. Run from the
repo root after changing the demo data or the bound logic:

    python scripts/make_ui_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from fpbound.server import create_app
from fpbound.session import build_session

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "frontend" / "test" / "fixtures"

# the three scripted selections: brush rectangle (data coordinates:
# x = log fold change, y = -log10 p), threshold pair, select-all
BRUSH_RECT = {"x0": 0.05, "x1": 0.8, "y0": 1.3, "y1": 12.0}
THRESHOLD = {"fc_above": 0.2, "fc_below": -0.2, "bh_level": 0.05}


def brush_ids(points):
    ids = []
    for pt in points:
        if pt["log_fc"] is None:
            continue
        import math

        y = -math.log10(pt["p"]) if pt["p"] > 0 else float("inf")
        if BRUSH_RECT["x0"] <= pt["log_fc"] <= BRUSH_RECT["x1"] and (
            BRUSH_RECT["y0"] <= y <= BRUSH_RECT["y1"]
        ):
            ids.append(pt["id"])
    return ids


def main() -> None:
    session = build_session(
        data_path=ROOT / "data" / "demo_expression.csv",
        labels_path=ROOT / "data" / "demo_labels.csv",
        alpha=0.1,
        seed=2024,
        n_permutations=100,
        chrom_col="chrom",
    )
    session.ensure_calibration("linear")
    session.ensure_calibration("beta")
    client = TestClient(create_app(session))

    OUT.mkdir(parents=True, exist_ok=True)
    meta = client.get("/api/meta")
    points = client.get("/api/points")
    (OUT / "meta.json").write_bytes(meta.content)
    (OUT / "points.json").write_bytes(points.content)

    point_list = points.json()["points"]
    requests = {
        "brush": {"selection": {"ids": brush_ids(point_list)}, "method": "simes"},
        "threshold": {"selection": THRESHOLD, "method": "calibrated", "template": "linear"},
        "all": {"selection": {}, "method": "calibrated", "template": "linear"},
    }
    # two disjoint halves plus their union, for the superadditivity panel
    requests["union_left"] = {
        "selection": {"indices": list(range(1, 21))},
        "method": "calibrated", "template": "linear",
    }
    requests["union_right"] = {
        "selection": {"indices": list(range(21, 41))},
        "method": "calibrated", "template": "linear",
    }
    requests["union_both"] = {
        "selection": {"indices": list(range(1, 41))},
        "method": "calibrated", "template": "linear",
    }

    scripted = {}
    for name, body in requests.items():
        resp = client.post("/api/bound", json=body)
        resp.raise_for_status()
        scripted[name] = {"request": body, "response": resp.json()}
    (OUT / "scripted_bounds.json").write_text(json.dumps(scripted, indent=1))
    (OUT / "envelope_simes.json").write_bytes(
        client.get("/api/envelope", params={"method": "simes"}).content
    )
    print(f"wrote fixtures to {OUT}")
    for name, entry in scripted.items():
        r = entry["response"]
        print(f"  {name}: size={r['size']} V={r['V']} tp>={r['tp_lower']}")


if __name__ == "__main__":
    main()
