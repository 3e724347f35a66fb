"""Regenerates the shipped catalog/edge JSON fixtures from the master literals.

Run from the repo root:  python3 scripts/build_data.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mbrank.tensor import MatrixForm  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "src" / "mbrank" / "data"

# genericity codes: S = all three directions, AC = first and third, A = first only,
# NONE = 1-degenerate
TENSORS = [
    # name, rows, generic, end_closed, minimal, self_dual_module, weight override
    ("T_{1,1}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 x1 x0 0 0", "x3 x2 x1 x0 0", "x4 x3 x2 x1 x0"], "S", True, True, True, None),
    ("T_{1,2}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 0 x0 0 0", "x3 0 x2 x0 0", "x4 0 x3 x2 x0"], "AC", True, True, False, None),
    ("T_{1,3}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 0 x0 0 0", "x3 0 x2 x0 0", "x4 x1 x3 x2 x0"], "S", True, True, True, None),
    ("T_{1,4}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 x1 x0 0 0", "x3 0 0 x0 0", "x4 0 0 x3 x0"], "AC", True, True, False, None),
    ("T_{1,5}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 0 x0 0 0", "x3 0 x2 x0 0", "x4 x2 x1 0 x0"], "AC", True, True, False, None),
    ("T_{1,6}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 0 x0 0 0", "x3 0 0 x0 0", "x4 0 0 x3 x0"], "AC", True, True, False, None),
    ("T_{1,7}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 0 x0 0 0", "x3 0 0 x0 0", "x4 0 x3 x2 x0"], "AC", True, True, False, None),
    ("T_{1,8}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 0 x0 0 0", "x3 0 0 x0 0", "x4 x2 x1 x3 x0"], "S", True, True, True, None),
    ("T_{1,9}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 0 x0 0 0", "x3 0 0 x0 0", "x4 0 0 0 x0"], "AC", True, True, False, None),
    ("T_{1,10}", ["x0 0 0 0 0", "0 x0 0 0 0", "0 0 x0 0 0", "0 x1 x3 x0 0", "0 x2 x4 0 x0"], "A", True, True, True, None),
    ("T_{1,11}", ["x0 0 0 0 0", "0 x0 0 0 0", "0 0 x0 0 0", "x2 x3 x4 x0 0", "x1 x2 x3 0 x0"], "A", True, True, False, None),
    ("T_{1,12}", ["x0 0 0 0 0", "0 x0 0 0 0", "0 0 x0 0 0", "x1 0 x4 x0 0", "x2 x3 x1 0 x0"], "A", True, True, False, None),
    ("T_{1,13}", ["x0 0 0 0 0", "0 x0 0 0 0", "0 0 x0 0 0", "x1 0 x4 x0 0", "x2 x3 0 0 x0"], "A", True, True, False, None),
    ("T_{1,14}", ["x0 0 0 0 0", "0 x0 0 0 0", "0 0 x0 0 0", "x1 x4 0 x0 0", "x2 x3 x4 0 x0"], "A", True, True, False, None),
    ("T_{1,15}", ["x0 0 0 0 0", "0 x0 0 0 0", "0 0 x0 0 0", "x1 x3 x4 x0 0", "x2 0 0 0 x0"], "A", True, True, False, None),
    ("T_{1,16}", ["x0 0 0 0 0", "0 x0 0 0 0", "x1 0 x0 0 0", "x3 0 0 x0 0", "x2 x4 x1 0 x0"], "A", True, True, True, None),
    ("T_{1,17}", ["x0 0 0 0 0", "0 x0 0 0 0", "x1 0 x0 0 0", "x3 x1 0 x0 0", "x2 x4 x1 0 x0"], "A", True, True, True, None),
    ("T_{1,18}", ["x0 0 0 0 0", "0 x0 0 0 0", "x1 0 x0 0 0", "x3 x4 0 x0 0", "x2 0 x1 0 x0"], "A", True, True, False, None),
    ("T_{1,19}", ["x0 0 0 0 0", "0 x0 0 0 0", "x1 0 x0 0 0", "x3 x4 0 x0 0", "x2 x3 x1 0 x0"], "A", True, True, True, None),
    ("T_{1,20}", ["x0 0 0 0 0", "0 x0 0 0 0", "x1 0 x0 0 0", "x3 x4 0 x0 0", "0 x2 x1 0 x0"], "A", False, False, True, None),
    ("T_{2,1}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 x1 x0 0 0", "0 0 0 x0+x4 0", "0 0 0 x3 x0+x4"], "S", True, True, True, None),
    ("T_{2,2}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 0 x0 0 0", "0 0 0 x0+x4 0", "0 0 0 x3 x0+x4"], "AC", True, True, False, None),
    ("T_{2,3}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 x1 x0 0 0", "x3 x2 x1 x0 0", "0 0 0 0 x0+x4"], "S", True, True, True, None),
    ("T_{2,4}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 0 x0 0 0", "x3 0 x2 x0 0", "0 0 0 0 x0+x4"], "AC", True, True, False, None),
    ("T_{2,5}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 0 x0 0 0", "x3 x2 x1 x0 0", "0 0 0 0 x0+x4"], "S", True, True, True, None),
    ("T_{2,6}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 0 x0 0 0", "x3 0 0 x0 0", "0 0 0 0 x0+x4"], "AC", True, True, False, None),
    ("T_{2,7}", ["x0 0 0 0 0", "0 x0 0 0 0", "x1 x2 x0 0 0", "x3 -x1 0 x0 0", "0 0 0 0 x0+x4"], "A", True, True, True, None),
    ("T_{2,8}", ["x0 0 0 0 0", "0 x0 0 0 0", "x1 x2 x0 0 0", "x3 0 0 x0 0", "0 0 0 0 x0+x4"], "A", True, True, True, None),
    ("T_{2,9}", ["x0 0 0 0 0", "0 x0 0 0 0", "x1 x2 x0 0 0", "x3 x4 0 x0 0", "0 0 0 0 x0+x4"], "A", False, False, True, None),
    ("T_{3,1}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 x1 x0 0 0", "0 0 0 x0+x3 0", "0 0 0 0 x0+x4"], "S", True, True, True, None),
    ("T_{3,2}", ["x0 0 0 0 0", "x1 x0 0 0 0", "x2 0 x0 0 0", "0 0 0 x0+x3 0", "0 0 0 0 x0+x4"], "AC", True, True, False, None),
    ("T_{3,3}", ["x0 0 0 0 0", "x1 x0 0 0 0", "0 0 x0+x3 0 0", "0 0 x2 x0+x3 0", "0 0 0 0 x0+x4"], "S", True, True, True, None),
    ("T_{4,1}", ["x0 0 0 0 0", "x1 x0 0 0 0", "0 0 x0+x2 0 0", "0 0 0 x0+x3 0", "0 0 0 0 x0+x4"], "S", True, True, True, None),
    ("T_{5,1}", ["x0 0 0 0 0", "0 x0+x1 0 0 0", "0 0 x0+x2 0 0", "0 0 0 x0+x3 0", "0 0 0 0 x0+x4"], "S", True, True, True, None),
    ("T_{O58}", ["x0 0 x1 x2 x4", "x4 x0 x3 -x1 0", "0 0 x0 0 0", "0 0 -x4 x0 0", "0 0 0 x4 0"], "NONE", True, True, None, 1),
    ("T_{O57}", ["x0 0 x1 x2 x4", "0 x0 x3 -x1 0", "0 0 x0 0 0", "0 0 0 x0 0", "0 0 0 x4 0"], "NONE", True, True, None, 3),
    ("T_{~O56}", ["x0 0 x1 x2 x4", "0 x0 0 x3 x4", "0 0 x0 0 0", "0 0 0 x0 0", "0 0 0 x4 0"], "NONE", True, True, None, 3),
    ("T_{O55}", ["x0 0 x1 x2 x4", "0 x0 x4 x3 0", "0 0 x0 0 0", "0 0 0 x0 0", "0 0 0 x4 0"], "NONE", True, True, None, 3),
    ("T_{O54}", ["x0 0 x1 x2 x4", "0 x0 0 x3 0", "0 0 x0 0 0", "0 0 0 x0 0", "0 0 0 x4 0"], "NONE", True, True, None, 3),
    # m = 4
    ("U_{2,3}", ["x0 0 0 0", "x1 x0 0 0", "x2 x1 x0 0", "x3 x2 x1 x0"], "S", True, True, True, None),
    ("U_{2,4}", ["x0 0 0 0", "x1 x0 0 0", "x2 0 x0 0", "x3 0 x2 x0"], "AC", True, True, False, None),
    ("U_{2,5}", ["x0 0 0 0", "x1 x0 0 0", "x2 0 x0 0", "x3 x2 x1 x0"], "S", True, True, True, None),
    ("U_{2,6}", ["x0 0 0 0", "x1 x0 0 0", "x2 0 x0 0", "x3 0 0 x0"], "AC", True, True, False, None),
    ("U_{2,7}", ["x0 0 0 0", "0 x0 0 0", "x1 x2 x0 0", "x3 -x1 0 x0"], "A", True, True, True, None),
    ("U_{2,8}", ["x0 0 0 0", "0 x0 0 0", "x1 x2 x0 0", "x3 0 0 x0"], "A", True, True, True, None),
    ("U_{3,1}", ["x0 0 0 0", "x1 x0 0 0", "x2 x1 x0 0", "0 0 0 x0+x3"], "S", True, True, True, None),
    ("U_{3,2}", ["x0 0 0 0", "x1 x0 0 0", "x2 0 x0 0", "0 0 0 x0+x3"], "AC", True, True, False, None),
    ("U_{3,3}", ["x0 0 0 0", "x1 x0 0 0", "0 0 x0+x3 0", "0 0 x2 x0+x3"], "S", True, True, True, None),
    ("U_{4,1}", ["x0 0 0 0", "x1 x0 0 0", "0 0 x0+x2 0", "0 0 0 x0+x3"], "S", True, True, True, None),
    ("U_{5,1}", ["x0 0 0 0", "0 x0+x1 0 0", "0 0 x0+x2 0", "0 0 0 x0+x3"], "S", True, True, True, None),
    # m = 3
    ("V_{1,1}", ["x0 0 0", "x1 x0 0", "x2 x1 x0"], "S", True, True, True, None),
    ("V_{1,2}", ["x0 0 0", "x1 x0 0", "x2 0 x0"], "AC", True, True, False, None),
    ("V_{2,1}", ["x0 0 0", "x1 x0 0", "0 0 x0+x2"], "S", True, True, True, None),
    ("V_{3,1}", ["x0 0 0", "0 x0+x1 0", "0 0 x0+x2"], "S", True, True, True, None),
    # m = 2
    ("W_{1,1}", ["x0 0", "x1 x0"], "S", True, True, True, None),
    ("W_{2,1}", ["x0 0", "0 x0+x1"], "S", True, True, True, None),
    # m = 1
    ("Z_{1,1}", ["x0"], "S", True, True, True, None),
]

# module presentations independent of the tensor displays
MODULES = [
    {"name": "N_7", "kind": "blocks22", "blocks": [[[1, 0], [0, -1]], [[0, 1], [0, 0]], [[0, 0], [1, 0]]]},
    {"name": "N_8", "kind": "blocks22", "blocks": [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]]]},
    {"name": "M_{16}", "kind": "apolar", "nvars": 4,
     "gens": [{"1": {"y1^2": "1", "y2": "1"}, "2": {"y4": "1"}}, {"1": {"y3": "1"}}]},
    {"name": "M_{17}", "kind": "apolar", "nvars": 4,
     "gens": [{"1": {"y1^2": "1", "y2": "1"}, "2": {"y4": "1"}}, {"1": {"y3": "1"}, "2": {"y1": "1"}}]},
    {"name": "M_{18}", "kind": "apolar", "nvars": 4,
     "gens": [{"1": {"y1^2": "1", "y2": "1"}}, {"1": {"y3": "1"}, "2": {"y4": "1"}}]},
    {"name": "M_{19}", "kind": "apolar", "nvars": 4,
     "gens": [{"1": {"y1^2": "1", "y2": "1"}, "2": {"y3": "1"}}, {"1": {"y3": "1"}, "2": {"y4": "1"}}]},
    {"name": "M_{20}", "kind": "apolar", "nvars": 4,
     "gens": [{"1": {"y1^2": "1"}, "2": {"y2": "1"}}, {"1": {"y3": "1"}, "2": {"y4": "1"}}]},
]

# composite modules: ordered piece descriptors feeding the direct-sum builder
COMPOSITES = {
    "M_{2,1}": ["jordan3", "jordan2"],
    "M_{2,2}": ["fat2", "jordan2"],
    "M_{2,3}": ["jordan4", "point"],
    "M_{2,4}": ["cyc_x2_xy_y3", "point"],
    "M_{2,5}": ["cyc_x2_y2", "point"],
    "M_{2,6}": ["fat3", "point"],
    "M_{2,7}": ["n7", "point"],
    "M_{2,8}": ["n8", "point"],
    "M_{3,1}": ["jordan3", "point", "point"],
    "M_{3,2}": ["fat2", "point", "point"],
    "M_{3,3}": ["jordan2", "jordan2", "point"],
    "M_{4,1}": ["jordan2", "point", "point", "point"],
    "M_{5,1}": ["point", "point", "point", "point", "point"],
}

EDGES_M5 = [
    ("T_{1,11}", "T_{1,12}"), ("T_{1,12}", "T_{1,13}"), ("T_{1,13}", "T_{1,14}"),
    ("T_{1,14}", "T_{1,15}"), ("T_{1,14}", "T_{1,10}"), ("T_{1,19}", "T_{1,18}"),
    ("T_{1,18}", "T_{1,17}"), ("T_{1,17}", "T_{1,16}"), ("T_{1,19}", "T_{1,12}"),
    ("T_{1,18}", "T_{1,13}"), ("T_{1,17}", "T_{1,14}"), ("T_{1,16}", "T_{1,15}"),
    ("T_{1,3}", "T_{1,19}"), ("T_{1,4}", "T_{1,18}"), ("T_{1,5}", "T_{1,17}"),
    ("T_{1,7}", "T_{1,16}"), ("T_{1,6}", "T_{1,15}"), ("T_{1,1}", "T_{1,11}"),
    ("T_{2,7}", "T_{2,8}"), ("T_{1,6}", "T_{1,9}"), ("T_{1,7}", "T_{1,6}"),
    ("T_{1,5}", "T_{1,7}"), ("T_{1,2}", "T_{1,5}"), ("T_{1,8}", "T_{1,7}"),
    ("T_{1,4}", "T_{1,5}"), ("T_{1,3}", "T_{1,4}"), ("T_{1,3}", "T_{1,2}"),
    ("T_{1,3}", "T_{1,8}"), ("T_{1,1}", "T_{1,3}"), ("T_{2,4}", "T_{2,6}"),
    ("T_{2,4}", "T_{1,2}"), ("T_{2,4}", "T_{1,4}"), ("T_{2,4}", "T_{2,8}"),
    ("T_{2,8}", "T_{1,18}"), ("T_{2,7}", "T_{1,19}"), ("T_{2,6}", "T_{1,6}"),
    ("T_{2,5}", "T_{2,4}"), ("T_{3,2}", "T_{2,2}"), ("T_{4,1}", "T_{3,3}"),
    ("T_{5,1}", "T_{4,1}"), ("T_{4,1}", "T_{3,1}"), ("T_{3,3}", "T_{2,1}"),
    ("T_{3,3}", "T_{2,3}"), ("T_{3,1}", "T_{2,1}"), ("T_{3,1}", "T_{2,3}"),
    ("T_{3,1}", "T_{3,2}"), ("T_{2,3}", "T_{2,5}"), ("T_{2,3}", "T_{1,1}"),
    ("T_{2,3}", "T_{2,7}"), ("T_{2,1}", "T_{1,1}"), ("T_{2,2}", "T_{1,2}"),
    ("T_{1,2}", "T_{1,12}"), ("T_{2,5}", "T_{1,3}"), ("T_{3,2}", "T_{2,4}"),
    ("T_{2,1}", "T_{2,2}"), ("T_{1,2}", "T_{1,18}"), ("T_{1,16}", "T_{O54}"),
    ("T_{1,17}", "T_{O55}"), ("T_{1,18}", "T_{~O56}"), ("T_{1,19}", "T_{O57}"),
    ("T_{1,1}", "T_{O58}"), ("T_{1,2}", "T_{O57}"), ("T_{O58}", "T_{O57}"),
    ("T_{O57}", "T_{~O56}"), ("T_{~O56}", "T_{O55}"), ("T_{O55}", "T_{O54}"),
]

NON_EDGES_M5 = [
    ("T_{3,2}", "T_{1,19}", "submodule"),
    ("T_{2,5}", "T_{2,7}", "submodule"),
    ("T_{3,2}", "T_{2,7}", "submodule"),
    ("T_{3,2}", "T_{1,11}", "submodule"),
    ("T_{2,5}", "T_{1,11}", "submodule"),
    ("T_{2,7}", "T_{1,11}", "submodule"),
    ("T_{2,8}", "T_{1,12}", "submodule"),
    ("T_{1,4}", "T_{1,12}", "graded-limit-fixture"),
    ("T_{1,5}", "T_{1,13}", "graded-limit-fixture"),
    ("T_{1,8}", "T_{1,10}", "submodule"),
    ("T_{2,6}", "T_{1,10}", "submodule"),
    ("T_{2,6}", "T_{O54}", "d-invariant"),
    ("T_{1,11}", "T_{O54}", "coordinate-modules"),
    ("T_{3,2}", "T_{O58}", "coordinate-modules"),
    ("T_{2,5}", "T_{O58}", "coordinate-modules"),
    ("T_{2,7}", "T_{O58}", "coordinate-modules"),
    ("T_{2,8}", "T_{O57}", "coordinate-modules"),
    ("T_{1,4}", "T_{O57}", "coordinate-modules"),
    ("T_{1,5}", "T_{~O56}", "coordinate-modules"),
    ("T_{1,8}", "T_{O55}", "d-invariant"),
    ("T_{2,7}", "T_{1,9}", "genericity-pattern"),
    ("T_{3,2}", "T_{1,3}", "genericity-pattern"),
    ("T_{3,2}", "T_{1,8}", "genericity-pattern"),
    ("T_{3,3}", "T_{3,2}", "part-count"),
    ("T_{2,3}", "T_{2,2}", "part-count"),
    ("T_{2,2}", "T_{1,4}", "min-generators"),
]

EDGES_M4 = [
    ("U_{2,7}", "U_{2,8}"), ("U_{2,4}", "U_{2,6}"), ("U_{2,4}", "U_{2,8}"),
    ("U_{2,5}", "U_{2,4}"), ("U_{4,1}", "U_{3,3}"), ("U_{5,1}", "U_{4,1}"),
    ("U_{4,1}", "U_{3,1}"), ("U_{3,3}", "U_{2,3}"), ("U_{3,1}", "U_{2,3}"),
    ("U_{3,1}", "U_{3,2}"), ("U_{2,3}", "U_{2,5}"), ("U_{2,3}", "U_{2,7}"),
    ("U_{3,2}", "U_{2,4}"),
]


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    tensors = []
    for name, rows, gen, endc, minimal, sd, weight in TENSORS:
        form = MatrixForm.from_text(rows)
        entry = {
            "name": name,
            "m": form.m,
            "form": form.to_json(),
            "generic": gen,
            "end_closed": endc,
            "minimal_border_rank": minimal,
            "self_dual_module": sd,
        }
        if weight is not None:
            entry["iso_weight"] = weight
        tensors.append(entry)
    catalog = {
        "version": 1,
        "tensors": tensors,
        "modules": MODULES,
        "composites": COMPOSITES,
    }
    (DATA / "catalog.json").write_text(json.dumps(catalog, indent=1))
    edges = {
        "version": 1,
        "edges_m5": [list(e) for e in EDGES_M5],
        "non_edges_m5": [list(e) for e in NON_EDGES_M5],
        "edges_m4": [list(e) for e in EDGES_M4],
    }
    (DATA / "edges.json").write_text(json.dumps(edges, indent=1))
    print(f"wrote {DATA / 'catalog.json'} ({len(tensors)} tensors)")
    print(f"wrote {DATA / 'edges.json'} ({len(EDGES_M5)} edges, {len(NON_EDGES_M5)} non-edges)")


if __name__ == "__main__":
    main()
