import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from orishell import io
from orishell.benchmarks import AnnulusParams, gen_annulus_sector, gen_cantilever, gen_miura_unit
from orishell.benchmarks.miura import LABELS
from orishell.benchmarks.qualitative import full_annulus, miura_sheet
from orishell.errors import ParseError, ValidationError

SCENES = Path(__file__).resolve().parents[1] / "scenes"


def normalized(scene):
    return json.loads(json.dumps(io.scene_to_dict(scene)))


def one_quad_doc():
    return json.loads((SCENES / "one_quad.scene").read_text())


def write_doc(tmp_path, doc):
    p = tmp_path / "s.scene"
    p.write_text(json.dumps(doc))
    return p


def test_one_quad_scene_has_24_dofs():
    scene = io.parse_scene(SCENES / "one_quad.scene")
    assert scene.model.total_dofs == 24
    assert scene.solver.max_increments == 2


def test_shipped_miura_scene_boundary_conditions():
    scene = io.parse_scene(SCENES / "miura_unit.scene")
    dm = scene.model.dofmap
    bcs = scene.boundary_conditions()
    n = LABELS
    # O pinned; x fixed at A, B; z fixed at O, B, C, D, E, G; x prescribed at E, F, G
    fixed = set(dm.trans[n["O"]].tolist()) | {dm.trans[n[k], 0] for k in "AB"} | {dm.trans[n[k], 2] for k in "BCDEG"}
    assert set(bcs.fixed.tolist()) == fixed
    assert sorted(bcs.prescribed.tolist()) == sorted(dm.trans[[n[k] for k in "EFG"], 0].tolist())
    assert np.all(bcs.prescribed_values == -3.44)


@pytest.mark.parametrize(
    "make",
    [
        gen_miura_unit,
        lambda: gen_annulus_sector(AnnulusParams(n=8, m=2)),
        gen_cantilever,
        lambda: full_annulus(n=16, m=2, theta_R=1.2),
        lambda: miura_sheet(cells=(2, 2)),
    ],
)
def test_round_trip(tmp_path, make):
    scene = make()
    back = io.parse_scene(io.serialize(scene, tmp_path / "x.scene"))
    assert normalized(back) == normalized(scene)
    assert back.model.total_dofs == scene.model.total_dofs


def test_inverted_barriers(tmp_path):
    doc = json.loads((SCENES / "miura_unit.scene").read_text())
    doc["creases"][0].update(theta_L=0.5, theta_R=0.2)
    with pytest.raises(ValidationError, match="θL ≤ θR required"):
        io.parse_scene(write_doc(tmp_path, doc))


def test_missing_file():
    with pytest.raises(ParseError, match="file not found"):
        io.parse_scene("no/such.scene")


def test_syntax_error_has_location(tmp_path):
    p = tmp_path / "bad.scene"
    p.write_text('{\n "nodes": [[0, 0, 0],\n ]\n}')
    with pytest.raises(ParseError, match=r"bad\.scene:3:\d+"):
        io.parse_scene(p)


@pytest.mark.parametrize(
    "edit, field",
    [
        (lambda d: d.pop("material"), "scene.material"),
        (lambda d: d["material"].update(nu=0.7), "material.nu"),
        (lambda d: d["nodes"][0].append(1.0), "nodes[0]"),
        (lambda d: d["elements"][0].update(nodes=[0, 1, 2]), "elements[0].nodes"),
        (lambda d: d["bcs"][0].update(dofs=["q"]), "bcs[0].dofs"),
        (lambda d: d["forces"][0].update(value="x"), "forces[0].value"),
        (lambda d: d["solver"].update(warp=1), "solver.warp"),
        (lambda d: d["outputs"].update(every=0), "outputs.every"),
        (lambda d: d["forces"][0].update(nodes=[9]), "node id 9"),
    ],
)
def test_validation_names_field(tmp_path, edit, field):
    doc = one_quad_doc()
    edit(doc)
    with pytest.raises(ValidationError, match=field.replace("[", r"\[").replace("]", r"\]").replace(".", r"\.")):
        io.parse_scene(write_doc(tmp_path, doc))


def test_double_prescription_rejected(tmp_path):
    doc = one_quad_doc()
    doc["prescribed"] = [{"nodes": [1], "dof": "u", "value": 0.1}, {"nodes": [1], "dof": "u", "value": 0.2}]
    with pytest.raises(ValidationError):
        io.parse_scene(write_doc(tmp_path, doc)).boundary_conditions()


def test_snapshot_of_undeformed_quad(tmp_path):
    scene = io.parse_scene(SCENES / "one_quad.scene")
    path = io.write_snapshot(scene, np.zeros(24), 7, tmp_path)
    assert path.name == "step_0007.vtk"
    text = path.read_text()
    assert text.startswith("# vtk DataFile Version 3.0\n")
    pts, cells, types = io.read_vtk_points(path)
    assert pts.shape == (4, 3) and np.array_equal(pts, scene.nodes)
    assert cells.tolist() == [[0, 1, 2, 3]] and types.tolist() == [9]
    disp = text.split("VECTORS displacement double\n")[1].split()
    assert [float(v) for v in disp] == [0.0] * 12
    assert "SCALARS panel_id int 1" in text and "SCALARS bending_energy_density double 1" in text


@given(hnp.arrays(float, (4, 3), elements=st.floats(-1e3, 1e3, allow_nan=False)))
def test_snapshot_round_trip_exact(tmp_path_factory, disp):
    scene = io.parse_scene(SCENES / "one_quad.scene")
    U = np.zeros(24)
    U[scene.model.dofmap.trans] = disp
    d = tmp_path_factory.mktemp("vtk")
    pts, _, _ = io.read_vtk_points(io.write_snapshot(scene, U, 0, d))
    assert np.array_equal(pts, scene.nodes + disp)


def test_curves_reject_non_finite(tmp_path):
    row = {"P": 1.0, "u_tip": math.nan, "w_tip": 0.0, "u_oracle": 0.0, "w_oracle": 0.0}
    with pytest.raises(io.IoError):
        io.write_curves([row], "cantilever", tmp_path / "c.csv")


def test_curves_round_trip(tmp_path):
    rows = [{"P": float(i), "u_tip": -0.1 * i, "w_tip": 1 / 3 * i, "u_oracle": 0.0, "w_oracle": 1e-300} for i in range(4)]
    header, data = io.read_curves(io.write_curves(rows, "cantilever", tmp_path / "c.csv"))
    assert header == io.CURVE_COLUMNS["cantilever"]
    assert np.array_equal(data, np.array([[r[c] for c in header] for r in rows]))


def test_unknown_curve_kind(tmp_path):
    with pytest.raises(io.IoError):
        io.write_curves([], "teaser", tmp_path / "t.csv")
