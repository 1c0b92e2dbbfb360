import math

import numpy as np
import pytest

from parsers import ComplexParser
from regge import (
    Convention,
    SimplicialComplex,
    analyse,
    bound_check,
    deficit_angle,
    gauss_bonnet_check,
    hinges,
    regge_curvature_sum,
)
from regge import meshes
from utils.errors import BoundaryHingeError, GeometryError, OpenSurfaceError, ScenarioValidationError


def test_flat_grid_has_no_curvature():
    grid = meshes.flat_grid(4, 4)
    interior = [h for h in hinges(grid) if h.interior]
    assert len(interior) == 9
    for hinge in interior:
        assert abs(hinge.deficit) < 1e-12
    assert abs(regge_curvature_sum(grid)) < 1e-12


@pytest.mark.parametrize("builder", [meshes.icosahedron, meshes.cube_surface])
def test_closed_convex_surfaces_sum_to_4pi(builder):
    surface = builder()
    assert regge_curvature_sum(surface) == pytest.approx(4.0 * math.pi, abs=1e-12)


def test_icosahedron_vertex_deficits(icosahedron):
    for hinge in hinges(icosahedron):
        assert hinge.deficit == pytest.approx(math.pi / 3.0, abs=1e-12)


def test_five_simplex_boundary_deficit():
    boundary = meshes.simplex_boundary(4)
    expected = 2.0 * math.pi - 3.0 * math.acos(0.25)
    hinge_list = hinges(boundary)
    # every triangle of the 6 vertices is a hinge
    assert len(hinge_list) == 20
    for hinge in hinge_list:
        assert hinge.interior
        assert hinge.deficit == pytest.approx(expected, abs=1e-12)
        assert deficit_angle(boundary, hinge) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("surface", [
    meshes.icosahedron(),
    meshes.cube_surface(),
    meshes.icosphere(2),
    meshes.clifford_torus(8, 8),
])
def test_gauss_bonnet(surface):
    check = gauss_bonnet_check(surface)
    assert check["residual"] < 1e-12


def test_torus_is_flat():
    check = gauss_bonnet_check(meshes.clifford_torus(6, 6))
    assert check["euler_characteristic"] == 0
    assert abs(check["sum_deficits"]) < 1e-12


def test_boundary_hinge_has_no_deficit():
    glued = meshes.two_tetrahedra()
    boundary = [h for h in hinges(glued) if not h.interior]
    assert boundary
    with pytest.raises(BoundaryHingeError):
        deficit_angle(glued, boundary[0])


def test_open_surface_rejected():
    with pytest.raises(OpenSurfaceError):
        gauss_bonnet_check(meshes.single_triangle())


def test_continuum_convention_doubles(icosahedron):
    paper = regge_curvature_sum(icosahedron, Convention.PAPER)
    assert regge_curvature_sum(icosahedron, "continuum") == pytest.approx(2.0 * paper)


def test_bound_check_within_2pi(icosahedron):
    check = bound_check(icosahedron)
    assert check["ok"]
    assert check["within_4pi"]
    assert check["interior_hinges"] == 12
    assert check["max_deficit"] == pytest.approx(math.pi / 3.0)


def test_edge_lengths_match_coordinates(icosahedron):
    lengths = {}
    for simplex in icosahedron.simplices:
        for i in range(3):
            for j in range(i + 1, 3):
                a, b = sorted((int(simplex[i]), int(simplex[j])))
                lengths[(a, b)] = float(np.linalg.norm(icosahedron.vertices[a] - icosahedron.vertices[b]))
    from_lengths = SimplicialComplex(icosahedron.simplices, edge_lengths=lengths)
    for left, right in zip(hinges(from_lengths), hinges(icosahedron)):
        assert left.face == right.face
        assert left.deficit == pytest.approx(right.deficit, abs=1e-12)


def test_edge_lengths_violating_triangle_inequality():
    with pytest.raises(GeometryError):
        SimplicialComplex([[0, 1, 2]], edge_lengths={(0, 1): 1.0, (1, 2): 1.0, (0, 2): 3.0})


def test_degenerate_simplex_rejected():
    with pytest.raises(GeometryError):
        SimplicialComplex([[0, 1, 2]], [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])


def test_rigid_motion_invariance():
    rng = np.random.default_rng(5)
    sphere = meshes.icosphere(1)
    rotation, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    moved = sphere.transformed(rotation, rng.normal(size=3) * 10.0)
    for left, right in zip(hinges(sphere), hinges(moved)):
        assert left.deficit == pytest.approx(right.deficit, abs=1e-12)


def test_analyse_report_keys(icosahedron):
    report = analyse(icosahedron)
    assert report["complex"]["vertices"] == 12
    assert report["curvature_sum"]["continuum"] == pytest.approx(8.0 * math.pi)
    assert report["gauss_bonnet"]["euler_characteristic"] == 2
    assert len(report["per_hinge"]) == 12


def test_unknown_mesh():
    with pytest.raises(ValueError):
        meshes.build("klein-bottle")


def test_parse_off(tmp_path):
    path = tmp_path / "tetra.off"
    path.write_text(
        "OFF\n"
        "# regular tetrahedron surface\n"
        "4 4 6\n"
        "1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n"
        "3 0 1 2\n3 0 3 1\n3 0 2 3\n3 1 3 2\n",
        encoding="utf-8",
    )
    surface = ComplexParser().load(path)
    assert surface.dimension == 2
    assert regge_curvature_sum(surface) == pytest.approx(4.0 * math.pi, abs=1e-12)


def test_parse_off_reports_line(tmp_path):
    path = tmp_path / "broken.off"
    path.write_text("OFF\n3 1 3\n0 0 0\n1 x 0\n0 1 0\n3 0 1 2\n", encoding="utf-8")
    with pytest.raises(ScenarioValidationError) as info:
        ComplexParser().load(path)
    assert info.value.line == 4


def test_parse_json_edge_lengths(tmp_path):
    path = tmp_path / "triangle.json"
    path.write_text('{"simplices": [[0, 1, 2]], "edge_lengths": [[0, 1, 3], [1, 2, 4], [0, 2, 5]]}',
                    encoding="utf-8")
    triangle = ComplexParser().load(path)
    assert triangle.name == "triangle"
    assert all(not h.interior for h in hinges(triangle))


def test_parse_json_syntax_error_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "simplices": [[0, 1, 2]],\n  "vertices": [[0, 0], oops]\n}', encoding="utf-8")
    with pytest.raises(ScenarioValidationError) as info:
        ComplexParser().load(path)
    assert info.value.line == 3
