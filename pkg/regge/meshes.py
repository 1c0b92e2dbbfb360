"""
Reference complexes with known curvature.
"""
import math
from itertools import combinations
from typing import Dict, List, Tuple

import numpy as np

from regge import SimplicialComplex

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def single_triangle() -> SimplicialComplex:
    vertices = [[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]]
    return SimplicialComplex([[0, 1, 2]], vertices, name="triangle")


def two_tetrahedra() -> SimplicialComplex:
    """Two regular tetrahedra glued along the face (0, 1, 2)"""
    base = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0]]
    apex = [-1.0, -1.0, 1.0]
    centre = np.mean(base, axis=0)
    mirrored = (2.0 * centre - np.array(apex)).tolist()
    return SimplicialComplex([[0, 1, 2, 3], [0, 1, 2, 4]], base + [apex, mirrored], name="two-tetrahedra")


def icosahedron() -> SimplicialComplex:
    g = GOLDEN
    vertices = [
        [-1, g, 0], [1, g, 0], [-1, -g, 0], [1, -g, 0],
        [0, -1, g], [0, 1, g], [0, -1, -g], [0, 1, -g],
        [g, 0, -1], [g, 0, 1], [-g, 0, -1], [-g, 0, 1],
    ]
    faces = [
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ]
    return SimplicialComplex(faces, np.array(vertices, dtype=float), name="icosahedron")


def cube_surface() -> SimplicialComplex:
    """Unit cube boundary, each square face cut along one diagonal"""
    vertices = [[x, y, z] for x in (0.0, 1.0) for y in (0.0, 1.0) for z in (0.0, 1.0)]
    index = {tuple(v): i for i, v in enumerate(vertices)}
    faces = []
    for axis in range(3):
        for side in (0.0, 1.0):
            corners = []
            for a, b in ((0, 0), (1, 0), (1, 1), (0, 1)):
                point = [0.0, 0.0, 0.0]
                others = [i for i in range(3) if i != axis]
                point[axis] = side
                point[others[0]] = float(a)
                point[others[1]] = float(b)
                corners.append(index[tuple(point)])
            faces.append([corners[0], corners[1], corners[2]])
            faces.append([corners[0], corners[2], corners[3]])
    return SimplicialComplex(faces, vertices, name="cube")


def _grid_triangles(m: int, n: int, wrap: bool) -> List[List[int]]:
    def vid(i, j):
        if wrap:
            return (i % m) * n + (j % n)
        return i * (n + 1) + j

    triangles = []
    for i in range(m):
        for j in range(n):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            triangles.append([a, b, c])
            triangles.append([a, c, d])
    return triangles


def flat_grid(m: int = 4, n: int = 4, spacing: float = 1.0) -> SimplicialComplex:
    """m x n squares of the plane, each split into two triangles"""
    vertices = [[i * spacing, j * spacing] for i in range(m + 1) for j in range(n + 1)]
    return SimplicialComplex(_grid_triangles(m, n, wrap=False), vertices, name=f"flat-grid-{m}x{n}")


def clifford_torus(m: int = 8, n: int = 8) -> SimplicialComplex:
    """Flat torus (cos u, sin u, cos v, sin v)/sqrt(2) in R^4 on an m x n grid"""
    if m < 3 or n < 3:
        raise ValueError("torus grid needs at least 3 x 3 vertices")
    vertices = []
    for i in range(m):
        u = 2.0 * math.pi * i / m
        for j in range(n):
            v = 2.0 * math.pi * j / n
            vertices.append([math.cos(u), math.sin(u), math.cos(v), math.sin(v)])
    vertices = np.array(vertices) / math.sqrt(2.0)
    return SimplicialComplex(_grid_triangles(m, n, wrap=True), vertices, name=f"torus-{m}x{n}")


def icosphere(refinement: int = 0) -> SimplicialComplex:
    """Icosahedron with each triangle split into four ``refinement`` times, projected to the unit sphere"""
    if refinement < 0:
        raise ValueError("refinement must be non-negative")
    base = icosahedron()
    vertices = [v / np.linalg.norm(v) for v in base.vertices]
    faces = base.simplices.tolist()
    for _ in range(refinement):
        midpoints: Dict[Tuple[int, int], int] = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in midpoints:
                point = vertices[i] + vertices[j]
                vertices.append(point / np.linalg.norm(point))
                midpoints[key] = len(vertices) - 1
            return midpoints[key]

        refined = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            refined += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
        faces = refined
    return SimplicialComplex(faces, np.array(vertices), name=f"icosphere-{refinement}")


def simplex_boundary(n: int = 4) -> SimplicialComplex:
    """Boundary of the regular (n+1)-simplex: n+2 vertices at the unit vectors of R^(n+2)"""
    vertices = np.eye(n + 2)
    tops = [list(face) for face in combinations(range(n + 2), n + 1)]
    return SimplicialComplex(tops, vertices, name=f"{n + 1}-simplex-boundary")


BUILDERS = {
    "triangle": single_triangle,
    "two-tetrahedra": two_tetrahedra,
    "icosahedron": icosahedron,
    "cube": cube_surface,
    "flat-grid": flat_grid,
    "torus": clifford_torus,
    "icosphere": icosphere,
    "simplex-boundary": simplex_boundary,
}


def build(name: str, **params) -> SimplicialComplex:
    if name not in BUILDERS:
        raise ValueError(f"unknown mesh '{name}' (expected one of: {', '.join(sorted(BUILDERS))})")
    return BUILDERS[name](**params)
