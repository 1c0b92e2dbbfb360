"""
Simplicial (Regge) geometry: hinges, dihedral and deficit angles,
curvature sums and the Gauss-Bonnet check for closed surfaces.

Curvature of an n-dimensional complex concentrates on its (n-2)-faces,
the hinges. A hinge contributes its area A times its deficit angle
epsilon = 2 pi - (sum of the dihedral angles about it).
"""
import math
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from utils.errors import BoundaryHingeError, GeometryError, OpenSurfaceError

logger = logging.getLogger(__name__)

BOUND_TOLERANCE = 1e-12
Face = Tuple[int, ...]


class Convention(str, Enum):
    PAPER = "paper"
    CONTINUUM = "continuum"


@dataclass
class Hinge:
    face: Face
    area: float
    incident: List[int]
    interior: bool
    deficit: Optional[float] = None

    def to_dict(self) -> Dict:
        return {"face": list(self.face), "area": self.area, "incident": self.incident,
                "interior": self.interior, "deficit": self.deficit}


def _gram_embedding(gram: np.ndarray, label: str) -> np.ndarray:
    """Rows of coordinates whose pairwise dot products reproduce ``gram``"""
    eigenvalues, vectors = np.linalg.eigh(gram)
    scale = max(float(np.max(np.abs(eigenvalues))), 1e-300)
    if np.min(eigenvalues) < -1e-12 * scale:
        raise GeometryError(f"{label}: edge lengths violate the triangle inequality")
    return vectors * np.sqrt(np.clip(eigenvalues, 0.0, None))


@dataclass
class SimplicialComplex:
    """
    Top simplices of uniform dimension n in {2, 3, 4}. Geometry comes from
    vertex coordinates in a Euclidean embedding space, or for n <= 3 from
    edge lengths alone.
    """

    simplices: np.ndarray
    vertices: Optional[np.ndarray] = None
    edge_lengths: Optional[Dict[Tuple[int, int], float]] = None
    name: str = ""
    _local: Dict[int, np.ndarray] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        self.simplices = np.asarray(self.simplices, dtype=int)
        if self.simplices.ndim != 2 or len(self.simplices) == 0:
            raise GeometryError("complex needs a non-empty list of top simplices")
        n = self.simplices.shape[1] - 1
        if n not in (2, 3, 4):
            raise GeometryError(f"top simplices must have dimension 2, 3 or 4, got {n}")
        if self.vertices is None and self.edge_lengths is None:
            raise GeometryError("complex needs vertex coordinates or edge lengths")
        if self.vertices is not None:
            self.vertices = np.asarray(self.vertices, dtype=float)
            if self.vertices.ndim != 2 or self.vertices.shape[1] < n:
                raise GeometryError(f"an {n}-complex needs vertices in at least {n} dimensions")
            n_vertices = len(self.vertices)
        else:
            if n > 3:
                raise GeometryError("edge-length input is accepted for n <= 3 only")
            self.edge_lengths = {tuple(sorted(k)): float(v) for k, v in self.edge_lengths.items()}
            n_vertices = int(self.simplices.max()) + 1
        if self.simplices.min() < 0 or self.simplices.max() >= n_vertices:
            raise GeometryError("simplex refers to a vertex that does not exist")
        for k, simplex in enumerate(self.simplices):
            if len(set(simplex.tolist())) != n + 1:
                raise GeometryError(f"simplex {k} {simplex.tolist()} repeats a vertex")
            if _volume(self.local_coordinates(k)) <= 0:
                raise GeometryError(f"simplex {k} {simplex.tolist()} is degenerate (zero volume)")

    @property
    def dimension(self) -> int:
        return self.simplices.shape[1] - 1

    def local_coordinates(self, k: int) -> np.ndarray:
        """Coordinates of the vertices of top simplex k, in simplex order"""
        if k in self._local:
            return self._local[k]
        simplex = self.simplices[k]
        if self.vertices is not None:
            coords = self.vertices[simplex]
        else:
            coords = self._embed_from_lengths(k, simplex)
        self._local[k] = coords
        return coords

    def _embed_from_lengths(self, k: int, simplex: np.ndarray) -> np.ndarray:
        def length(i, j):
            key = tuple(sorted((int(i), int(j))))
            if key not in self.edge_lengths:
                raise GeometryError(f"simplex {k} {simplex.tolist()}: missing length of edge {key}")
            value = self.edge_lengths[key]
            if value <= 0:
                raise GeometryError(f"simplex {k}: edge {key} has non-positive length")
            return value

        n = len(simplex) - 1
        gram = np.zeros((n, n))
        for a in range(n):
            for b in range(n):
                la = length(simplex[0], simplex[a + 1])
                lb = length(simplex[0], simplex[b + 1])
                lab = length(simplex[a + 1], simplex[b + 1]) if a != b else 0.0
                gram[a, b] = 0.5 * (la * la + lb * lb - lab * lab)
        rows = _gram_embedding(gram, f"simplex {k} {simplex.tolist()}")
        return np.vstack([np.zeros(n), rows])

    @cached_property
    def faces_to_tops(self) -> Dict[Face, List[int]]:
        """Every face of dimension n-2 and n-1 with the top simplices containing it"""
        incidence: Dict[Face, List[int]] = {}
        n = self.dimension
        for k, simplex in enumerate(self.simplices):
            for size in (n - 1, n):
                for face in combinations(sorted(simplex.tolist()), size):
                    incidence.setdefault(face, []).append(k)
        return incidence

    @cached_property
    def vertex_count(self) -> int:
        return len(np.unique(self.simplices))

    def euler_characteristic(self) -> int:
        """V - E + F for a 2-complex"""
        if self.dimension != 2:
            raise GeometryError("Euler characteristic is computed for 2-complexes only")
        edges = {face for face in self.faces_to_tops if len(face) == 2}
        return self.vertex_count - len(edges) + len(self.simplices)

    def transformed(self, rotation: np.ndarray, translation: np.ndarray) -> "SimplicialComplex":
        if self.vertices is None:
            raise GeometryError("rigid motions need vertex coordinates")
        moved = self.vertices @ np.asarray(rotation).T + np.asarray(translation)
        return SimplicialComplex(self.simplices.copy(), moved, name=self.name)

    def describe(self) -> Dict:
        return {"name": self.name, "dimension": self.dimension, "vertices": self.vertex_count,
                "top_simplices": len(self.simplices)}


def _volume(coords: np.ndarray) -> float:
    """k-volume of the simplex spanned by the rows of coords"""
    edges = coords[1:] - coords[0]
    k = len(edges)
    if k == 0:
        return 1.0
    gram = edges @ edges.T
    scale = max(float(np.max(np.abs(gram))), 1e-300)
    det = float(np.linalg.det(gram / scale)) * scale ** k
    if det <= 1e-24 * scale ** k:
        return 0.0
    return math.sqrt(det) / math.factorial(k)


def _dihedral(coords: np.ndarray, hinge_rows: Sequence[int], others: Sequence[int]) -> float:
    """Angle about the hinge between the two facets of a simplex that contain it"""
    base = coords[hinge_rows[0]]
    span = np.array([coords[i] - base for i in hinge_rows[1:]]).reshape(-1, coords.shape[1])
    a = coords[others[0]] - base
    b = coords[others[1]] - base
    if len(span):
        q, _ = np.linalg.qr(span.T)
        a = a - q @ (q.T @ a)
        b = b - q @ (q.T @ b)
    a_hat = a / np.linalg.norm(a)
    b_hat = b / np.linalg.norm(b)
    return 2.0 * math.atan2(np.linalg.norm(a_hat - b_hat), np.linalg.norm(a_hat + b_hat))


def _hinge_geometry(complex_: SimplicialComplex, face: Face, k: int) -> Tuple[float, float]:
    """(hinge area, dihedral angle) as seen from top simplex k"""
    simplex = complex_.simplices[k].tolist()
    coords = complex_.local_coordinates(k)
    hinge_rows = [simplex.index(v) for v in face]
    others = [i for i in range(len(simplex)) if simplex[i] not in face]
    area = _volume(coords[hinge_rows])
    return area, _dihedral(coords, hinge_rows, others)


def hinges(complex_: SimplicialComplex) -> List[Hinge]:
    """
    All (n-2)-faces with their areas, incident top simplices and deficit
    angles. A hinge is interior when every facet around it is shared by
    exactly two top simplices; boundary hinges carry no deficit.
    """
    n = complex_.dimension
    incidence = complex_.faces_to_tops
    facets_around: Dict[Face, List[Face]] = {}
    for face in incidence:
        if len(face) == n:
            for hinge_face in combinations(face, n - 1):
                facets_around.setdefault(hinge_face, []).append(face)

    result = []
    for face, tops in sorted(incidence.items()):
        if len(face) != n - 1:
            continue
        interior = all(len(incidence[f]) == 2 for f in facets_around.get(face, []))
        geometry = [_hinge_geometry(complex_, face, k) for k in tops]
        area = geometry[0][0] if n > 2 else 1.0
        if area <= 0:
            raise GeometryError(f"hinge {list(face)} has zero area")
        deficit = 2.0 * math.pi - sum(angle for _, angle in geometry) if interior else None
        result.append(Hinge(face=face, area=area, incident=list(tops), interior=interior, deficit=deficit))
    logger.debug(f"{complex_.name or 'complex'}: {len(result)} hinges, "
                 f"{sum(h.interior for h in result)} interior")
    return result


def deficit_angle(complex_: SimplicialComplex, hinge: Hinge) -> float:
    """2 pi minus the dihedral angles of the incident top simplices"""
    if not hinge.interior:
        raise BoundaryHingeError(f"hinge {list(hinge.face)} lies on the boundary; its deficit is undefined")
    return 2.0 * math.pi - sum(_hinge_geometry(complex_, hinge.face, k)[1] for k in hinge.incident)


def regge_curvature_sum(complex_: SimplicialComplex, convention: str = Convention.PAPER,
                        hinge_list: Optional[List[Hinge]] = None) -> float:
    """Sum of A * epsilon over interior hinges; the continuum convention doubles it"""
    convention = Convention(convention)
    hinge_list = hinge_list if hinge_list is not None else hinges(complex_)
    total = math.fsum(h.area * h.deficit for h in hinge_list if h.interior)
    return 2.0 * total if convention == Convention.CONTINUUM else total


def bound_check(complex_: SimplicialComplex, hinge_list: Optional[List[Hinge]] = None) -> Dict:
    """Largest deficit angle, compared against 2 pi (ok) and also against 4 pi"""
    hinge_list = hinge_list if hinge_list is not None else hinges(complex_)
    deficits = [h.deficit for h in hinge_list if h.interior]
    max_deficit = max(deficits, default=0.0)
    return {
        "max_deficit": max_deficit,
        "ok": max_deficit <= 2.0 * math.pi + BOUND_TOLERANCE,
        "within_4pi": max_deficit <= 4.0 * math.pi + BOUND_TOLERANCE,
        "interior_hinges": len(deficits),
    }


def hinge_report(complex_: SimplicialComplex, hinge_list: Optional[List[Hinge]] = None) -> List[Dict]:
    """Per-hinge A * epsilon against both the 2 pi A and 4 pi A readings of the curvature limit"""
    hinge_list = hinge_list if hinge_list is not None else hinges(complex_)
    rows = []
    for h in hinge_list:
        if not h.interior:
            continue
        rows.append({
            "face": list(h.face),
            "area": h.area,
            "deficit": h.deficit,
            "curvature": h.area * h.deficit,
            "within_2pi": h.deficit <= 2.0 * math.pi + BOUND_TOLERANCE,
            "within_4pi": h.deficit <= 4.0 * math.pi + BOUND_TOLERANCE,
        })
    return rows


def is_closed_surface(complex_: SimplicialComplex) -> bool:
    return complex_.dimension == 2 and all(
        len(tops) == 2 for face, tops in complex_.faces_to_tops.items() if len(face) == 2)


def gauss_bonnet_check(complex_: SimplicialComplex, hinge_list: Optional[List[Hinge]] = None) -> Dict:
    """Sum of vertex deficits against 2 pi chi for a closed 2-complex"""
    if complex_.dimension != 2:
        raise GeometryError("Gauss-Bonnet check needs a 2-complex")
    if not is_closed_surface(complex_):
        raise OpenSurfaceError(f"{complex_.name or 'complex'} is not a closed surface: "
                               f"some edge does not border exactly two triangles")
    hinge_list = hinge_list if hinge_list is not None else hinges(complex_)
    total = math.fsum(h.deficit for h in hinge_list)
    chi = complex_.euler_characteristic()
    expected = 2.0 * math.pi * chi
    return {"sum_deficits": total, "euler_characteristic": chi, "expected": expected,
            "residual": abs(total - expected)}


def analyse(complex_: SimplicialComplex) -> Dict:
    """Full report for one complex"""
    hinge_list = hinges(complex_)
    report = {
        "complex": complex_.describe(),
        "hinges": len(hinge_list),
        "curvature_sum": {
            "paper": regge_curvature_sum(complex_, Convention.PAPER, hinge_list),
            "continuum": regge_curvature_sum(complex_, Convention.CONTINUUM, hinge_list),
        },
        "bound": bound_check(complex_, hinge_list),
        "per_hinge": hinge_report(complex_, hinge_list),
    }
    if is_closed_surface(complex_):
        report["gauss_bonnet"] = gauss_bonnet_check(complex_, hinge_list)
    return report


__all__ = [
    "Convention",
    "Hinge",
    "SimplicialComplex",
    "analyse",
    "bound_check",
    "deficit_angle",
    "gauss_bonnet_check",
    "hinge_report",
    "hinges",
    "is_closed_surface",
    "regge_curvature_sum",
]
