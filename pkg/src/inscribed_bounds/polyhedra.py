"""Sphere-inscribed meshes: generators, volumes, per-face statistics and bound reports.

Mesh JSON format::

    {"vertices": [[x, y, z], ...], "faces": [[i, j, k], ...]}

with 0-based indices and outward (counter-clockwise seen from outside)
orientation.  Vertices within 1e-6 of unit norm are renormalised on load.
"""
from dataclasses import dataclass, field
import itertools
import json
import math

import numpy as np
from scipy.spatial.transform import Rotation

from . import domain
from .bounds import Region, theorem1_bound, uniform_bound
from .errors import (
    DegenerateError, DomainError, NotStarShapedError, ValidationError,
)
from .hull import convex_hull_faces
from .spherical import UNIT_TOL, lhuilier_excess, arc_between

SHAPES = (
    "tetrahedron", "octahedron", "icosahedron", "cube", "bipyramid",
    "rhombic_star_p", "hull_q", "two_tetrahedra",
)


@dataclass(frozen=True)
class SphereMesh:
    vertices: np.ndarray
    faces: tuple

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or len(v) < 3:
            raise ValidationError(f"vertices must be an (n, 3) array, got shape {v.shape}")
        norms = np.linalg.norm(v, axis=1)
        bad = np.nonzero(np.abs(norms - 1.0) > UNIT_TOL)[0]
        if bad.size:
            i = int(bad[0])
            raise ValidationError(f"vertex {i} is not on the unit sphere (norm {norms[i]:.9g})")
        v = v / norms[:, None]
        v.setflags(write=False)
        faces = tuple(tuple(int(i) for i in f) for f in self.faces)
        for k, f in enumerate(faces):
            if len(f) < 3 or len(set(f)) != len(f):
                raise ValidationError(f"face {k} is not a simple polygon: {list(f)}")
            if min(f) < 0 or max(f) >= len(v):
                raise ValidationError(f"face {k} references a missing vertex: {list(f)}")
            if _polygon_area(v[list(f)]) <= 1e-12:
                raise ValidationError(f"face {k} is degenerate (area <= 1e-12)")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", faces)

    @property
    def is_triangular(self):
        return all(len(f) == 3 for f in self.faces)

    def edges(self):
        out = set()
        for f in self.faces:
            for a, b in zip(f, f[1:] + f[:1]):
                out.add((min(a, b), max(a, b)))
        return sorted(out)

    def euler_characteristic(self):
        used = {i for f in self.faces for i in f}
        return len(self.faces) + len(used) - len(self.edges())

    def is_closed(self):
        directed = {}
        for f in self.faces:
            for a, b in zip(f, f[1:] + f[:1]):
                directed[(a, b)] = directed.get((a, b), 0) + 1
        return all(n == 1 and directed.get((b, a)) == 1 for (a, b), n in directed.items())

    def signed_volumes(self):
        """Signed volume of the origin-apex pyramid over every face (fan-triangulated)."""
        v = self.vertices
        out = []
        for f in self.faces:
            total = 0.0
            for i in range(1, len(f) - 1):
                total += float(np.dot(v[f[0]], np.cross(v[f[i]], v[f[i + 1]])))
            out.append(total / 6.0)
        return np.array(out)

    def is_star_shaped(self):
        return bool(np.all(self.signed_volumes() > 0.0))

    def spherical_areas(self):
        v = self.vertices
        out = []
        for f in self.faces:
            out.append(sum(
                _spherical_triangle_area(v[f[0]], v[f[i]], v[f[i + 1]])
                for i in range(1, len(f) - 1)
            ))
        return np.array(out)

    def to_dict(self):
        return {"vertices": self.vertices.tolist(), "faces": [list(f) for f in self.faces]}

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(data["vertices"], data["faces"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed mesh document: {exc}") from None


def load_mesh(fh):
    try:
        data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"mesh is not valid JSON: {exc}") from None
    return SphereMesh.from_dict(data)


def save_mesh(mesh, fh):
    fh.write(mesh.to_json())
    fh.write("\n")


def _polygon_area(pts):
    total = np.zeros(3)
    for i in range(1, len(pts) - 1):
        total += np.cross(pts[i] - pts[0], pts[i + 1] - pts[0])
    return 0.5 * float(np.linalg.norm(total))


def _spherical_triangle_area(A, B, C):
    return lhuilier_excess((arc_between(B, C), arc_between(A, C), arc_between(A, B)))


def _unit(rows):
    a = np.asarray(rows, dtype=float)
    return a / np.linalg.norm(a, axis=1)[:, None]


def tetrahedron_points():
    return _unit([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]])


def cube_points():
    return _unit(list(itertools.product((-1, 1), repeat=3)))


def octahedron_points():
    return np.vstack([np.eye(3), -np.eye(3)])


def icosahedron_points():
    g = (1.0 + math.sqrt(5.0)) / 2.0
    pts = []
    for s1 in (-1, 1):
        for s2 in (-1, 1):
            pts += [[0, s1, s2 * g], [s1, s2 * g, 0], [s2 * g, 0, s1]]
    return _unit(pts)


def bipyramid_points(n):
    if int(n) != n or n < 3:
        raise DomainError(f"bipyramid needs an integer ring size >= 3, got {n!r}")
    ring = [[math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n), 0.0] for k in range(n)]
    return np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]] + ring)


def rhombic_points():
    """Central projection of a rhombic dodecahedron: 6 axis points then 8 cube points."""
    return np.vstack([octahedron_points(), cube_points()])


def rhombic_star_p():
    """Star-shaped, non-convex 24-face polyhedron on the projected rhombic dodecahedron.

    Each rhombus (two axis vertices, two cube vertices) is split along the
    diagonal joining its axis vertices, which has arc length pi/2.
    """
    pts = rhombic_points()
    axes, cubes = range(6), range(6, 14)
    faces = []
    for i, j in itertools.combinations(axes, 2):
        if abs(np.dot(pts[i], pts[j])) > 0.5:
            continue
        for k in cubes:
            if np.dot(pts[k], pts[i]) > 0 and np.dot(pts[k], pts[j]) > 0:
                f = (i, j, k)
                if np.dot(pts[i], np.cross(pts[j], pts[k])) < 0:
                    f = (j, i, k)
                faces.append(f)
    return SphereMesh(pts, sorted(faces))


def convex_hull(points):
    """Convex hull of unit vectors as a :class:`SphereMesh` (unused points are kept, unreferenced)."""
    pts = np.asarray(points, dtype=float)
    return SphereMesh(pts, convex_hull_faces(pts))


def rotation_matrix(axis, angle):
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if n == 0.0:
        raise DomainError("rotation axis must be non-zero")
    return Rotation.from_rotvec(axis / n * angle).as_matrix()


def two_tetrahedra_points(rotation):
    """The regular tetrahedron and its image under ``rotation`` (a 3x3 matrix)."""
    t = tetrahedron_points()
    return np.vstack([t, t @ np.asarray(rotation).T])


def generate(shape, n=None, axis=(0.0, 0.0, 1.0), angle=math.pi / 2):
    """Build one of the named meshes.

    ``n`` is the ring size for ``bipyramid``; ``axis``/``angle`` rotate the
    second tetrahedron of ``two_tetrahedra`` (the default gives the cube).
    """
    shape = shape.replace("-", "_")
    if shape == "tetrahedron":
        return convex_hull(tetrahedron_points())
    if shape == "octahedron":
        return convex_hull(octahedron_points())
    if shape == "icosahedron":
        return convex_hull(icosahedron_points())
    if shape == "cube":
        return convex_hull(cube_points())
    if shape == "bipyramid":
        return convex_hull(bipyramid_points(5 if n is None else n))
    if shape == "rhombic_star_p":
        return rhombic_star_p()
    if shape == "hull_q":
        return convex_hull(rhombic_points())
    if shape == "two_tetrahedra":
        pts = two_tetrahedra_points(rotation_matrix(axis, angle))
        return convex_hull(_dedupe(pts))
    raise ValidationError(f"unknown shape {shape!r}; choose from {', '.join(SHAPES)}")


def _dedupe(pts, tol=1e-9):
    keep = []
    for p in pts:
        if all(np.linalg.norm(p - q) > tol for q in keep):
            keep.append(p)
    return np.array(keep)


def star_volume(mesh):
    vols = mesh.signed_volumes()
    bad = np.nonzero(vols <= 0.0)[0]
    if bad.size:
        raise NotStarShapedError(int(bad[0]), float(vols[bad[0]]))
    return float(vols.sum())


def face_stats(mesh):
    """``FaceStats`` (area, maximal edge arc, region) for every triangular face."""
    if not mesh.is_triangular:
        raise ValidationError("face statistics need a triangular mesh")
    v = mesh.vertices
    out = []
    for k, (i, j, l) in enumerate(mesh.faces):
        A, B, C = v[i], v[j], v[l]
        if abs(np.dot(A, np.cross(B, C))) < 1e-12:
            raise DegenerateError(f"face {k} lies on a great circle (plane through the origin)")
        arcs = (arc_between(B, C), arc_between(A, C), arc_between(A, B))
        tau = lhuilier_excess(arcs)
        out.append(domain.face_stats_for(tau, max(arcs)))
    return out


@dataclass
class MeshReport:
    faces: list
    volume: float
    bound: float = None
    formula: str = None
    note: str = None
    slack: float = field(init=False)

    def __post_init__(self):
        self.slack = None if self.bound is None else self.bound - self.volume

    def to_dict(self):
        return {
            "volume": self.volume,
            "bound": self.bound,
            "slack": self.slack,
            "formula": self.formula,
            "note": self.note,
            "faces": [s.to_dict() for s in self.faces],
        }


def bound_report(mesh):
    """Actual volume against the maximal-edge bound for the mesh's faces."""
    volume = star_volume(mesh)
    stats = face_stats(mesh)
    outside = [k for k, s in enumerate(stats) if s.region is Region.OUTSIDE]
    if outside:
        return MeshReport(stats, volume, note=f"bound not applicable: face {outside[0]} outside D and Dprime")
    fc = domain.classify_faces(stats)
    if not fc.dprime_faces:
        return MeshReport(stats, volume, uniform_bound(fc.f, fc.c_prime), "uniform")
    return MeshReport(stats, volume, theorem1_bound(fc), "theorem1")


def perturb(mesh, movable, radius, rng):
    """Displace the ``movable`` vertices in their tangent planes by at most ``radius``."""
    v = np.array(mesh.vertices)
    for i in movable:
        p = v[i]
        d = rng.standard_normal(3)
        d -= np.dot(d, p) * p
        d *= radius * rng.random() / np.linalg.norm(d)
        q = p + d
        v[i] = q / np.linalg.norm(q)
    return SphereMesh(v, mesh.faces)
