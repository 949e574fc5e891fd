"""Deterministic incremental 3D convex hull for small point sets.

Points are inserted in input order.  Facets are triangles with outward
orientation; groups of coplanar triangles are re-triangulated as a fan from
their lowest-index vertex so the output depends only on the input order.
Intended for at most a few hundred points.
"""
import numpy as np

from .errors import DegenerateError

PLANE_TOL = 1e-10


def _initial_simplex(pts, tol):
    n = len(pts)
    i0 = 0
    i1 = next((i for i in range(1, n) if np.linalg.norm(pts[i] - pts[i0]) > tol), None)
    if i1 is None:
        raise DegenerateError("all points coincide")
    d = pts[i1] - pts[i0]
    i2 = next(
        (i for i in range(n) if np.linalg.norm(np.cross(d, pts[i] - pts[i0])) > tol), None
    )
    if i2 is None:
        raise DegenerateError("all points are collinear")
    nrm = np.cross(d, pts[i2] - pts[i0])
    nrm /= np.linalg.norm(nrm)
    i3 = next((i for i in range(n) if abs(np.dot(nrm, pts[i] - pts[i0])) > tol), None)
    if i3 is None:
        raise DegenerateError("all points are coplanar")
    return [i0, i1, i2, i3]


class _Hull:
    def __init__(self, pts, tol):
        self.pts = pts
        self.tol = tol
        self.faces = []
        self.normals = []
        self.offsets = []

    def add(self, face):
        a, b, c = (self.pts[i] for i in face)
        nrm = np.cross(b - a, c - a)
        nrm /= np.linalg.norm(nrm)
        self.faces.append(tuple(face))
        self.normals.append(nrm)
        self.offsets.append(float(np.dot(nrm, a)))

    def insert(self, k):
        p = self.pts[k]
        dist = np.asarray(self.normals) @ p - np.asarray(self.offsets)
        visible = dist > self.tol
        if not visible.any():
            return
        edges = {}
        for idx in np.nonzero(visible)[0]:
            a, b, c = self.faces[idx]
            for e in ((a, b), (b, c), (c, a)):
                edges[e] = True
        horizon = [e for e in edges if (e[1], e[0]) not in edges]
        keep = ~visible
        self.faces = [f for f, k_ in zip(self.faces, keep) if k_]
        self.normals = [f for f, k_ in zip(self.normals, keep) if k_]
        self.offsets = [f for f, k_ in zip(self.offsets, keep) if k_]
        for a, b in horizon:
            self.add((a, b, k))


def _retriangulate_coplanar(pts, faces, normals, offsets, tol):
    n = len(faces)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    edge_face = {}
    for fi, (a, b, c) in enumerate(faces):
        for e in ((a, b), (b, c), (c, a)):
            edge_face[e] = fi
    for (a, b), fi in edge_face.items():
        fj = edge_face.get((b, a))
        if fj is None or fj <= fi:
            continue
        if np.linalg.norm(normals[fi] - normals[fj]) < tol and abs(offsets[fi] - offsets[fj]) < tol:
            ri, rj = find(fi), find(fj)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)

    groups = {}
    for fi in range(n):
        groups.setdefault(find(fi), []).append(fi)

    out = []
    for root in sorted(groups):
        members = groups[root]
        if len(members) == 1:
            out.append(faces[members[0]])
            continue
        directed = set()
        for fi in members:
            a, b, c = faces[fi]
            directed.update(((a, b), (b, c), (c, a)))
        boundary = {a: b for (a, b) in directed if (b, a) not in directed}
        start = min(boundary)
        cycle = [start]
        nxt = boundary[start]
        while nxt != start:
            cycle.append(nxt)
            nxt = boundary[nxt]
        nrm = normals[root]
        for i in range(1, len(cycle) - 1):
            tri = (cycle[0], cycle[i], cycle[i + 1])
            a, b, c = (pts[j] for j in tri)
            if np.dot(np.cross(b - a, c - a), nrm) > tol:
                out.append(tri)
    return out


def convex_hull_faces(points, tol=PLANE_TOL):
    """Outward-oriented triangular facets (index triples) of the convex hull of ``points``."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 4:
        raise DegenerateError("need at least 4 points in 3 dimensions")
    init = _initial_simplex(pts, tol)
    i0, i1, i2, i3 = init
    hull = _Hull(pts, tol)
    if np.dot(np.cross(pts[i1] - pts[i0], pts[i2] - pts[i0]), pts[i3] - pts[i0]) > 0:
        i1, i2 = i2, i1
    for f in ((i0, i1, i2), (i0, i3, i1), (i1, i3, i2), (i2, i3, i0)):
        hull.add(f)
    chosen = set(init)
    for k in range(len(pts)):
        if k not in chosen:
            hull.insert(k)
    return _retriangulate_coplanar(pts, hull.faces, hull.normals, hull.offsets, 1e-9)


def hull_volume(points, faces=None):
    """Volume of the hull of ``points`` as a sum of origin-apex tetrahedra."""
    pts = np.asarray(points, dtype=float)
    if faces is None:
        faces = convex_hull_faces(pts)
    f = np.asarray(faces)
    return float(np.einsum("ij,ij->i", pts[f[:, 0]], np.cross(pts[f[:, 1]], pts[f[:, 2]])).sum()) / 6.0


def hull_volume_gradient(points, faces):
    """Gradient of :func:`hull_volume` with respect to every point, facets held fixed."""
    pts = np.asarray(points, dtype=float)
    grad = np.zeros_like(pts)
    f = np.asarray(faces)
    a, b, c = pts[f[:, 0]], pts[f[:, 1]], pts[f[:, 2]]
    np.add.at(grad, f[:, 0], np.cross(b, c))
    np.add.at(grad, f[:, 1], np.cross(c, a))
    np.add.at(grad, f[:, 2], np.cross(a, b))
    return grad / 6.0
