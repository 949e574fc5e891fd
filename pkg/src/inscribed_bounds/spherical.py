"""Spherical and chordal triangle primitives on the unit sphere.

A face of an inscribed polyhedron is seen two ways: as the planar (chordal)
triangle spanned by three unit vectors, and as its central projection, the
spherical triangle with arc-length sides.  This module converts between the
two descriptions and evaluates the quantities the volume bounds are built
from: spherical excess, facial-pyramid altitude and volume, and the
"central angles" of the planar triangle.

All angles are radians.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DegenerateError, DomainError, ValidationError

UNIT_TOL = 1e-6
# disagreement allowed between the closed-form tau and L'Huilier's formula
TAU_CHECK_TOL = 1e-8


def arc_to_chord(arc):
    """Chord length subtending a great-circle arc: ``2 sin(arc/2)``."""
    if not 0.0 < arc < math.pi:
        raise DomainError(f"arc must lie in (0, pi), got {arc!r}")
    return 2.0 * math.sin(arc / 2.0)


def chord_to_arc(chord):
    if not 0.0 < chord < 2.0:
        raise DomainError(f"chord must lie in (0, 2), got {chord!r}")
    return 2.0 * math.asin(chord / 2.0)


def arc_between(p, q):
    """Great-circle distance between two unit vectors (atan2 form, stable near 0 and pi)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return math.atan2(float(np.linalg.norm(np.cross(p, q))), float(np.dot(p, q)))


@dataclass(frozen=True)
class SphericalTriangle:
    """Spherical triangle given by its side arcs, stored sorted ``a <= b <= c``."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        a, b, c = sorted(float(x) for x in (self.a, self.b, self.c))
        if not (0.0 < a and c < math.pi):
            raise DomainError(f"sides must lie in (0, pi): {(a, b, c)}")
        if a + b + c >= 2.0 * math.pi:
            raise DomainError(f"perimeter must be below 2 pi: {(a, b, c)}")
        if c >= a + b:
            raise DomainError(f"triangle inequality violated: {(a, b, c)}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_vertices(cls, A, B, C):
        return cls(arc_between(B, C), arc_between(A, C), arc_between(A, B))

    @property
    def area(self):
        return lhuilier_excess(self)


def lhuilier_excess(t):
    """Spherical area of a triangle from its sides (L'Huilier's formula).

    Accepts a :class:`SphericalTriangle` or a plain ``(a, b, c)`` triple.
    """
    if isinstance(t, SphericalTriangle):
        a, b, c = t.a, t.b, t.c
    else:
        a, b, c = t
    s = (a + b + c) / 4.0
    factors = (
        math.tan(s),
        math.tan((-a + b + c) / 4.0),
        math.tan((a - b + c) / 4.0),
        math.tan((a + b - c) / 4.0),
    )
    if min(factors) <= 0.0:
        raise DegenerateError(f"degenerate spherical triangle with sides {(a, b, c)}")
    return 4.0 * math.atan(math.sqrt(factors[0] * factors[1] * factors[2] * factors[3]))


def isosceles_excess(a, c):
    """Area of the isosceles spherical triangle with legs ``a`` and base ``c``."""
    sa = math.sin(a / 2.0) ** 2
    sc = math.sin(c / 4.0) ** 2
    num = sa - sc
    den = 1.0 - sa - sc
    if num <= 0.0 or den <= 0.0:
        raise DomainError(f"no isosceles triangle with legs {a!r} and base {c!r}")
    return 4.0 * math.atan(math.tan(c / 4.0) * math.sqrt(num / den))


def _as_unit(v):
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValidationError(f"expected a 3-vector, got shape {v.shape}")
    n = float(np.linalg.norm(v))
    if abs(n - 1.0) > UNIT_TOL:
        raise ValidationError(f"vertex {v.tolist()} is not on the unit sphere (norm {n})")
    return v / n


def _corner_angle(p, q, r):
    """Planar angle at ``p`` in triangle ``pqr``."""
    u = q - p
    w = r - p
    return math.atan2(float(np.linalg.norm(np.cross(u, w))), float(np.dot(u, w)))


@dataclass(frozen=True)
class ChordalTriangle:
    """Planar triangle with vertices on the unit sphere.

    ``chords`` are ordered opposite to the vertices, ``(|BC|, |CA|, |AB|)``, and
    ``angles`` are the interior angles at ``A, B, C``.  ``altitude`` is the
    distance from the origin to the face plane, ``orientation`` the sign of
    ``det(A, B, C)``.
    """

    vertices: np.ndarray = field(repr=False)
    chords: tuple
    circumradius: float
    altitude: float
    angles: tuple
    orientation: int

    @property
    def arcs(self):
        """Spherical side lengths, in the same order as ``chords``."""
        return tuple(2.0 * math.asin(min(1.0, x / 2.0)) for x in self.chords)

    @property
    def max_edge_index(self):
        return int(np.argmax(self.chords))

    @property
    def common_angle(self):
        """``pi`` minus the largest interior angle.

        This is the central angle of the longest edge in the form that
        covers the acute and the obtuse case with a single parameter.
        """
        return math.pi - max(self.angles)

    @property
    def spherical_angles(self):
        """Angles of the spherical triangle at ``A, B, C``."""
        A, B, C = self.vertices
        out = []
        for p, q, r in ((A, B, C), (B, C, A), (C, A, B)):
            n1 = np.cross(p, q)
            n2 = np.cross(p, r)
            out.append(math.atan2(float(np.linalg.norm(np.cross(n1, n2))), float(np.dot(n1, n2))))
        return tuple(out)

    @property
    def volume(self):
        return self.altitude * (1.0 - self.altitude ** 2) / 6.0 * sum(
            math.sin(2.0 * x) for x in self.angles
        )


def chordal_analyze(A, B, C):
    """Build a :class:`ChordalTriangle` from three unit vectors.

    Vertices within ``1e-6`` of unit norm are renormalised; anything farther
    raises :class:`ValidationError`.
    """
    A, B, C = _as_unit(A), _as_unit(B), _as_unit(C)
    normal = np.cross(B - A, C - A)
    twice_area = float(np.linalg.norm(normal))
    if twice_area < 1e-14:
        raise DegenerateError("collinear (or coincident) vertices")
    det = float(np.linalg.det(np.array([A, B, C])))
    chords = (
        float(np.linalg.norm(B - C)),
        float(np.linalg.norm(C - A)),
        float(np.linalg.norm(A - B)),
    )
    r = chords[0] * chords[1] * chords[2] / (2.0 * twice_area)
    m = abs(det) / twice_area
    angles = (_corner_angle(A, B, C), _corner_angle(B, C, A), _corner_angle(C, A, B))
    return ChordalTriangle(
        vertices=np.array([A, B, C]),
        chords=chords,
        circumradius=r,
        altitude=m,
        angles=angles,
        orientation=1 if det >= 0.0 else -1,
    )


def facial_volume(A, B, C, signed=False):
    """Volume of the tetrahedron with base ``ABC`` and apex at the origin."""
    A, B, C = _as_unit(A), _as_unit(B), _as_unit(C)
    d = float(np.linalg.det(np.array([A, B, C]))) / 6.0
    return d if signed else abs(d)


@dataclass(frozen=True)
class CentralSector:
    """Half central angle ``alpha`` and spherical base angle ``beta`` of a sector."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = self.alpha, self.beta
        eps = 1e-12
        if not (-eps <= a <= math.pi / 2 + eps and -eps <= b <= math.pi / 2 + eps
                and a + b >= math.pi / 2 - eps):
            raise DomainError(f"(alpha, beta) = {(a, b)} outside the sector domain")

    @property
    def area(self):
        return sector_area(self.alpha, self.beta)


def sector_area(alpha, beta=None):
    """Area ``1/2 sin 2a (1 - cot^2 a cot^2 b)`` of the planar sector triangle."""
    if isinstance(alpha, CentralSector):
        alpha, beta = alpha.alpha, alpha.beta
    if alpha <= 0.0 or beta <= 0.0:
        raise DomainError("sector angles must be positive")
    cot2 = (math.cos(alpha) / math.sin(alpha)) ** 2 * (math.cos(beta) / math.sin(beta)) ** 2
    return 0.5 * math.sin(2.0 * alpha) * (1.0 - cot2)


def isosceles_vertices(m, alpha):
    """Isosceles inscribed triangle with face altitude ``m`` and common angle ``alpha``.

    The apex ``C`` has interior angle ``pi - alpha``; the base ``AB`` is the
    longest edge whenever ``alpha <= 2 pi / 3``.
    """
    if not 0.0 <= m < 1.0:
        raise DomainError(f"altitude must lie in [0, 1), got {m!r}")
    if not 0.0 < alpha < math.pi:
        raise DomainError(f"alpha must lie in (0, pi), got {alpha!r}")
    r = math.sqrt(1.0 - m * m)
    gamma = math.pi - alpha
    A = np.array([-r * math.cos(gamma), r * math.sin(gamma), m])
    B = np.array([-r * math.cos(gamma), -r * math.sin(gamma), m])
    C = np.array([r, 0.0, m])
    return A, B, C


def _tau_closed_form(m, alpha):
    # pole-free at alpha = pi/2; numerator >= 0 so atan2 keeps tau/2 in [0, pi]
    q = 1.0 - m * m
    num = m * q * math.sin(alpha) * (1.0 - math.cos(alpha))
    den = q * math.cos(alpha) * (1.0 + math.cos(alpha)) + 2.0 * m * m
    return 2.0 * math.atan2(num, den)


def tau_from_m_alpha(m, alpha, check=True):
    """Spherical area of the isosceles face with altitude ``m`` and common angle ``alpha``.

    With ``check`` the result is cross-validated against L'Huilier's formula
    on the explicitly constructed triangle; a mismatch raises instead of
    silently choosing a branch.
    """
    if not 0.0 < m < 1.0:
        raise DomainError(f"altitude must lie in (0, 1), got {m!r}")
    if not 0.0 < alpha < math.pi:
        raise DomainError(f"alpha must lie in (0, pi), got {alpha!r}")
    tau = _tau_closed_form(m, alpha)
    if check:
        ref = lhuilier_excess(SphericalTriangle.from_vertices(*isosceles_vertices(m, alpha)))
        if abs(ref - tau) > TAU_CHECK_TOL:
            raise DomainError(
                f"branch mismatch for m={m!r}, alpha={alpha!r}: {tau!r} vs L'Huilier {ref!r}"
            )
    return tau


def obtuse_volume(m, alphas):
    """Facial volume ``m(1-m^2)/6 (sum sin 2a_i - sin 2 sum a_i)``.

    ``alphas`` are the central half-angles of the edges that do not separate
    the circumcentre from the face; the remaining edge closes the polygon.
    """
    alphas = list(alphas)
    if not alphas:
        raise ValidationError("need at least one central angle")
    if not 0.0 <= m < 1.0:
        raise DomainError(f"altitude must lie in [0, 1), got {m!r}")
    total = sum(alphas)
    return m * (1.0 - m * m) / 6.0 * (sum(math.sin(2.0 * x) for x in alphas) - math.sin(2.0 * total))
