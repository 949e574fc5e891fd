"""Closed-form volume bounds for polyhedra inscribed in the unit sphere.

Fejes-Toth's face bound ``U(tau, p)`` and its polyhedral consequences, the
facial bounds in terms of altitude, chord, central angle and spherical area,
the maximal-edge bound ``v(tau, c)`` and its aggregate over all faces of a
star-shaped triangular polyhedron, and the p-gon generalisations.
"""
from dataclasses import dataclass, field
import enum
import math

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateError, DomainError, NoRootError, ValidationError

SQRT3 = math.sqrt(3.0)
# maximal spherical edge of the regular tetrahedron, 2 asin sqrt(2/3)
C_TETRA = 2.0 * math.asin(math.sqrt(2.0 / 3.0))


class Region(str, enum.Enum):
    D = "D"
    DPRIME = "Dprime"
    OUTSIDE = "Outside"


def _check_p(p, allow_real):
    if allow_real:
        if p < 3:
            raise DomainError(f"p must be >= 3, got {p!r}")
    elif int(p) != p or p < 3:
        raise DomainError(f"p must be an integer >= 3, got {p!r}")


def u_general(tau, p, allow_real_p=False):
    """Fejes-Toth's maximal facial volume over p-gons of spherical area ``tau``."""
    if not 0.0 < tau <= math.pi:
        raise DomainError(f"tau must lie in (0, pi], got {tau!r}")
    _check_p(p, allow_real_p)
    w = math.pi / p
    x = math.tan((2.0 * math.pi - tau) / (2.0 * p))
    return p / 3.0 * math.cos(w) ** 2 * x * (1.0 - x * x / math.tan(w) ** 2)


def _u_any(tau, p):
    # unchecked evaluation used by concavity grids that straddle the domain edge
    w = math.pi / p
    x = math.tan((2.0 * math.pi - tau) / (2.0 * p))
    return p / 3.0 * math.cos(w) ** 2 * x * (1.0 - x * x / math.tan(w) ** 2)


def u_triangle(tau):
    if not 0.0 < tau <= math.pi:
        raise DomainError(f"tau must lie in (0, pi], got {tau!r}")
    x = math.tan((2.0 * math.pi - tau) / 6.0)
    return 0.25 * x * (1.0 - x * x / 3.0)


def polyhedron_bound(f, v, e, radius=1.0):
    """Volume bound for a convex polyhedron with ``f`` faces, ``v`` vertices, ``e`` edges."""
    if min(f, v, e) <= 0:
        raise ValidationError("face, vertex and edge counts must be positive")
    if f + v != e + 2:
        raise ValidationError(f"Euler's formula fails: f + v - e = {f + v - e}")
    if radius <= 0:
        raise DomainError("radius must be positive")
    a = math.pi * f / (2.0 * e)
    cot_b = 1.0 / math.tan(math.pi * v / (2.0 * e))
    cot_a = 1.0 / math.tan(a)
    return 2.0 * e / 3.0 * math.cos(a) ** 2 * cot_b * (1.0 - cot_a ** 2 * cot_b ** 2) * radius ** 3


def icosahedron_inequality(n, radius=1.0):
    """Upper bound on the volume of an inscribed polyhedron with ``n`` vertices."""
    if int(n) != n or n < 4:
        raise DomainError(f"n must be an integer >= 4, got {n!r}")
    if radius <= 0:
        raise DomainError("radius must be positive")
    w = n / (n - 2.0) * math.pi / 6.0
    cot = 1.0 / math.tan(w)
    return (n - 2.0) / 6.0 * cot * (3.0 - cot * cot) * radius ** 3


def v_m_alpha(m, alpha):
    if not 0.0 <= m <= 1.0:
        raise DomainError(f"altitude must lie in [0, 1], got {m!r}")
    if not 0.0 < alpha < math.pi:
        raise DomainError(f"alpha must lie in (0, pi), got {alpha!r}")
    return m * (1.0 - m * m) / 3.0 * math.sin(alpha) * (1.0 - math.cos(alpha))


def _chord_radicand(chord, alpha):
    if not 0.0 < chord < 2.0:
        raise DomainError(f"chord must lie in (0, 2), got {chord!r}")
    if not 0.0 < alpha < math.pi:
        raise DomainError(f"alpha must lie in (0, pi), got {alpha!r}")
    rad = math.sin(alpha) ** 2 - chord * chord / 4.0
    if rad < -1e-15:
        raise DomainError(f"sin^2(alpha) < chord^2/4 for chord={chord!r}, alpha={alpha!r}")
    return max(rad, 0.0)


def v_chord_alpha(chord, alpha):
    rad = _chord_radicand(chord, alpha)
    return chord * chord / 12.0 * math.sqrt(rad) / (1.0 + math.cos(alpha))


def v_arc_alpha(arc, alpha):
    return v_chord_alpha(2.0 * math.sin(arc / 2.0), alpha)


def chord_alpha_maximizer(chord):
    """Common angle maximising :func:`v_chord_alpha` for a fixed chord, and the maximum."""
    if not 0.0 < chord < 2.0:
        raise DomainError(f"chord must lie in (0, 2), got {chord!r}")
    alpha = math.acos(chord * chord / 4.0 - 1.0)
    return alpha, chord / 6.0 * math.sqrt(1.0 - chord * chord / 4.0)


def v_tau_chord(tau, chord, alpha):
    if not 0.0 < tau < math.pi:
        raise DomainError(f"tau must lie in (0, pi), got {tau!r}")
    if not 0.0 <= chord < 2.0:
        raise DomainError(f"chord must lie in [0, 2), got {chord!r}")
    if not 0.0 < alpha < math.pi:
        raise DomainError(f"alpha must lie in (0, pi), got {alpha!r}")
    return math.tan(tau / 2.0) / 3.0 * (2.0 - chord * chord / 4.0 * (1.0 + 1.0 / (1.0 + math.cos(alpha))))


def v_tau_c(tau, c):
    """Maximal facial volume over triangles with spherical area ``tau`` and longest side ``c``.

    Attained exactly by the isosceles triangle whose apex is opposite ``c``.
    """
    if tau <= 0.0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    if not 0.0 < c < math.pi:
        raise DomainError(f"c must lie in (0, pi), got {c!r}")
    den = 1.0 - math.cos(c / 2.0) * math.cos(tau / 2.0)
    if den < 1e-15:
        raise DegenerateError(f"v(tau, c) denominator vanishes at {(tau, c)}")
    num = math.cos((tau - c) / 2.0) - math.cos(tau / 2.0) * math.cos(c / 2.0)
    return math.sin(c) * num / (6.0 * den)


def equilateral_c_from_tau(tau):
    """Side of the equilateral spherical triangle with area ``tau``."""
    if not 0.0 < tau < 2.0 * math.pi:
        raise DomainError(f"tau must lie in (0, 2 pi), got {tau!r}")
    k = math.cos((tau + 4.0 * math.pi) / 6.0)
    if k >= 0.0:
        raise DomainError(f"no equilateral triangle of area {tau!r}")
    cos_half = -1.0 / (2.0 * k)
    if cos_half > 1.0:
        cos_half = 1.0
    return 2.0 * math.acos(cos_half)


@dataclass(frozen=True)
class FaceStats:
    """Spherical area and maximal spherical edge of one face.

    ``f_tau`` is the concavity boundary at ``tau`` when it exists
    (``tau <= omega``), needed to aggregate faces outside the concave region.
    """

    tau: float
    c: float
    region: Region = Region.D
    f_tau: float = None

    def to_dict(self):
        return {"tau": self.tau, "c": self.c, "class": Region(self.region).value}


@dataclass(frozen=True)
class FaceClassification:
    d_faces: tuple
    dprime_faces: tuple
    c_prime: float = field(init=False)
    c_star: float = field(init=False)
    tau_prime: float = field(init=False)

    def __post_init__(self):
        for s in self.d_faces:
            if Region(s.region) is not Region.D:
                raise ValidationError(f"face {s} listed as D but classified {s.region}")
        for s in self.dprime_faces:
            if Region(s.region) is not Region.DPRIME:
                raise ValidationError(f"face {s} listed as Dprime but classified {s.region}")
            if s.f_tau is None:
                raise ValidationError(f"Dprime face {s} lacks its boundary value f(tau)")
        d = self.d_faces
        dp = self.dprime_faces
        object.__setattr__(self, "c_prime", float(np.mean([s.c for s in d])) if d else math.nan)
        object.__setattr__(self, "c_star", float(np.mean([s.f_tau for s in dp])) if dp else math.nan)
        object.__setattr__(self, "tau_prime", float(sum(s.tau for s in dp)))

    @property
    def f(self):
        return len(self.d_faces) + len(self.dprime_faces)

    @property
    def f_prime(self):
        return len(self.d_faces)

    @property
    def mean_c(self):
        """Face-count weighted mix of ``c_prime`` and ``c_star``."""
        total = 0.0
        if self.d_faces:
            total += self.f_prime * self.c_prime
        if self.dprime_faces:
            total += (self.f - self.f_prime) * self.c_star
        return total / self.f


def uniform_bound(f, c):
    """Volume bound for ``f`` triangular faces whose maximal edges average ``c``."""
    if f < 4:
        raise DomainError(f"need at least 4 faces, got {f!r}")
    return f * v_tau_c(4.0 * math.pi / f, c)


def theorem1_bound(fc):
    """Volume bound for a star-shaped triangular polyhedron from its classified faces."""
    if fc.f == 0:
        raise ValidationError("no faces")
    for s in fc.d_faces + fc.dprime_faces:
        if not 0.0 < s.tau < math.pi / 2.0:
            raise ValidationError(f"face area {s.tau!r} outside (0, pi/2)")
    return uniform_bound(fc.f, fc.mean_c)


def theorem1_display(f, f_prime, c_prime, c_star):
    """The aggregated bound written out term by term (used to cross-check :func:`theorem1_bound`)."""
    cbar = (f_prime * c_prime + (f - f_prime) * c_star) / f
    num = math.cos((4.0 * math.pi - f * cbar) / (2.0 * f)) - math.cos(2.0 * math.pi / f) * math.cos(cbar / 2.0)
    den = 1.0 - math.cos(4.0 * math.pi / (2.0 * f)) * math.cos(cbar / 2.0)
    return f / 6.0 * math.sin(cbar) * num / den


def uniform_display(f, c):
    num = math.cos(2.0 * math.pi / f - c / 2.0) - math.cos(2.0 * math.pi / f) * math.cos(c / 2.0)
    return f / 6.0 * math.sin(c) * num / (1.0 - math.cos(c / 2.0) * math.cos(2.0 * math.pi / f))


def theorem2_term(tau):
    """``(2/9) sin(tau/2) / (sqrt 3 - cos(tau/2))``, i.e. ``v(tau, C_TETRA)``."""
    if tau < 0.0:
        raise DomainError(f"tau must be non-negative, got {tau!r}")
    return 2.0 / 9.0 * math.sin(tau / 2.0) / (SQRT3 - math.cos(tau / 2.0))


def theorem2_assemble(taus):
    """Bound on the hull of two regular tetrahedra for one dissection of a face.

    ``taus`` are the areas of the five triangles cut out of one spherical face
    of the first tetrahedron; they must be non-negative and sum to ``pi``.
    """
    taus = [float(t) for t in taus]
    if len(taus) != 5:
        raise ValidationError(f"expected 5 areas, got {len(taus)}")
    if min(taus) < 0.0:
        raise ValidationError("areas must be non-negative")
    if abs(sum(taus) - math.pi) > 1e-9:
        raise ValidationError(f"areas must sum to pi, got {sum(taus)!r}")
    return v_tau_c(math.pi, C_TETRA) + 6.0 * v_tau_c(math.pi / 3.0, C_TETRA) + sum(
        theorem2_term(t) for t in taus
    )


def _check_pgon(m, alpha, p):
    if not 0.0 <= m < 1.0:
        raise DomainError(f"altitude must lie in [0, 1), got {m!r}")
    if not 0.0 < alpha < math.pi:
        raise DomainError(f"alpha must lie in (0, pi), got {alpha!r}")
    _check_p(p, False)


def _pgon_shape(alpha, p):
    return (p - 1) * math.sin(2.0 * alpha / (p - 1)) - math.sin(2.0 * alpha)


def v_pgon_m_alpha(m, alpha, p):
    """Facial volume of the equalised p-gon: ``p - 1`` equal edges plus one edge of common angle ``alpha``."""
    _check_pgon(m, alpha, p)
    return m * (1.0 - m * m) / 6.0 * _pgon_shape(alpha, p)


def v_pgon_chord_alpha(chord, alpha, p):
    _check_p(p, False)
    rad = _chord_radicand(chord, alpha)
    return chord * chord * math.sqrt(rad) / 24.0 * _pgon_shape(alpha, p) / math.sin(alpha) ** 3


def v_pgon_arc_alpha(arc, alpha, p):
    return v_pgon_chord_alpha(2.0 * math.sin(arc / 2.0), alpha, p)


def pgon_tau(m, alpha, p):
    """Spherical area of the equalised p-gon with altitude ``m``.

    Uses ``atan2(m sin x, cos x)``, the continuous branch of
    ``atan(m tan x)`` on ``(0, pi)``, so no branch correction is needed.
    """
    _check_pgon(m, alpha, p)

    def phi(x):
        return math.atan2(m * math.sin(x), math.cos(x))

    return 2.0 * (phi(alpha) - (p - 1) * phi(alpha / (p - 1)))


def pgon_altitudes(tau, alpha, p, grid=2048):
    """All altitudes ``m`` in (0, 1) at which the equalised p-gon has area ``tau``."""
    _check_p(p, False)
    if not 0.0 < alpha < math.pi:
        raise DomainError(f"alpha must lie in (0, pi), got {alpha!r}")
    ms = np.linspace(0.0, 1.0, grid + 1)[1:-1]
    # tiny areas sit at altitudes just below 1, finer than the uniform grid
    ms = np.concatenate([ms, 1.0 - np.logspace(-4, -13, 10)])
    vals = np.array([pgon_tau(m, alpha, p) - tau for m in ms])
    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)[0]:
        lo, hi = ms[i], ms[i + 1]
        if vals[i] == 0.0:
            roots.append(float(lo))
            continue
        roots.append(brentq(lambda m: pgon_tau(m, alpha, p) - tau, lo, hi, xtol=1e-15, rtol=1e-15))
    return sorted(set(roots))


def pgon_tau_bound(tau, alpha, p):
    """Facial-volume bound for a p-gon of spherical area ``tau`` and greatest common angle ``alpha``.

    No closed form relates ``tau`` and the altitude for ``p > 3``; the altitude
    is found numerically.  When two altitudes fit (``alpha < pi/2``) the larger
    volume is returned.
    """
    if tau <= 0.0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    roots = pgon_altitudes(tau, alpha, p)
    if not roots:
        raise NoRootError(f"no altitude in (0, 1) realises tau={tau!r} with alpha={alpha!r}, p={p}")
    return max(v_pgon_m_alpha(m, alpha, p) for m in roots)
