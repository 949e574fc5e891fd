"""Sampling verifiers for the comparison and concavity properties.

Each suite draws from ``numpy.random.default_rng(seed)`` (PCG64) and returns a
:class:`VerificationReport`; ``violations`` must be zero.  ``worst_slack`` is
the smallest observed margin (negative means a violation).
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import brentq

from . import domain
from .bounds import (
    C_TETRA, SQRT3, Region, _u_any, pgon_tau, theorem2_assemble, v_m_alpha,
    v_pgon_m_alpha, v_tau_c,
)
from .errors import DomainError
from .optimizer import sum_term
from .spherical import (
    _tau_closed_form, arc_between, chordal_analyze, isosceles_vertices, lhuilier_excess,
)

SUITES = ("prop2", "prop3-dominance", "prop4", "tau-le-c", "concavity", "theorem2-sum")

COMPARATOR_TOL = 1e-10
DOMINANCE_TOL = 1e-12
EQUALITY_TOL = 1e-9
ISOSCELES_TOL = 1e-6
EIGEN_TOL = 1e-8
SLOPE_TOL = 1e-10


@dataclass
class VerificationReport:
    suite: str
    samples: int
    seed: int
    violations: int = 0
    skipped: int = 0
    worst_slack: float = math.inf
    details: dict = field(default_factory=dict)

    def record(self, slack, tol=0.0):
        self.worst_slack = min(self.worst_slack, float(slack))
        if slack < -tol:
            self.violations += 1

    @property
    def ok(self):
        return self.violations == 0

    def to_dict(self):
        return {
            "suite": self.suite,
            "samples": self.samples,
            "seed": self.seed,
            "violations": self.violations,
            "skipped": self.skipped,
            "worst_slack": self.worst_slack,
            **self.details,
        }


def random_unit_vectors(rng, n):
    x = rng.standard_normal((n, 3))
    return x / np.linalg.norm(x, axis=1)[:, None]


def _arcs(A, B, C):
    return (arc_between(B, C), arc_between(A, C), arc_between(A, B))


def _comparator_altitude(fn, m):
    # root of fn in [m, 1); an input that is already equalised is its own comparator
    if abs(fn(m)) < 1e-13:
        return m
    lo, hi = m * (1.0 - 1e-12), 1.0 - 1e-12
    if fn(lo) * fn(hi) > 0.0:
        raise DomainError("comparator altitude not bracketed")
    return brentq(fn, lo, hi, xtol=1e-15, rtol=1e-15)


def isosceles_comparator(A, B, C):
    """Altitude and volume of the isosceles face with the same area and common angle as ``ABC``."""
    t = chordal_analyze(A, B, C)
    tau = lhuilier_excess(_arcs(A, B, C))
    alpha = t.common_angle
    m = t.altitude
    fn = lambda x: _tau_closed_form(x, alpha) - tau
    m2 = _comparator_altitude(fn, m)
    return m2, v_m_alpha(m2, alpha)


def cyclic_polygon(m, phis):
    """Vertices of the convex polygon on the circle at altitude ``m`` with polar angles ``phis``."""
    r = math.sqrt(1.0 - m * m)
    phis = np.sort(np.asarray(phis, dtype=float))
    return np.stack([r * np.cos(phis), r * np.sin(phis), np.full(len(phis), m)], axis=1)


def polygon_area_volume(V):
    """Spherical area (fan of L'Huilier triangles) and facial volume of a convex face."""
    tau = 0.0
    vol = 0.0
    for i in range(1, len(V) - 1):
        tau += lhuilier_excess(_arcs(V[0], V[i], V[i + 1]))
        vol += float(np.linalg.det(V[[0, i, i + 1]])) / 6.0
    return tau, vol


def pgon_comparator(m, phis):
    """Original volume and the equal-sided comparator volume for a cyclic p-gon."""
    p = len(phis)
    phis = np.sort(np.asarray(phis, dtype=float))
    V = cyclic_polygon(m, phis)
    tau, vol = polygon_area_volume(V)
    gaps = np.diff(np.append(phis, phis[0] + 2.0 * math.pi))
    alpha = math.pi - gaps.max() / 2.0
    fn = lambda x: pgon_tau(x, alpha, p) - tau
    m2 = _comparator_altitude(fn, m)
    return vol, v_pgon_m_alpha(m2, alpha, p)


def verify_isosceles_dominance(samples, seed, p=3):
    """Equalised comparator has at least the original facial volume (triangles or cyclic p-gons)."""
    if samples < 1:
        raise DomainError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    rep = VerificationReport("prop2" if p == 3 else "prop4", int(samples), seed)
    rep.details["p"] = p
    for _ in range(samples):
        try:
            if p == 3:
                A, B, C = random_unit_vectors(rng, 3)
                vol = abs(float(np.linalg.det(np.array([A, B, C])))) / 6.0
                _, comp = isosceles_comparator(A, B, C)
            else:
                m = rng.uniform(0.01, 0.99)
                phis = rng.uniform(0.0, 2.0 * math.pi, p)
                vol, comp = pgon_comparator(m, phis)
        except DomainError:
            rep.skipped += 1
            continue
        rep.record(comp - vol, COMPARATOR_TOL)
    return rep


def verify_prop4(samples, seed, ps=(4, 5, 6)):
    rep = VerificationReport("prop4", int(samples), int(seed))
    for k, p in enumerate(ps):
        sub = verify_isosceles_dominance(samples, [seed, k], p)
        rep.violations += sub.violations
        rep.skipped += sub.skipped
        rep.worst_slack = min(rep.worst_slack, sub.worst_slack)
        rep.details[f"p{p}"] = {"violations": sub.violations, "skipped": sub.skipped,
                                "worst_slack": sub.worst_slack}
    return rep


def verify_dominance(samples, seed, max_c=math.pi / 2.0):
    """``facial_volume <= v_tau_c(tau, c)`` with equality only for isosceles triangles.

    Triangles are uniform random conditioned on all sides below ``max_c``.
    Violations are failures of the inequality or of equality on isosceles
    inputs.  Near-equalities (margin below ``EQUALITY_TOL`` relative to the
    bound) are reported in ``details`` with their largest leg gap.  The margin
    grows like the square of the leg gap, so near-equalities with legs
    differing by more than ``ISOSCELES_TOL`` do occur and are counted there.
    """
    rng = np.random.default_rng(seed)
    rep = VerificationReport("prop3-dominance", int(samples), int(seed))
    near_equal = non_isosceles = 0
    leg_gap = 0.0
    for _ in range(samples):
        A, B, C, arcs = random_small_triangle(rng, max_c)
        arcs = sorted(arcs)
        try:
            tau = lhuilier_excess(arcs)
            bound = v_tau_c(tau, arcs[2])
        except DomainError:
            rep.skipped += 1
            continue
        vol = abs(float(np.linalg.det(np.array([A, B, C])))) / 6.0
        slack = bound - vol
        rep.record(slack, DOMINANCE_TOL)
        if slack <= EQUALITY_TOL * bound:
            near_equal += 1
            leg_gap = max(leg_gap, arcs[1] - arcs[0])
            non_isosceles += arcs[1] - arcs[0] > ISOSCELES_TOL
    # isosceles inputs attain the bound
    worst_eq = 0.0
    for _ in range(max(1, samples // 100)):
        m = rng.uniform(0.05, 0.95)
        alpha = rng.uniform(0.05, 2.0 * math.pi / 3.0)
        A, B, C = isosceles_vertices(m, alpha)
        arcs = sorted(_arcs(A, B, C))
        vol = abs(float(np.linalg.det(np.array([A, B, C])))) / 6.0
        gap = abs(v_tau_c(lhuilier_excess(arcs), arcs[2]) - vol)
        worst_eq = max(worst_eq, gap)
        if gap > EQUALITY_TOL:
            rep.violations += 1
    rep.details["near_equality"] = near_equal
    rep.details["near_equality_max_leg_gap"] = leg_gap
    rep.details["near_equality_non_isosceles"] = int(non_isosceles)
    rep.details["isosceles_max_gap"] = worst_eq
    return rep


def random_small_triangle(rng, max_side):
    """Uniform random triangle conditioned (by rejection) on all sides below ``max_side``."""
    while True:
        A, B, C = random_unit_vectors(rng, 3)
        arcs = _arcs(A, B, C)
        if max(arcs) < max_side:
            return A, B, C, arcs


def verify_tau_le_c(samples, seed):
    rng = np.random.default_rng(seed)
    rep = VerificationReport("tau-le-c", int(samples), int(seed))
    for _ in range(samples):
        _, _, _, arcs = random_small_triangle(rng, math.pi / 2.0)
        try:
            tau = lhuilier_excess(arcs)
        except DomainError:
            rep.skipped += 1
            continue
        rep.record(max(arcs) - tau)
    return rep


def sample_d(rng):
    """Random ``(tau, c)`` in the concave region D."""
    while True:
        tau = rng.uniform(0.01, math.pi / 2.0 - 1e-6)
        top = C_TETRA if tau > domain.omega() else domain.f_boundary(tau)
        c = rng.uniform(tau, top)
        if domain.classify(tau, c) is Region.D:
            return tau, c


def sample_dprime(rng):
    """Random ``(tau, c)`` in Dprime (requires ``tau < omega``)."""
    om = domain.omega()
    while True:
        tau = rng.uniform(0.01, om - 1e-6)
        lo = domain.f_boundary(tau)
        c = rng.uniform(lo, C_TETRA)
        if domain.classify(tau, c) is Region.DPRIME:
            return tau, c


def d_grid(n=50):
    """``n x n`` grid in D: ``tau`` spans (0, pi/2), ``c`` spans ``[tau, top(tau)]``."""
    om = domain.omega()
    out = []
    for tau in np.linspace(0.02, math.pi / 2.0 - 0.02, n):
        top = C_TETRA if tau > om else domain.f_boundary(tau)
        for s in np.linspace(0.0, 1.0, n):
            out.append((float(tau), float(tau + s * (top - tau))))
    return out


def u_grid(n=50):
    return [(float(t), float(p)) for t in np.linspace(0.05, math.pi, n) for p in np.linspace(3.0, 20.0, n)]


def verify_concavity(samples, seed, grid=50):
    """Hessian of ``v`` on D, sign of ``dv/dc`` on Dprime and concavity of ``U(tau, p)``."""
    rng = np.random.default_rng(seed)
    rep = VerificationReport("concavity", int(samples), int(seed))
    worst_eig = -math.inf
    for tau, c in d_grid(grid):
        e = max(domain.hessian_v(tau, c).eigenvalues)
        worst_eig = max(worst_eig, e)
        rep.record(-e, EIGEN_TOL)
    worst_slope = -math.inf
    for _ in range(samples):
        tau, c = sample_dprime(rng)
        s = float(domain.dv_dc(tau, c))
        worst_slope = max(worst_slope, s)
        rep.record(-s, SLOPE_TOL)
    worst_u = -math.inf
    for tau, p in u_grid(grid):
        h = 1e-3
        # stay inside tau <= pi
        x = min(tau, math.pi - 2 * h)
        e = max(np.linalg.eigvalsh(domain.numeric_hessian(_u_any, x, p, h)))
        worst_u = max(worst_u, e)
        rep.record(-e, EIGEN_TOL)
    rep.details.update(max_hessian_eigenvalue=worst_eig, max_dvdc=worst_slope,
                       max_u_eigenvalue=worst_u)
    return rep


def verify_theorem2_sum(samples, seed):
    """Random simplex points never beat the uniform split; the assembled bound stays below the cube."""
    rng = np.random.default_rng(seed)
    rep = VerificationReport("theorem2-sum", int(samples), int(seed))
    top = 5.0 * float(sum_term(math.pi / 5.0))
    cube = 8.0 / (3.0 * SQRT3)
    for _ in range(samples):
        taus = rng.dirichlet(np.ones(5)) * math.pi
        taus *= math.pi / taus.sum()
        rep.record(top - float(sum_term(taus).sum()))
        rep.record(cube - theorem2_assemble(taus))
    rep.details["uniform_value"] = top
    return rep


def run_suite(suite, samples, seed):
    if suite == "prop2":
        return verify_isosceles_dominance(samples, seed, 3)
    if suite == "prop3-dominance":
        return verify_dominance(samples, seed)
    if suite == "prop4":
        return verify_prop4(samples, seed)
    if suite == "tau-le-c":
        return verify_tau_le_c(samples, seed)
    if suite == "concavity":
        return verify_concavity(samples, seed)
    if suite == "theorem2-sum":
        return verify_theorem2_sum(samples, seed)
    raise DomainError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
