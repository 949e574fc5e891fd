"""Concavity analysis of the maximal-edge bound ``v(tau, c)``.

``v`` is concave where the determinant of its Hessian is non-negative (and
``v_cc < 0``).  The zero set of that determinant inside
``tau < c <= C_TETRA`` is a curve ``c = f(tau)``; it meets ``c = C_TETRA``
at ``tau = omega``.  Faces with ``c <= f(tau)`` lie in the concave region
``D``, faces above the curve in ``Dprime`` where ``v`` decreases in ``c``.

Derivatives are taken in closed form.  Writing ``s = tau/2`` and ``h = c/2``,

    v = g(h) q(s, h),   g = sin^2 h cos h / 3,   q = sin s / (1 - cos h cos s).
"""
from dataclasses import dataclass
import csv
import math
import threading

import numpy as np
from scipy.optimize import brentq

from .bounds import C_TETRA, FaceClassification, FaceStats, Region
from .errors import DegenerateError, DomainError, NoRootError, ValidationError

# boundary points (within this distance) belong to the closed region D
TIE_TOL = 1e-9
REFERENCE_OMEGA = 0.697715
REFERENCE_RHOMBIC_THRESHOLD = 0.427922
QUARTIC = (1.0, -24.0, 78.0, -24.0, 1.0)


def v_partials(tau, c):
    """``(v, v_tau, v_c, v_tautau, v_tauc, v_cc)``; works elementwise on arrays."""
    s = np.asarray(tau, dtype=float) / 2.0
    h = np.asarray(c, dtype=float) / 2.0
    ss, cs = np.sin(s), np.cos(s)
    sh, ch = np.sin(h), np.cos(h)
    D = 1.0 - ch * cs
    if np.any(D < 1e-15):
        raise DegenerateError("v(tau, c) denominator vanishes")
    D2 = D * D
    D3 = D2 * D

    g = sh * sh * ch / 3.0
    g1 = (2.0 * sh * ch * ch - sh ** 3) / 3.0
    g2 = (2.0 * ch ** 3 - 7.0 * sh * sh * ch) / 3.0

    q = ss / D
    q_s = (cs - ch) / D2
    q_h = -ss * sh * cs / D2
    D_s = ch * ss
    D_h = sh * cs
    q_ss = -ss / D2 - 2.0 * (cs - ch) * D_s / D3
    q_sh = sh / D2 - 2.0 * (cs - ch) * D_h / D3
    q_hh = -ss * cs * (ch / D2 - 2.0 * sh * D_h / D3)

    v = g * q
    v_s = g * q_s
    v_h = g1 * q + g * q_h
    v_ss = g * q_ss
    v_sh = g1 * q_s + g * q_sh
    v_hh = g2 * q + 2.0 * g1 * q_h + g * q_hh
    return v, v_s / 2.0, v_h / 2.0, v_ss / 4.0, v_sh / 4.0, v_hh / 4.0


@dataclass(frozen=True)
class HessianSample:
    tau: float
    c: float
    v_tt: float
    v_tc: float
    v_cc: float

    @property
    def det(self):
        return self.v_tt * self.v_cc - self.v_tc ** 2

    @property
    def eigenvalues(self):
        return tuple(np.linalg.eigvalsh([[self.v_tt, self.v_tc], [self.v_tc, self.v_cc]]))


def hessian_v(tau, c):
    if tau <= 0.0 or not 0.0 < c < math.pi:
        raise DomainError(f"(tau, c) = {(tau, c)} outside tau > 0, 0 < c < pi")
    _, _, _, tt, tc, cc = v_partials(tau, c)
    return HessianSample(float(tau), float(c), float(tt), float(tc), float(cc))


def hessian_det(tau, c):
    _, _, _, tt, tc, cc = v_partials(tau, c)
    return tt * cc - tc * tc


def dv_dc(tau, c):
    return v_partials(tau, c)[2]


def numeric_hessian(fn, x, y, h=1e-3):
    """Fourth-order central-difference Hessian of a scalar function of two variables."""
    f0 = fn(x, y)
    fxx = (-fn(x + 2 * h, y) + 16 * fn(x + h, y) - 30 * f0 + 16 * fn(x - h, y) - fn(x - 2 * h, y)) / (12 * h * h)
    fyy = (-fn(x, y + 2 * h) + 16 * fn(x, y + h) - 30 * f0 + 16 * fn(x, y - h) - fn(x, y - 2 * h)) / (12 * h * h)

    def mixed(k):
        return (fn(x + k, y + k) - fn(x + k, y - k) - fn(x - k, y + k) + fn(x - k, y - k)) / (4 * k * k)

    fxy = (4.0 * mixed(h) - mixed(2 * h)) / 3.0
    return np.array([[fxx, fxy], [fxy, fyy]])


_omega_lock = threading.Lock()
_omega_value = None


def omega():
    """Area at which the boundary curve reaches ``C_TETRA`` (computed once)."""
    global _omega_value
    if _omega_value is None:
        with _omega_lock:
            if _omega_value is None:
                _omega_value = brentq(lambda t: hessian_det(t, C_TETRA), 0.3, 0.9, xtol=1e-14, rtol=1e-15)
    return _omega_value


def f_boundary(tau):
    """Boundary ``c = f(tau)`` of the concave region, for ``0 < tau <= omega``."""
    if tau <= 0.0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    hi = C_TETRA
    d_hi = hessian_det(tau, hi)
    if d_hi >= 0.0:
        if abs(tau - omega()) <= 1e-9:
            return hi
        raise NoRootError(f"Hessian determinant has no zero in (tau, C_TETRA] at tau={tau!r}")
    lo = tau
    if hessian_det(tau, lo) <= 0.0:
        raise NoRootError(f"Hessian determinant is not positive at c = tau = {tau!r}")
    return brentq(lambda c: hessian_det(tau, c), lo, hi, xtol=1e-13, rtol=1e-15)


def rhombic_threshold():
    """Smallest area for which ``f(tau) >= pi/2``."""
    return brentq(lambda t: hessian_det(t, math.pi / 2.0), 0.2, 0.69, xtol=1e-14, rtol=1e-15)


def classify(tau, c):
    """Region of ``(tau, c)``: :attr:`Region.D`, :attr:`Region.DPRIME` or :attr:`Region.OUTSIDE`."""
    return _classify(tau, c)[0]


def _classify(tau, c):
    if not (0.0 < tau < math.pi / 2.0) or c <= 0.0:
        return Region.OUTSIDE, None
    if c < tau - TIE_TOL or c > C_TETRA + TIE_TOL:
        return Region.OUTSIDE, None
    if tau > omega():
        return Region.D, None
    f_tau = f_boundary(tau)
    if c <= f_tau + TIE_TOL:
        return Region.D, f_tau
    return Region.DPRIME, f_tau


def face_stats_for(tau, c):
    region, f_tau = _classify(tau, c)
    return FaceStats(float(tau), float(c), region, f_tau)


def classify_faces(faces):
    """Split faces (``FaceStats`` or ``(tau, c)`` pairs) into D and Dprime groups."""
    stats = [s if isinstance(s, FaceStats) else face_stats_for(*s) for s in faces]
    outside = [i for i, s in enumerate(stats) if s.region is Region.OUTSIDE]
    if outside:
        s = stats[outside[0]]
        raise ValidationError(
            f"{len(outside)} face(s) outside the admissible domain, first: face {outside[0]} "
            f"with tau={s.tau:.6g}, c={s.c:.6g}"
        )
    return FaceClassification(
        tuple(s for s in stats if s.region is Region.D),
        tuple(s for s in stats if s.region is Region.DPRIME),
    )


@dataclass
class RegionGrid:
    resolution: int
    tau: np.ndarray
    c: np.ndarray
    v: np.ndarray
    det: np.ndarray
    dvdc: np.ndarray
    region: np.ndarray

    @staticmethod
    def _sign(x, tol=1e-12):
        return np.where(x > tol, 1, np.where(x < -tol, -1, 0))

    @property
    def det_sign(self):
        return self._sign(self.det)

    @property
    def dvdc_sign(self):
        return self._sign(self.dvdc)

    def rows(self):
        ds, gs = self.det_sign, self.dvdc_sign
        for k in range(self.tau.size):
            yield (self.tau[k], self.c[k], self.v[k], int(ds[k]), int(gs[k]), self.region[k])

    def write_csv(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["tau", "c", "v", "det_sign", "dvdc_sign", "region"])
        for t, c, v, ds, gs, r in self.rows():
            w.writerow([f"{t:.15g}", f"{c:.15g}", f"{v:.15g}", ds, gs, r])


def region_grid(resolution):
    """Cell-centred grid over ``0 < tau < pi/2``, ``0 < c < C_TETRA``."""
    if int(resolution) != resolution or resolution < 16:
        raise DomainError(f"resolution must be an integer >= 16, got {resolution!r}")
    n = int(resolution)
    taus = (np.arange(n) + 0.5) * (math.pi / 2.0) / n
    cs = (np.arange(n) + 0.5) * C_TETRA / n
    T, C = np.meshgrid(taus, cs, indexing="ij")
    v, _, dvdc, tt, tc, cc = v_partials(T, C)
    det = tt * cc - tc * tc
    om = omega()
    region = np.empty(T.shape, dtype=object)
    for i, t in enumerate(taus):
        f_t = f_boundary(t) if t <= om else math.inf
        for j, c in enumerate(cs):
            if c < t - TIE_TOL:
                region[i, j] = Region.OUTSIDE.value
            elif c <= f_t + TIE_TOL:
                region[i, j] = Region.D.value
            else:
                region[i, j] = Region.DPRIME.value
    return RegionGrid(n, T.ravel(), C.ravel(), v.ravel(), det.ravel(), dvdc.ravel(), region.ravel())


def quartic_roots():
    """Real roots of ``z^4 - 24 z^3 + 78 z^2 - 24 z + 1``, ascending.

    The polynomial is palindromic, so ``w = z + 1/z`` reduces it to
    ``w^2 - 24 w + 76 = 0`` and each ``w`` gives a reciprocal pair.
    """
    roots = []
    for w in (12.0 - 2.0 * math.sqrt(17.0), 12.0 + 2.0 * math.sqrt(17.0)):
        d = math.sqrt(w * w - 4.0)
        big = (w + d) / 2.0
        roots.extend((1.0 / big, big))
    return sorted(roots)

