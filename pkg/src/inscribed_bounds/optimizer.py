"""Seeded multi-restart maximisation problems.

* ``max_volume_n_points``: largest hull of ``n`` points on the unit sphere.
* ``max_two_tetrahedra``: largest hull of two regular tetrahedra sharing the
  circumscribed sphere, over rotations of the second.
* ``constrained_sum_max``: the five-term sum bounding the hull of two
  tetrahedra, on the simplex ``tau_i >= 0, sum tau_i = pi``.

Every restart draws from its own PCG64 stream seeded by ``(seed, restart)``,
so serial and threaded runs give bit-identical results.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import minimize
from scipy.spatial.transform import Rotation

from .bounds import SQRT3, icosahedron_inequality, v_tau_c
from .errors import DomainError
from .hull import convex_hull_faces, hull_volume, hull_volume_gradient
from .polyhedra import tetrahedron_points, two_tetrahedra_points

CUBE_VOLUME = 8.0 / (3.0 * SQRT3)


def restart_rng(seed, restart):
    """Independent generator for one restart; PCG64 seeded from ``SeedSequence([seed, restart])``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(restart)])))


@dataclass
class OptimizationRun:
    problem: str
    seed: int
    restarts: int
    schedule: dict
    tolerance: float
    best_value: float = -math.inf
    best_configuration: list = None
    best_restart: int = None
    restart_values: list = field(default_factory=list)
    restart_steps: list = field(default_factory=list)
    running_best: list = field(default_factory=list)
    certificate_bound: float = None
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "problem": self.problem,
            "seed": self.seed,
            "restarts": self.restarts,
            "schedule": self.schedule,
            "tolerance": self.tolerance,
            "best_value": self.best_value,
            "best_restart": self.best_restart,
            "configuration": self.best_configuration,
            "certificate_bound": self.certificate_bound,
            "restart_values": self.restart_values,
            "restart_steps": self.restart_steps,
            **self.extra,
        }


def _merge(run, results):
    # lowest restart index wins ties, so the merge does not depend on completion order
    results = sorted(results, key=lambda r: r[0])
    best = -math.inf
    for idx, value, steps, config in results:
        run.restart_values.append(value)
        run.restart_steps.append(steps)
        if value > best:
            best = value
            run.best_value = value
            run.best_restart = idx
            run.best_configuration = config
        run.running_best.append(best)
    return run


def _run_restarts(fn, restarts, threads):
    if threads <= 1:
        return [fn(i) for i in range(restarts)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(restarts)))


def _still_hull(pts, faces, tol=1e-12):
    """True if every point lies on or below every facet plane of ``faces``."""
    f = np.asarray(faces)
    a, b, c = pts[f[:, 0]], pts[f[:, 1]], pts[f[:, 2]]
    nrm = np.cross(b - a, c - a)
    off = np.einsum("ij,ij->i", nrm, a)
    return bool(np.all(pts @ nrm.T - off <= tol * np.linalg.norm(nrm, axis=1)))


def _sphere_ascent(x, max_steps, gain_tol, step0):
    """Projected gradient ascent of hull volume for unit vectors ``x`` (n x 3)."""
    faces = convex_hull_faces(x)
    vol = hull_volume(x, faces)
    step = step0
    steps = 0
    while steps < max_steps:
        steps += 1
        g = hull_volume_gradient(x, faces)
        g -= np.einsum("ij,ij->i", g, x)[:, None] * x
        accepted = False
        while step > 1e-14:
            y = x + step * g
            y /= np.linalg.norm(y, axis=1)[:, None]
            new_faces = faces if _still_hull(y, faces) else convex_hull_faces(y)
            new_vol = hull_volume(y, new_faces)
            if new_vol > vol:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        gain = new_vol - vol
        x, faces, vol = y, new_faces, new_vol
        step *= 1.5
        if gain < gain_tol:
            break
    return x, vol, steps


def max_volume_n_points(n, seed, restarts=16, max_steps=3000, gain_tol=1e-12, threads=1):
    """Best hull volume of ``n`` unit vectors found by multi-restart ascent."""
    if int(n) != n or not 4 <= n <= 30:
        raise DomainError(f"n must be an integer in [4, 30], got {n!r}")
    n = int(n)
    schedule = {"max_steps": max_steps, "initial_step": 0.1, "grow": 1.5, "shrink": 0.5}

    def one(i):
        rng = restart_rng(seed, i)
        x = rng.standard_normal((n, 3))
        x /= np.linalg.norm(x, axis=1)[:, None]
        x, vol, steps = _sphere_ascent(x, max_steps, gain_tol, 0.1)
        return i, float(vol), steps, x.tolist()

    run = OptimizationRun("n-points", int(seed), int(restarts), schedule, gain_tol)
    _merge(run, _run_restarts(one, restarts, threads))
    run.certificate_bound = icosahedron_inequality(n)
    run.extra["n"] = n
    return run


def _rotation_from_params(params):
    return Rotation.from_rotvec(params).as_matrix()


def two_tetrahedra_volume(params):
    """Hull volume of the reference tetrahedron and its rotation by the rotation vector ``params``."""
    pts = two_tetrahedra_points(_rotation_from_params(params))
    return hull_volume(pts)


def cube_pattern_error(points):
    """Largest distance of pairwise dot products from the cube's ``{1/3, -1/3, -1}``."""
    pts = np.asarray(points)
    dots = pts @ pts.T
    targets = np.array([1.0 / 3.0, -1.0 / 3.0, -1.0])
    iu = np.triu_indices(len(pts), 1)
    return float(np.max(np.min(np.abs(dots[iu][:, None] - targets[None, :]), axis=1)))


def max_two_tetrahedra(seed, restarts=16, fd_step=1e-6, max_steps=400, threads=1):
    """Maximise the hull volume of two inscribed regular tetrahedra.

    Gradient ascent on the rotation vector (central differences), then a
    Nelder-Mead polish: the optimum is the cube, where the hull has coplanar
    facets and the volume is not differentiable.
    """
    schedule = {"fd_step": fd_step, "max_steps": max_steps, "initial_step": 0.2, "polish": "nelder-mead"}

    def one(i):
        rng = restart_rng(seed, i)
        q = rng.standard_normal(4)
        x = Rotation.from_quat(q / np.linalg.norm(q)).as_rotvec()
        vol = two_tetrahedra_volume(x)
        step = 0.2
        steps = 0
        while steps < max_steps and step > 1e-12:
            steps += 1
            g = np.array([
                (two_tetrahedra_volume(x + fd_step * e) - two_tetrahedra_volume(x - fd_step * e)) / (2 * fd_step)
                for e in np.eye(3)
            ])
            y = x + step * g
            new = two_tetrahedra_volume(y)
            if new > vol:
                gain = new - vol
                x, vol = y, new
                step *= 1.5
                if gain < 1e-13:
                    break
            else:
                step *= 0.5
        res = minimize(lambda p: -two_tetrahedra_volume(p), x, method="Nelder-Mead",
                       options={"xatol": 1e-11, "fatol": 1e-15, "maxiter": 4000,
                                "initial_simplex": x + 0.05 * np.vstack([np.zeros(3), np.eye(3)])})
        if -res.fun > vol:
            x, vol = res.x, -res.fun
        return i, float(vol), steps, x.tolist()

    run = OptimizationRun("two-tetrahedra", int(seed), int(restarts), schedule, 1e-13)
    _merge(run, _run_restarts(one, restarts, threads))
    pts = two_tetrahedra_points(_rotation_from_params(run.best_configuration))
    run.certificate_bound = CUBE_VOLUME
    run.extra["cube_pattern_error"] = cube_pattern_error(pts)
    run.extra["points"] = pts.tolist()
    return run


def sum_term(x):
    """``sin(x/2) / (sqrt 3 - cos(x/2))``, elementwise."""
    x = np.asarray(x, dtype=float)
    return np.sin(x / 2.0) / (SQRT3 - np.cos(x / 2.0))


def sum_term_derivative(x):
    x = np.asarray(x, dtype=float)
    return 0.5 * (SQRT3 * np.cos(x / 2.0) - 1.0) / (SQRT3 - np.cos(x / 2.0)) ** 2


def project_to_simplex(y, total=1.0):
    """Euclidean projection onto ``{x >= 0, sum x = total}`` (sort-based)."""
    y = np.asarray(y, dtype=float)
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - total
    idx = np.arange(1, len(y) + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(y - theta, 0.0)


def lattice_sum_max(k=5, total=math.pi, divisions=500):
    """Exact maximum of ``sum sum_term(x_i)`` over the lattice ``x_i in (total/divisions) N``.

    Max-plus dynamic programming over partial sums visits every lattice
    composition implicitly.
    """
    vals = sum_term(np.arange(divisions + 1) * total / divisions)
    best = vals.copy()
    choice = []
    for _ in range(k - 1):
        nxt = np.full(divisions + 1, -np.inf)
        arg = np.zeros(divisions + 1, dtype=int)
        for s in range(divisions + 1):
            cand = best[: s + 1][::-1] + vals[: s + 1]
            j = int(np.argmax(cand))
            nxt[s], arg[s] = cand[j], j
        choice.append(arg)
        best = nxt
    parts = []
    s = divisions
    for arg in reversed(choice):
        j = int(arg[s])
        parts.append(j)
        s -= j
    parts.append(s)
    return float(best[divisions]), np.array(parts[::-1]) * total / divisions


@dataclass
class ConstrainedSumResult:
    value: float
    argmax: list
    lattice_value: float
    lattice_argmax: list
    restarts: int
    seed: int

    @property
    def agreement(self):
        return abs(self.value - self.lattice_value)

    def to_dict(self):
        return {
            "problem": "constrained-sum",
            "seed": self.seed,
            "restarts": self.restarts,
            "best_value": self.value,
            "configuration": self.argmax,
            "lattice_value": self.lattice_value,
            "lattice_configuration": self.lattice_argmax,
            "agreement": self.agreement,
        }


def constrained_sum_max(seed, restarts=8, k=5, total=math.pi, max_steps=5000):
    """Maximise ``sum sin(t_i/2)/(sqrt 3 - cos(t_i/2))`` on ``t_i >= 0, sum t_i = total``."""
    best_val, best_x = -math.inf, None
    for i in range(restarts):
        rng = restart_rng(seed, i)
        x = rng.dirichlet(np.ones(k)) * total
        val = float(sum_term(x).sum())
        step = 0.5
        for _ in range(max_steps):
            y = project_to_simplex(x + step * sum_term_derivative(x), total)
            new = float(sum_term(y).sum())
            if new > val:
                gain = new - val
                x, val = y, new
                step *= 1.5
                if gain < 1e-15:
                    break
            else:
                step *= 0.5
                if step < 1e-14:
                    break
        if val > best_val:
            best_val, best_x = val, x
    lat_val, lat_x = lattice_sum_max(k, total)
    return ConstrainedSumResult(best_val, best_x.tolist(), lat_val, lat_x.tolist(), restarts, int(seed))


def face_sum_bound(mesh):
    """Sum of per-face maximal-edge bounds ``v(tau_i, c_i)`` over a triangular mesh."""
    from .polyhedra import face_stats
    return sum(v_tau_c(s.tau, s.c) for s in face_stats(mesh))
