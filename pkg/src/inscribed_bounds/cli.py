"""Command-line front end.  All output is JSON (or CSV for region grids).

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""
import argparse
import json
import math
import sys

import numpy as np

from . import bounds, domain, optimizer, polyhedra, verify
from .errors import BoundsError

SIG_DIGITS = 15
ANGLE_KEYS = ("tau", "c", "alpha", "arc", "angle")


def _clean(obj):
    """Round floats to 15 significant digits; non-finite values become null."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(f"{x:.{SIG_DIGITS}g}")
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def dumps(obj):
    return json.dumps(_clean(obj), indent=2)


def _emit(obj, out=None):
    text = dumps(obj) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _angles(args, *names):
    """Read angle arguments, converting from degrees when ``--deg`` is set."""
    out = []
    for name in names:
        v = getattr(args, name)
        if v is None:
            raise BoundsError(f"--{name.replace('_', '-')} is required")
        out.append(math.radians(v) if args.deg else v)
    return out


def _need(args, *names):
    out = []
    for name in names:
        v = getattr(args, name)
        if v is None:
            raise BoundsError(f"--{name.replace('_', '-')} is required")
        out.append(v)
    return out


def _bound_value(args):
    f = args.formula
    if f == "u-general":
        (tau,), (p,) = _angles(args, "tau"), _need(args, "p")
        return {"tau": tau, "p": p}, bounds.u_general(tau, p)
    if f == "u-triangle":
        (tau,) = _angles(args, "tau")
        return {"tau": tau}, bounds.u_triangle(tau)
    if f == "polyhedron":
        fv, v, e = _need(args, "f", "v", "e")
        return {"f": fv, "v": v, "e": e, "radius": args.radius}, bounds.polyhedron_bound(fv, v, e, args.radius)
    if f == "icosahedron":
        (n,) = _need(args, "n")
        return {"n": n, "radius": args.radius}, bounds.icosahedron_inequality(n, args.radius)
    if f == "v-tau-c":
        tau, c = _angles(args, "tau", "c")
        return {"tau": tau, "c": c}, bounds.v_tau_c(tau, c)
    if f == "v-m-alpha":
        (m,), (alpha,) = _need(args, "m"), _angles(args, "alpha")
        return {"m": m, "alpha": alpha}, bounds.v_m_alpha(m, alpha)
    if f == "v-chord-alpha":
        (chord,), (alpha,) = _need(args, "chord"), _angles(args, "alpha")
        return {"chord": chord, "alpha": alpha}, bounds.v_chord_alpha(chord, alpha)
    if f == "v-arc-alpha":
        arc, alpha = _angles(args, "arc", "alpha")
        return {"arc": arc, "alpha": alpha}, bounds.v_arc_alpha(arc, alpha)
    if f == "v-tau-chord":
        tau, alpha = _angles(args, "tau", "alpha")
        (chord,) = _need(args, "chord")
        return {"tau": tau, "chord": chord, "alpha": alpha}, bounds.v_tau_chord(tau, chord, alpha)
    if f == "equilateral-c":
        (tau,) = _angles(args, "tau")
        return {"tau": tau}, bounds.equilateral_c_from_tau(tau)
    if f == "uniform":
        (fv,), (c,) = _need(args, "f"), _angles(args, "c")
        return {"f": fv, "c": c}, bounds.uniform_bound(fv, c)
    if f == "theorem1":
        if not args.face:
            raise BoundsError("theorem1 needs at least one --face TAU C")
        faces = [tuple(math.radians(x) if args.deg else x for x in pair) for pair in args.face]
        fc = domain.classify_faces(faces)
        inputs = {"faces": [list(p) for p in faces], "f_prime": fc.f_prime, "c_prime": fc.c_prime,
                  "c_star": fc.c_star}
        return inputs, bounds.theorem1_bound(fc)
    if f == "theorem2":
        if args.taus is None:
            raise BoundsError("theorem2 needs --taus T1 T2 T3 T4 T5")
        taus = [math.radians(x) if args.deg else x for x in args.taus]
        return {"taus": taus}, bounds.theorem2_assemble(taus)
    if f == "pgon":
        tau, alpha = _angles(args, "tau", "alpha")
        (p,) = _need(args, "p")
        return {"tau": tau, "alpha": alpha, "p": p}, bounds.pgon_tau_bound(tau, alpha, p)
    if f == "pgon-m-alpha":
        (m, p), (alpha,) = _need(args, "m", "p"), _angles(args, "alpha")
        return {"m": m, "alpha": alpha, "p": p}, bounds.v_pgon_m_alpha(m, alpha, p)
    raise BoundsError(f"unknown formula {f!r}")


FORMULAS = (
    "u-general", "u-triangle", "polyhedron", "icosahedron", "v-tau-c", "v-m-alpha",
    "v-chord-alpha", "v-arc-alpha", "v-tau-chord", "equilateral-c", "uniform", "theorem1",
    "theorem2", "pgon", "pgon-m-alpha",
)


def cmd_bound(args):
    inputs, value = _bound_value(args)
    _emit({"formula": args.formula, "inputs": inputs, "value": value}, args.out)
    return 0


def cmd_domain(args):
    if args.omega:
        _emit({"omega": domain.omega()}, args.out)
        return 0
    if args.threshold:
        _emit({"rhombic_threshold": domain.rhombic_threshold()}, args.out)
        return 0
    if args.quartic:
        _emit({"coefficients": list(domain.QUARTIC), "roots": domain.quartic_roots()}, args.out)
        return 0
    if args.query is not None:
        tau, c = (math.radians(x) if args.deg else x for x in args.query)
        region, f_tau = domain._classify(tau, c)
        if region is bounds.Region.OUTSIDE:
            raise BoundsError(f"(tau, c) = ({tau:.15g}, {c:.15g}) outside the parameter domain")
        _emit({"tau": tau, "c": c, "class": region.value, "f_tau": f_tau, "omega": domain.omega(),
               "v": bounds.v_tau_c(tau, c)}, args.out)
        return 0
    grid = domain.region_grid(args.grid)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            grid.write_csv(fh)
    else:
        grid.write_csv(sys.stdout)
    return 0


def cmd_mesh(args):
    axis = args.axis if args.axis is not None else (0.0, 0.0, 1.0)
    angle = math.pi / 2.0 if args.angle is None else (math.radians(args.angle) if args.deg else args.angle)
    mesh = polyhedra.generate(args.shape, n=args.n, axis=axis, angle=angle)
    _emit(mesh.to_dict(), args.out)
    return 0


def cmd_report(args):
    if args.mesh == "-":
        mesh = polyhedra.load_mesh(sys.stdin)
    else:
        try:
            with open(args.mesh, encoding="utf-8") as fh:
                mesh = polyhedra.load_mesh(fh)
        except OSError as exc:
            raise BoundsError(f"cannot read mesh: {exc}") from None
    _emit(polyhedra.bound_report(mesh).to_dict(), args.out)
    return 0


def cmd_verify(args):
    rep = verify.run_suite(args.suite, args.samples, args.seed)
    _emit(rep.to_dict(), args.out)
    return 0 if rep.ok else 1


def cmd_optimize(args):
    if args.problem == "n-points":
        if args.n is None:
            raise BoundsError("n-points needs --n")
        run = optimizer.max_volume_n_points(args.n, args.seed, args.restarts, threads=args.threads)
        ok = run.best_value <= run.certificate_bound + 1e-9
    elif args.problem == "two-tetrahedra":
        run = optimizer.max_two_tetrahedra(args.seed, args.restarts, threads=args.threads)
        ok = run.best_value <= run.certificate_bound + 1e-9
    else:
        run = optimizer.constrained_sum_max(args.seed, args.restarts)
        ok = run.agreement <= 1e-4
    _emit(run.to_dict(), args.out)
    return 0 if ok else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="inscribed-bounds", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.add_argument("--deg", action="store_true", help="angle inputs are in degrees")
        return p

    b = common(sub.add_parser("bound", help="evaluate a closed-form bound"))
    b.add_argument("formula", choices=FORMULAS)
    for name in ("tau", "c", "alpha", "arc", "m", "chord", "radius"):
        b.add_argument(f"--{name}", type=float, default=1.0 if name == "radius" else None)
    for name in ("p", "f", "v", "e", "n"):
        b.add_argument(f"--{name}", type=int)
    b.add_argument("--face", nargs=2, type=float, action="append", metavar=("TAU", "C"))
    b.add_argument("--taus", nargs=5, type=float)
    b.set_defaults(func=cmd_bound)

    d = common(sub.add_parser("domain", help="region grid, single query or constants"))
    g = d.add_mutually_exclusive_group(required=True)
    g.add_argument("--grid", type=int, metavar="RESOLUTION")
    g.add_argument("--query", nargs=2, type=float, metavar=("TAU", "C"))
    g.add_argument("--omega", action="store_true")
    g.add_argument("--threshold", action="store_true", help="smallest tau with f(tau) >= pi/2")
    g.add_argument("--quartic", action="store_true")
    d.set_defaults(func=cmd_domain)

    m = common(sub.add_parser("mesh", help="generate a mesh as JSON"))
    m.add_argument("shape", choices=[s.replace("_", "-") for s in polyhedra.SHAPES])
    m.add_argument("--n", type=int, help="ring size for bipyramid")
    m.add_argument("--axis", nargs=3, type=float)
    m.add_argument("--angle", type=float)
    m.set_defaults(func=cmd_mesh)

    r = common(sub.add_parser("report", help="volume against bound for a mesh file ('-' for stdin)"))
    r.add_argument("mesh")
    r.set_defaults(func=cmd_report)

    v = common(sub.add_parser("verify", help="run a sampling verifier"))
    v.add_argument("suite", choices=verify.SUITES)
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--seed", type=int, required=True)
    v.set_defaults(func=cmd_verify)

    o = common(sub.add_parser("optimize", help="seeded multi-restart optimisation"))
    o.add_argument("problem", choices=("n-points", "two-tetrahedra", "constrained-sum"))
    o.add_argument("--seed", type=int, required=True)
    o.add_argument("--restarts", type=int, default=16)
    o.add_argument("--n", type=int)
    o.add_argument("--threads", type=int, default=1)
    o.set_defaults(func=cmd_optimize)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except BoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
