"""Command line entry point: ``randpoly sample|hull|lp|geometry|bounds|experiment``.

Exit codes: 0 success, 2 invalid arguments, 3 degenerate geometry.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import analysis, geometry
from .errors import (
    DegenerateGeometryError,
    OriginNotInteriorError,
    RandpolyError,
    SingularSystemError,
    ThresholdUnattainableError,
    ValidationError,
)
from .harness import EXPERIMENTS, ExperimentConfig, emit_report, fit_exponent, format_report, run_experiment
from .hull import beneath_beyond
from .sampler import Seed, cloud_from_csv, cloud_to_csv, sample_polytope, sample_sphere_points
from .shadow import LPInstance, solve_shadow_vertex

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VALIDATION = 2
EXIT_DEGENERATE = 3

GEOMETRY_OPS = {
    "ball_volume": (geometry.ball_volume, ("n",)),
    "sphere_surface": (geometry.sphere_surface, ("n",)),
    "cap_volume": (geometry.cap_volume, ("n", "h")),
    "cap_surface": (geometry.cap_surface, ("n", "h")),
    "belt_volume": (geometry.belt_volume, ("n", "r")),
    "belt_surface": (geometry.belt_surface, ("n", "r")),
    "cap_volume_asymptotic": (geometry.cap_volume_asymptotic, ("n", "h")),
    "solve_delta": (geometry.solve_delta, ("n", "m", "c")),
}


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(prog="randpoly", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def cloud_args(p):
        p.add_argument("--cloud", metavar="CSV", help="read points from a CSV with header x1,...,xn")
        p.add_argument("--n", type=int, help="dimension when sampling inline")
        p.add_argument("--m", type=int, help="number of points when sampling inline")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sample", help="sample m uniform points on S^{n-1} as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("hull", help="facets of a cloud via Beneath-Beyond")
    cloud_args(p)
    p.add_argument("--include-origin", action="store_true")
    p.add_argument("--out", metavar="PATH", help="facet CSV path; stats JSON then goes to stdout")

    p = sub.add_parser("lp", help="solve max <v,x> s.t. <a_i,x> <= 1 by shadow vertex")
    cloud_args(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--objective", type=_float_list, metavar="V1,...,VN")
    group.add_argument("--random-objective", action="store_true")
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("geometry", help="evaluate a ball/cap/belt measure")
    p.add_argument("--op", choices=sorted(GEOMETRY_OPS), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--c", type=float)

    p = sub.add_parser("bounds", help="facet and pivot constants/bounds as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--h", type=float, help="also report the facet survival probability at distance h")

    p = sub.add_parser("experiment", help="run a seeded Monte Carlo experiment")
    p.add_argument("--experiment", choices=EXPERIMENTS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m-grid", type=_int_list, required=True, metavar="A,B,C")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--timing", action="store_true", help="record wall time (makes reports non-reproducible)")
    return parser


def _write(text, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_cloud(args):
    if args.cloud:
        with open(args.cloud) as fh:
            return cloud_from_csv(fh.read())
    if args.n is None or args.m is None:
        raise ValidationError("give --cloud or both --n and --m")
    return sample_polytope(args.n, args.m, Seed(args.seed))


def cmd_sample(args):
    _write(cloud_to_csv(sample_polytope(args.n, args.m, Seed(args.seed))), args.out)


def cmd_hull(args):
    cloud = _load_cloud(args)
    P, stats = beneath_beyond(cloud, includes_origin=args.include_origin)
    n = cloud.n
    lines = [",".join([f"v{i + 1}" for i in range(n)] + [f"b{i + 1}" for i in range(n)] + ["h"])]
    for f in P.facets:
        lines.append(",".join([str(v) for v in f.vertices] + [f"{x:.17g}" for x in f.normal] + [f"{f.offset:.17g}"]))
    _write("\n".join(lines) + "\n", args.out)
    stats_json = json.dumps(stats.as_dict()) + "\n"
    (sys.stdout if args.out else sys.stderr).write(stats_json)


def cmd_lp(args):
    cloud = _load_cloud(args)
    if args.random_objective:
        v = sample_sphere_points(cloud.n, 1, Seed(args.seed).split(1).generator())[0]
    else:
        v = np.array(args.objective)
    sol = solve_shadow_vertex(LPInstance(cloud, v))
    _write(json.dumps(sol.as_dict()) + "\n", args.out)


def cmd_geometry(args):
    fn, params = GEOMETRY_OPS[args.op]
    values = []
    for name in params:
        val = getattr(args, name)
        if val is None:
            raise ValidationError(f"--op {args.op} needs --{name}")
        values.append(val)
    print(f"{fn(*values):.12g}")


def cmd_bounds(args):
    n, m = args.n, args.m
    out = {
        "n": n,
        "m": m,
        "facet_constant": analysis.facet_constant(n).value,
        "facet_limit": analysis.facet_constant(n).value * m,
        "borgwardt_bound": analysis.borgwardt_bound(n, m).value,
    }
    if m >= 2 * n:
        out["facet_upper_bound"] = analysis.facet_upper_bound(n, m).value
        try:
            out["delta"] = geometry.solve_delta(n, m, 2 * (n + 1))
        except ThresholdUnattainableError:
            out["delta"] = None
    if args.h is not None:
        out["survival_probability"] = analysis.facet_survival_probability(n, m, args.h).value
    print(json.dumps(out))


def cmd_experiment(args):
    cfg = ExperimentConfig(
        experiment=args.experiment,
        n=args.n,
        m_grid=tuple(args.m_grid),
        trials=args.trials,
        seed=args.seed,
        timing=args.timing,
    )
    records = run_experiment(cfg)
    fit = fit_exponent(records) if len({r.m for r in records}) >= 3 else None
    if args.out:
        emit_report(records, fit, args.format, args.out)
    else:
        sys.stdout.write(format_report(records, fit, args.format))


COMMANDS = {
    "sample": cmd_sample,
    "hull": cmd_hull,
    "lp": cmd_lp,
    "geometry": cmd_geometry,
    "bounds": cmd_bounds,
    "experiment": cmd_experiment,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        COMMANDS[args.command](args)
    except (DegenerateGeometryError, SingularSystemError, OriginNotInteriorError) as exc:
        print(f"randpoly: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValidationError, ValueError) as exc:
        print(f"randpoly: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (RandpolyError, OSError) as exc:
        print(f"randpoly: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
