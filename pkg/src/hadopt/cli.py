"""Command-line front end.

Subcommands::

    hadopt run       solve a median / p-mean problem and write the trace as CSV
    hadopt distance  BHV distances between the trees in a Newick file
    hadopt geodesic  tree at distance t along the geodesic between two trees
    hadopt fopt      reference optimum of a median / p-mean problem

Exit codes: 0 on success, 2 for malformed Newick or bad usage, 1 for any
other failure.  ``HADOPT_LOG`` sets the log level (DEBUG, INFO, WARNING, ...).
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys

from . import presets as _presets
from .errors import HadoptError, NewickError
from .oracles import eval_objective
from .reference import example7_1_fopt, reference_fopt, spine_fopt
from .solvers import (Explicit, Harmonic, IndexSampler, Theory, complexity_bound, cyclic_proximal_median,
                      incremental_subgradient, median_setup, pmean_setup,
                      stochastic_subgradient)
from .spaces import Cone, Euclidean, ExtensionPolicy, Hyperbolic, Spider
from .treespace import TreeSpace, bhv_distance, bhv_point, parse_newick, read_newick_file, serialize_newick

log = logging.getLogger("hadopt")

SPACES = ("euclidean", "hyperbolic", "spider", "cone", "tree")


def _g(x):
    return f"{x:.12g}"


# --------------------------------------------------------------------------
# argument decoding


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _make_space(name, anchors_text):
    if name == "euclidean":
        first = anchors_text.split(";")[0]
        return Euclidean(len(_floats(first)))
    if name == "hyperbolic":
        return Hyperbolic()
    if name == "spider":
        return Spider(max(int(float(p.split(",")[0])) for p in anchors_text.split(";")) + 1)
    if name == "cone":
        return Cone(5)
    raise HadoptError(f"unknown space {name!r}")


def _parse_point(space, text):
    vals = _floats(text)
    if isinstance(space, Euclidean):
        if len(vals) != space.dim:
            raise HadoptError(f"point {text!r} does not have {space.dim} coordinates")
        return space.point(*vals)
    if isinstance(space, Hyperbolic):
        return space.point(*vals)
    if isinstance(space, Spider):
        return space.point(int(vals[0]), vals[1])
    if isinstance(space, Cone):
        return space.point(int(vals[0]), vals[1], vals[2])
    raise HadoptError(f"cannot parse points of {space!r}")


def _problem(args):
    """Return ``(space, anchors, weights, x0, preset)`` from the parsed arguments."""
    preset = _presets.get_preset(args.preset) if args.preset else None
    if preset is not None:
        space, anchors, weights = preset.space, preset.anchors, preset.weights
        x0 = preset.x0
    elif args.space == "tree" or (args.space is None and args.trees):
        if not args.trees:
            raise HadoptError("--space tree needs --trees FILE")
        anchors = tuple(read_newick_file(args.trees))
        if not anchors:
            raise HadoptError(f"{args.trees}: no trees")
        space = TreeSpace(anchors[0].leaves)
        weights, x0 = None, space.basepoint
    else:
        if not args.space or not args.anchors:
            raise HadoptError("give --preset, --space tree --trees FILE, or --space NAME --anchors LIST")
        space = _make_space(args.space, args.anchors)
        anchors = tuple(_parse_point(space, p) for p in args.anchors.split(";") if p.strip())
        weights, x0 = None, space.basepoint
    if args.weights:
        weights = tuple(_floats(args.weights))
        if len(weights) != len(anchors):
            raise HadoptError(f"{len(weights)} weights for {len(anchors)} anchors")
    if getattr(args, "x0", None):
        x0 = parse_newick(args.x0) if isinstance(space, TreeSpace) else _parse_point(space, args.x0)
    return space, anchors, weights, x0, preset


def _schedule(text, default):
    if not text:
        return default
    name, _, param = text.partition(":")
    name = name.lower()
    if name == "theory":
        return default
    if name == "harmonic":
        return Harmonic(float(param) if param else 1.0)
    if name == "explicit":
        if not param:
            raise HadoptError("explicit stepsizes need a file: explicit:FILE")
        with open(param, encoding="utf-8") as fh:
            return Explicit([float(line) for line in fh if line.strip() and not line.startswith("#")])
    raise HadoptError(f"unknown stepsize {text!r}")


def _fopt_for(space, anchors, weights, p, preset):
    as_shipped = preset is not None and p == 1.0 and (weights is None or tuple(weights) == preset.weights)
    if as_shipped and preset.name == "example7_1":
        return example7_1_fopt()
    if as_shipped and preset.name == "example7_2":
        return spine_fopt(_presets.EXAMPLE7_2_COORDS)[1]
    return reference_fopt(space, anchors, weights, p)


# --------------------------------------------------------------------------
# commands


def cmd_run(args):
    space, anchors, weights, x0, preset = _problem(args)
    if args.iters < 1:
        raise HadoptError("--iters must be >= 1")
    if args.stride < 1:
        raise HadoptError("--stride must be >= 1")
    policy = ExtensionPolicy[args.policy.upper()]
    p = args.p
    if p == 1.0:
        obj, ball = median_setup(space, anchors, weights, x0)
        f0 = eval_objective(obj, x0)
        # the median step: speed w_i times D / (m sqrt(k+1)) with D = 2 f(x0) / w*
        default = Theory(2.0 * f0 / obj.L, 1.0, obj.m) if f0 > 0 else Harmonic(1.0)
    else:
        obj, ball = pmean_setup(space, anchors, weights, x0, p)
        default = Theory(2.0 * ball.radius, obj.L, obj.m) if ball.radius > 0 else Harmonic(1.0)
    schedule = _schedule(args.stepsize, default)
    f_opt = args.fopt
    if f_opt is None and preset is not None:
        f_opt = _fopt_for(space, anchors, weights, p, preset)
    bound = "auto"
    if p == 1.0:
        bound = None if f0 == 0 else lambda k: complexity_bound("median", obj.m, k, f0=f0)
    log.info("space=%r m=%d alg=%s schedule=%r f_opt=%s", space, obj.m, args.alg, schedule, f_opt)

    if args.alg == "stochastic":
        trace = stochastic_subgradient(obj, ball, x0, schedule, IndexSampler(args.seed), args.iters,
                                       f_opt=f_opt, policy=policy, bound=bound)
    elif args.alg == "incremental":
        trace = incremental_subgradient(obj, ball, x0, schedule, args.iters, f_opt=f_opt,
                                        policy=policy, bound=bound)
    elif args.alg == "proximal":
        if p != 1.0:
            raise HadoptError("the proximal algorithm is implemented for the median (p = 1) only")
        trace = cyclic_proximal_median(space, anchors, weights, x0, schedule, args.iters, f_opt=f_opt)
    else:
        raise HadoptError(f"unknown algorithm {args.alg!r}")

    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            trace.to_csv(fh, args.stride)
    else:
        trace.to_csv(sys.stdout, args.stride)
    last = trace.rows[-1]
    print(f"f_best {_g(last[2])}", file=sys.stderr)
    if not math.isnan(last[3]):
        print(f"gap {_g(last[3])}", file=sys.stderr)
    if isinstance(space, TreeSpace):
        print(f"best {serialize_newick(trace.best)}", file=sys.stderr)
    return 0


def _trees(path, need=2):
    trees = read_newick_file(path)
    if len(trees) < need:
        raise HadoptError(f"{path}: need at least {need} trees, found {len(trees)}")
    leaves = trees[0].leaves
    if any(t.leaves != leaves for t in trees):
        raise HadoptError(f"{path}: trees have different leaf sets")
    return trees


def cmd_distance(args):
    trees = _trees(args.trees)
    if len(trees) == 2:
        print(_g(bhv_distance(trees[0], trees[1], args.pendants)))
    else:
        for a in trees:
            print(" ".join(_g(bhv_distance(a, b, args.pendants)) for b in trees))
    return 0


def cmd_geodesic(args):
    t1, t2 = _trees(args.trees)[:2]
    print(serialize_newick(bhv_point(t1, t2, args.t, args.pendants)))
    return 0


def cmd_fopt(args):
    space, anchors, weights, x0, preset = _problem(args)
    print(_g(_fopt_for(space, anchors, weights, args.p, preset)))
    return 0


# --------------------------------------------------------------------------


def _problem_flags(p):
    p.add_argument("--preset", choices=sorted(_presets.PRESETS), help="built-in problem")
    p.add_argument("--space", choices=SPACES, help="space of the anchors")
    p.add_argument("--trees", metavar="FILE", help="Newick file of anchor trees")
    p.add_argument("--anchors", metavar="LIST", help="anchor points, coordinates by ',' and points by ';'")
    p.add_argument("--weights", metavar="LIST", help="comma-separated weights (normalised if needed)")
    p.add_argument("--p", type=float, default=1.0, help="exponent: 1 for the median, >1 for a p-mean")


def build_parser():
    ap = argparse.ArgumentParser(prog="hadopt", description="Busemann subgradient methods on Hadamard spaces")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a solver and write the trace as CSV")
    _problem_flags(run)
    run.add_argument("--alg", choices=("stochastic", "incremental", "proximal"), default="incremental")
    run.add_argument("--stepsize", metavar="NAME[:PARAM]",
                     help="theory (default) | harmonic[:c] | explicit:FILE")
    run.add_argument("--iters", type=int, default=1000)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--fopt", type=float, help="known optimal value (enables the gap column)")
    run.add_argument("--out", metavar="FILE", help="CSV destination (default stdout)")
    run.add_argument("--stride", type=int, default=1, help="write every stride-th row")
    run.add_argument("--x0", help="start point (Newick for trees, coordinates otherwise)")
    run.add_argument("--policy", choices=("error", "clamp"), default="error",
                     help="behaviour when a step passes the end of a tree geodesic")
    run.set_defaults(func=cmd_run)

    dist = sub.add_parser("distance", help="BHV distance between trees in a file")
    dist.add_argument("--trees", metavar="FILE", required=True)
    dist.add_argument("--pendants", action="store_true", help="include leaf edges")
    dist.set_defaults(func=cmd_distance)

    geo = sub.add_parser("geodesic", help="point at distance t from the first tree toward the second")
    geo.add_argument("--trees", metavar="FILE", required=True)
    geo.add_argument("--t", type=float, required=True)
    geo.add_argument("--pendants", action="store_true", help="include leaf edges")
    geo.set_defaults(func=cmd_geodesic)

    fopt = sub.add_parser("fopt", help="reference optimum")
    _problem_flags(fopt)
    fopt.set_defaults(func=cmd_fopt)
    return ap


def main(argv=None):
    level = os.environ.get("HADOPT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NewickError as exc:
        print(f"hadopt: invalid Newick: {exc}", file=sys.stderr)
        return 2
    except (HadoptError, OSError, ValueError, KeyError) as exc:
        print(f"hadopt: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
