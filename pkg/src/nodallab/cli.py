"""Command-line entry point: ``nodallab {zeros,count,sweep,verify,plot}``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid arguments.
All randomness is drawn from ``--seed`` (default 0xC0FFEE), so identical
arguments give byte-identical CSV output.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import circles, contour, export, suites
from .errors import NodalLabError, SearchFailure, TheoremViolation
from .harmonics import Eigenfunction, normalize
from .legendre import MAX_DEGREE, legendre_eval, legendre_zeros
from .mesh import icosphere

DEFAULT_SEED = 0xC0FFEE


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int = 10
    n_max: int = 8
    seed: int = DEFAULT_SEED
    subdivisions: int = 5
    trials: int = 100
    tol_certify: float = contour.CERTIFY_TOL
    tol_ortho: float = 1e-6
    tol_cover: float = 1e-3
    out: str | None = None
    fmt: str = "csv"


def _axis(values):
    return normalize(np.array(values, float))


def _axes(args):
    if args.axis_a is not None or args.axis_b is not None:
        if args.axis_a is None or args.axis_b is None:
            raise argparse.ArgumentTypeError("--axis-a and --axis-b go together")
        return _axis(args.axis_a), _axis(args.axis_b)
    return circles.axes_at_angle(args.angle)


def _emit(text, out):
    if out:
        export.write_text(text, out)
    else:
        sys.stdout.write(text)


def cmd_zeros(args, cfg):
    z = legendre_zeros(cfg.n).zeros
    rows = [(k, float(x), float(np.arccos(x)), float(abs(legendre_eval(cfg.n, x))))
            for k, x in enumerate(z, start=1)]
    _emit(export.csv_text(export.schema_header("zeros"), rows), cfg.out)
    return 0


def _count_row(n, a, b):
    d = circles.count_common_zeros_direct(a, b, n)
    c = circles.chord_model_count(a, b, n)
    angle = float(np.arccos(np.clip(a @ b, -1.0, 1.0)))
    return (n, angle, d.interior, d.boundary, d.total_sphere, c.interior, c.boundary, c.total_sphere,
            d == c)


def cmd_count(args, cfg):
    a, b = _axes(args)
    _emit(export.csv_text(export.schema_header("count"), [_count_row(cfg.n, a, b)]), cfg.out)
    return 0


def cmd_sweep(args, cfg):
    degrees = range(1, cfg.n_max + 1)
    header = export.schema_header(f"sweep_{args.mode}")
    if args.mode == "close":
        a, b = circles.axes_at_angle(args.angle)
        rows = [(n, args.angle, circles.count_common_zeros_direct(a, b, n).total_sphere, 2 * n) for n in degrees]
    elif args.mode == "perp":
        rows = [(r.n, r.count.total_sphere, r.ratio) for r in circles.asymptotic_c_sweep(degrees)]
    else:
        rng = np.random.default_rng(cfg.seed)
        rows = []
        for n in degrees:
            c = circles.random_pair_counts(n, cfg.trials, rng)
            rows.append((n, cfg.trials, int(c.min()), int(c.max()), float(c.mean())))
    _emit(export.csv_text(header, rows), cfg.out)
    return 0


def cmd_verify(args, cfg):
    checks = suites.run(args.suite, cfg)
    ok = all(c.ok for c in checks)
    if cfg.fmt == "csv":
        text = export.csv_text(export.schema_header("verify"),
                               [(c.suite, c.name, "PASS" if c.ok else "FAIL", c.detail) for c in checks])
    else:
        text = "".join(c.line() + "\n" for c in checks) + ("PASS" if ok else "FAIL") + "\n"
    _emit(text, cfg.out)
    return 0 if ok else 1


def cmd_plot(args, cfg):
    if args.what == "chords":
        a, b = _axes(args)
        svg = export.chord_svg(circles.chord_diagram(a, b, cfg.n))
    else:
        rng = np.random.default_rng(cfg.seed)
        u, v = Eigenfunction.random(cfg.n, rng), Eigenfunction.random(cfg.n, rng)
        r = contour.common_zero_search(u, v, icosphere(cfg.subdivisions))
        svg = export.contours_svg(r.contours, r.points)
    _emit(svg, cfg.out)
    return 0


def _positive(kind):
    def parse(s):
        x = kind(s)
        if x <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {s}")
        return x
    return parse


def build_parser():
    p = argparse.ArgumentParser(prog="nodallab", description="Common zeros of Laplace eigenfunctions")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_positive(int), default=10, help="degree")
    common.add_argument("--n-max", type=_positive(int), default=8, help="largest degree in sweeps and suites")
    common.add_argument("--angle", type=float, default=1e-3, help="angle between the two axes (radians)")
    common.add_argument("--axis-a", type=float, nargs=3, metavar=("X", "Y", "Z"))
    common.add_argument("--axis-b", type=float, nargs=3, metavar=("X", "Y", "Z"))
    common.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    common.add_argument("--subdivisions", type=int, default=5, choices=range(0, 9))
    common.add_argument("--trials", type=_positive(int), default=100)
    common.add_argument("--tol-certify", type=_positive(float), default=contour.CERTIFY_TOL)
    common.add_argument("--tol-ortho", type=_positive(float), default=1e-6)
    common.add_argument("--tol-cover", type=_positive(float), default=1e-3)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", dest="fmt", choices=("csv", "svg", "tsv-summary"))
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("zeros", parents=[common], help="Legendre zeros as CSV")
    sub.add_parser("count", parents=[common], help="direct and chord-model counts")
    s = sub.add_parser("sweep", parents=[common], help="count table over degrees")
    s.add_argument("--mode", choices=("close", "perp", "random"), default="perp")
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("suite", nargs="+", choices=(*suites.SUITES, "all"))
    pl = sub.add_parser("plot", parents=[common], help="SVG figures")
    pl.add_argument("what", choices=("chords", "contours"))
    return p


COMMANDS = {"zeros": cmd_zeros, "count": cmd_count, "sweep": cmd_sweep, "verify": cmd_verify, "plot": cmd_plot}
DEFAULT_FORMAT = {"verify": "tsv-summary", "plot": "svg"}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.fmt or DEFAULT_FORMAT.get(args.command, "csv")
    allowed = {"plot": ("svg",), "verify": ("tsv-summary", "csv")}.get(args.command, ("csv",))
    if fmt not in allowed:
        parser.error(f"--format {fmt} is not available for {args.command}")
    if args.n > MAX_DEGREE:
        parser.error(f"--n must be at most {MAX_DEGREE}")
    cfg = RunConfig(args.command, args.n, args.n_max, args.seed, args.subdivisions, args.trials,
                    args.tol_certify, args.tol_ortho, args.tol_cover, args.out, fmt)
    try:
        return COMMANDS[args.command](args, cfg)
    except (TheoremViolation, SearchFailure) as e:
        print(f"nodallab: check failed: {e}", file=sys.stderr)
        return 1
    except (argparse.ArgumentTypeError, NodalLabError, ValueError) as e:
        print(f"nodallab: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
