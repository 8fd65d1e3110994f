#!/usr/bin/env python3
"""
GrassMean - distance inequalities on Grassmannians
Command-line front end: matrix files, golden examples and Monte-Carlo sweeps.
"""

import argparse
import json
import logging
import os
import sys

import numpy as np

# Add the project root to the Python path
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, project_root)

from src.experiments.golden import reproduce_examples
from src.experiments.sweep import find_violation, parse_t_grid, radius_sweep, write_sweep_csv
from src.geometry.errors import CutLocus, GoldenMismatch, GrassmannError, NotFound
from src.geometry.grassmann import CANONICAL, CONVENTIONS, SWAPPED, principal_angles
from src.geometry.inequal import triangle_report
from src.geometry.matfun import Field
from src.geometry.sampling import BallSpec, RngStream, random_projector, sample_ball
from src.utils.config_manager import ConfigManager
from src.utils.matrix_io import matrix_to_dict, read_projector, write_matrix
from src.version import get_full_version

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_CUT_LOCUS = 3
EXIT_GOLDEN = 4

T_RANGE = (0.0, 1.0)
T_RANGE_EXTENDED = (-0.5, 1.5)


def setup_logging(level="INFO", log_file=None):
    """Configure the root logger; reports go to stdout, logs to stderr"""
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,
    )


def emit(name, value, out=None):
    """Print one name=value report line"""
    out = out or sys.stdout
    if isinstance(value, float):
        value = format(value, ".12g")
    elif isinstance(value, np.ndarray):
        value = ",".join(format(float(v), ".12g") for v in value)
    print(f"{name}={value}", file=out)


def _convention(args):
    if args.convention:
        return CONVENTIONS[args.convention]
    # canonical distances never violate the comparison laws, so the search defaults to swapped
    return SWAPPED if args.command == "find-violation" else CANONICAL


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def cmd_distance(args, config):
    p = read_projector(args.first, tol=args.tol)
    q = read_projector(args.second, tol=args.tol)
    convention = _convention(args)
    emit("distance", convention.distance(p, q, args.cut_tol))
    emit("principal_angles", principal_angles(p, q))
    return EXIT_OK


def cmd_mean(args, config):
    low, high = T_RANGE_EXTENDED if args.extend else T_RANGE
    if not low <= args.t <= high:
        logger.error(f"t = {args.t} outside [{low}, {high}]" + ("" if args.extend else "; use --extend"))
        return EXIT_INPUT
    p = read_projector(args.first, tol=args.tol)
    q = read_projector(args.second, tol=args.tol)
    mean = _convention(args).mean(p, q, args.t, args.cut_tol)
    if args.out:
        write_matrix(args.out, mean)
        logger.info(f"Wrote the mean at t = {args.t} to {args.out}")
    else:
        print(json.dumps(matrix_to_dict(mean.mat)))
    return EXIT_OK


def cmd_triangle(args, config):
    a, b, c = (read_projector(path, tol=args.tol) for path in args.files)
    t_grid = parse_t_grid(args.t_grid.split(",")) if args.t_grid else parse_t_grid(config.get("sweep.t_grid"))
    report = triangle_report(a, b, c, t_grid, _convention(args), args.cut_tol)
    for name, value in report.items():
        emit(name, value)
    emit("worst_residual", report.worst_residual())
    return EXIT_OK


def cmd_verify_examples(args, config):
    golden_dir = args.golden_dir or config.resolve_path("golden_dir")
    results = reproduce_examples(golden_dir, strict=args.strict)
    for result in results:
        emit(result.case, "PASS" if result.passed else "FAIL")
        for failure in result.failures:
            logger.error(f"{result.case}: {failure}")
    if all(r.passed for r in results):
        return EXIT_OK
    return EXIT_GOLDEN


def cmd_sweep(args, config):
    radii = _floats(args.radii) if args.radii else config.get("sweep.radii")
    t_grid = parse_t_grid(args.t_grid.split(",") if args.t_grid else config.get("sweep.t_grid"))
    samples = args.samples or config.get("sweep.samples_per_radius", 200)
    workers = args.workers or config.get("sweep.workers", 1)
    records = radius_sweep(
        args.n, args.k, Field(args.field), radii, samples, t_grid, args.seed,
        convention=_convention(args), workers=workers, cut_tol=args.cut_tol,
        eps=config.get("numerics.residual_eps", 1e-9),
    )
    if args.out:
        with open(args.out, "w", newline="") as f:
            write_sweep_csv(records, f)
        logger.info(f"Wrote {len(records)} sweep rows to {args.out}")
    else:
        write_sweep_csv(records, sys.stdout)
    return EXIT_OK


def cmd_sample(args, config):
    stream = RngStream(args.seed)
    center = random_projector(args.n, args.k, Field(args.field), stream.generator(0))
    spec = BallSpec(center, args.radius)
    count = args.count or config.get("sampling.default_count", 10)
    points = sample_ball(spec, count, stream.generator(1))
    os.makedirs(args.out, exist_ok=True)
    write_matrix(os.path.join(args.out, "center.json"), center)
    for index, point in enumerate(points):
        write_matrix(os.path.join(args.out, f"point_{index:03d}.json"), point)
    emit("count", count)
    emit("directory", args.out)
    return EXIT_OK


def cmd_find_violation(args, config):
    t_grid = parse_t_grid(args.t_grid.split(",") if args.t_grid else config.get("sweep.t_grid"))
    witness = find_violation(
        args.n, args.k, Field(args.field), args.radius, args.max_tries, args.seed,
        convention=_convention(args), t_grid=t_grid,
        eps=config.get("numerics.witness_eps", 1e-6), cut_tol=args.cut_tol,
    )
    emit("convention", witness.convention)
    emit("attempt", witness.attempt)
    emit("violated", ",".join(witness.violated))
    for name, value in witness.residuals.items():
        emit(f"r_{name}", value)
    if args.out:
        with open(args.out, "w") as f:
            json.dump(witness.to_dict(), f, indent=2)
        logger.info(f"Wrote witness to {args.out}")
    return EXIT_OK


def build_parser(config):
    """Argument parser; defaults come from the configuration"""
    parser = argparse.ArgumentParser(description="GrassMean - distance inequalities on Grassmannians")
    parser.add_argument("--version", action="version", version=get_full_version())
    parser.add_argument("--config", help="User configuration file overlaying the defaults")
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    parser.add_argument("--convention", choices=sorted(CONVENTIONS),
                        help="Reading of distance and mean (default: canonical; swapped for find-violation)")
    parser.add_argument("--tol", type=float, default=config.get("numerics.file_tol", 1e-3),
                        help="Projector validation tolerance for matrix files")
    parser.add_argument("--cut-tol", type=float, default=config.get("numerics.cut_tol", 1e-6),
                        help="Phase distance from pi treated as the cut locus")
    sub = parser.add_subparsers(dest="command", required=True)

    distance = sub.add_parser("distance", help="Geodesic distance and principal angles")
    distance.add_argument("first")
    distance.add_argument("second")
    distance.set_defaults(func=cmd_distance)

    mean = sub.add_parser("mean", help="Point at parameter t on the geodesic")
    mean.add_argument("first")
    mean.add_argument("second")
    mean.add_argument("--t", type=float, default=0.5)
    mean.add_argument("--extend", action="store_true", help="Admit t in [-0.5, 1.5]")
    mean.add_argument("--out", help="Output matrix file (default: stdout)")
    mean.set_defaults(func=cmd_mean)

    triangle = sub.add_parser("triangle", help="Residuals of every inequality on a triangle")
    triangle.add_argument("files", nargs=3)
    triangle.add_argument("--t-grid", help="Comma-separated t values, e.g. 1/4,1/2,0.9")
    triangle.set_defaults(func=cmd_triangle)

    verify = sub.add_parser("verify-examples", help="Re-evaluate the golden worked examples")
    verify.add_argument("--golden-dir")
    verify.add_argument("--strict", action="store_true", help="Stop at the first mismatch")
    verify.set_defaults(func=cmd_verify_examples)

    seed = config.get("sampling.seed", 42)
    for name, func, help_text in (
        ("sweep", cmd_sweep, "Violation rates over a range of ball radii (CSV)"),
        ("sample", cmd_sample, "Write random points of a geodesic ball"),
        ("find-violation", cmd_find_violation, "Search for a violating triangle"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--n", type=int, default=2)
        cmd.add_argument("--k", type=int, default=1)
        cmd.add_argument("--field", choices=[f.value for f in Field], default=Field.COMPLEX.value)
        cmd.add_argument("--seed", type=int, default=seed)
        cmd.set_defaults(func=func)
        if name == "sweep":
            cmd.add_argument("--radii", help="Comma-separated ascending radii")
            cmd.add_argument("--samples", type=int, help="Triples per radius")
            cmd.add_argument("--t-grid")
            cmd.add_argument("--workers", type=int)
            cmd.add_argument("--out", help="CSV path (default: stdout)")
        elif name == "sample":
            cmd.add_argument("--radius", type=float, default=np.pi / 16)
            cmd.add_argument("--count", type=int)
            cmd.add_argument("--out", default="samples", help="Output directory")
        else:
            cmd.add_argument("--radius", type=float, default=1.4)
            cmd.add_argument("--max-tries", type=int, default=10000)
            cmd.add_argument("--t-grid")
            cmd.add_argument("--out", help="Witness JSON path")
    return parser


def _config_path(argv):
    """--config has to be known before the parser is built"""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    return known.config


def main(argv=None):
    """Main entry point"""
    argv = sys.argv[1:] if argv is None else argv
    user_config = _config_path(argv)
    config = ConfigManager(config_path=user_config) if user_config else ConfigManager()
    args = build_parser(config).parse_args(argv)

    level = "DEBUG" if args.debug else config.get("system.log_level", "INFO")
    setup_logging(level, config.get("system.log_file") or None)

    try:
        return args.func(args, config)
    except CutLocus as e:
        logger.error(f"Cut locus: {e}")
        return EXIT_CUT_LOCUS
    except GoldenMismatch as e:
        logger.error(f"Golden mismatch: {e}")
        return EXIT_GOLDEN
    except NotFound as e:
        logger.error(str(e))
        return EXIT_FAILURE
    except (GrassmannError, OSError) as e:
        logger.error(f"Input error: {e}")
        return EXIT_INPUT
    except Exception as e:
        logger.error(f"Unexpected error: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
