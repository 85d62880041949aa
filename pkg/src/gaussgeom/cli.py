"""Command-line interface: ``gaussgeom <subcommand> ...``.

Exit codes: 0 success, 1 unphysical state (``validate`` only), 2 usage
error, 3 file-format error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import ensemble_stats, measures, metrics
from .exceptions import CovarianceFormatError, NumericalError
from .io import read_covariance, render_table, write_atomic
from .quadrature import QuadratureConfig
from .sampling import DEFAULT_SEED, METHODS, SamplerConfig, sample_batch
from .symplectic_core import as_covariance, mode_count, symplectic_spectrum, validate_covariance

EXIT_OK, EXIT_UNPHYSICAL, EXIT_USAGE, EXIT_FORMAT, EXIT_NUMERICAL = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from exc


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", help="output file (default: standard output)")
    common.add_argument("--precision", type=_positive_int, default=12, help="significant digits")
    common.add_argument("--rtol", type=float, default=1e-10, help="quadrature relative tolerance")
    common.add_argument("--atol", type=float, default=1e-12, help="quadrature absolute tolerance")
    common.add_argument("--verbose", "-v", action="store_true")

    parser = argparse.ArgumentParser(prog="gaussgeom", description="Geometry of mixed Gaussian states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check sigma + iJ >= 0")
    p.add_argument("file")

    p = sub.add_parser("spectrum", parents=[common], help="symplectic eigenvalues")
    p.add_argument("file")

    p = sub.add_parser("distance", parents=[common], help="distance between two states")
    p.add_argument("--metric", choices=("hs", "bures"), default="hs")
    p.add_argument("file_a")
    p.add_argument("file_b")

    p = sub.add_parser("density", parents=[common], help="evaluate a measure density")
    p.add_argument("--family", choices=("hs-spectral", "bures-spectral", "purity"), required=True)
    p.add_argument("--modes", type=_positive_int, default=1)
    p.add_argument("--at", type=_floats, action="append", required=True,
                   help="evaluation point(s); for hs-spectral one spectrum of N values per --at")
    p.add_argument("--normalized", action="store_true", help="normalize the hs-spectral density")

    p = sub.add_parser("sample", parents=[common], help="sample symplectic spectra")
    p.add_argument("--modes", type=_positive_int, required=True)
    p.add_argument("--count", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--workers", type=_positive_int, default=1)

    p = sub.add_parser("stats", parents=[common], help="ensemble mean of an observable")
    p.add_argument("--observable", choices=ensemble_stats.OBSERVABLES, required=True)
    p.add_argument("--modes", type=_positive_int, required=True)
    p.add_argument("--method", choices=("mc", "quad"), default="quad")
    p.add_argument("--count", type=_positive_int, default=100000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=_positive_int, default=1)

    p = sub.add_parser("purity-dist", parents=[common], help="purity density on a grid")
    p.add_argument("--modes", type=_positive_int, required=True)
    p.add_argument("--grid", type=_positive_int, default=101)

    p = sub.add_parser("figure", parents=[common], help="figure data as CSV/JSON")
    p.add_argument("--which", choices=ensemble_stats.FIGURES, required=True)
    p.add_argument("--modes", type=_positive_int, action="append",
                   help="mode count(s); meaning depends on the figure")
    p.add_argument("--points", type=_positive_int, default=101)
    p.add_argument("--count", type=_positive_int, default=20000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=_positive_int, default=1)
    return parser


def _load(path) -> np.ndarray:
    return read_covariance(path)


def _cmd_validate(args, cfg):
    report = validate_covariance(_load(args.file))
    code = EXIT_OK if report.physical else EXIT_UNPHYSICAL
    return ["physical", "min_nu"], [(report.physical, report.min_nu)], code


def _cmd_spectrum(args, cfg):
    nu = symplectic_spectrum(as_covariance(_load(args.file)))
    return ["mode", "nu"], [(i + 1, float(v)) for i, v in enumerate(nu)], EXIT_OK


def _cmd_distance(args, cfg):
    a, b = as_covariance(_load(args.file_a)), as_covariance(_load(args.file_b))
    if a.shape != b.shape:
        raise UsageError(f"mode counts differ: {mode_count(a)} vs {mode_count(b)}")
    for path, m in ((args.file_a, a), (args.file_b, b)):
        if not validate_covariance(m).physical:
            raise UsageError(f"{path} is not a physical covariance matrix")
    if args.metric == "bures":
        if mode_count(a) != 1:
            raise UsageError("the Bures distance is only available for one-mode states (N = 1)")
        value = metrics.bures_distance_one_mode(a, b)
    else:
        value = metrics.hs_distance(a, b)
    return ["metric", "distance"], [(args.metric, value)], EXIT_OK


def _cmd_density(args, cfg):
    rows = []
    if args.family == "hs-spectral":
        for point in args.at:
            if len(point) != args.modes:
                raise UsageError(f"--at needs {args.modes} values per point for hs-spectral")
            ev = measures.hs_spectral_density(point, normalized=args.normalized, config=cfg)
            rows.append((*point, ev.value))
        header = [f"nu{i + 1}" for i in range(args.modes)] + ["density"]
        return header, rows, EXIT_OK
    values = [v for point in args.at for v in point]
    if args.family == "bures-spectral":
        rows = [(v, measures.bures_spectral_density_one_mode(v)) for v in values]
        return ["nu", "density"], rows, EXIT_OK
    rows = [(v, measures.purity_density(args.modes, v, cfg)) for v in values]
    return ["mu", "density"], rows, EXIT_OK


def _cmd_sample(args, cfg):
    config = SamplerConfig(args.modes, seed=args.seed, method=args.method)
    batch = sample_batch(config, args.count, args.workers)
    logging.getLogger(__name__).info("acceptance rate %.4g over %d proposals", batch.acceptance_rate, batch.attempts)
    header = [f"nu{i + 1}" for i in range(args.modes)]
    return header, [tuple(row) for row in batch.spectra], EXIT_OK


def _cmd_stats(args, cfg):
    if args.method == "mc":
        s = ensemble_stats.mc_mean(args.observable, args.modes, args.count, args.seed, args.workers)
    else:
        s = ensemble_stats.quad_mean(args.observable, args.modes, cfg)
    header = ["observable", "modes", "method", "estimate", "standard_error", "count", "seed"]
    row = (s.observable, s.modes, s.method, s.estimate, s.standard_error,
           "" if s.sample_count is None else s.sample_count, "" if s.seed is None else s.seed)
    return header, [row], EXIT_OK


def _cmd_purity_dist(args, cfg):
    if args.modes > 4:
        raise UsageError("purity-dist supports N <= 4")
    grid = np.linspace(0.0, 1.0, args.grid)
    rows = [(float(m), 0.0 if m == 0.0 else measures.purity_density(args.modes, float(m), cfg)) for m in grid]
    return ["mu", "density"], rows, EXIT_OK


def _cmd_figure(args, cfg):
    modes = args.modes
    if args.which in ("spectral_density", "means") and modes is not None:
        if len(modes) != 1:
            raise UsageError(f"--modes takes a single value for {args.which}")
        modes = modes[0]
    header, rows = ensemble_stats.figure_data(args.which, modes=modes, points=args.points,
                                        count=args.count, seed=args.seed, workers=args.workers)
    return header, rows, EXIT_OK


COMMANDS = {
    "validate": _cmd_validate,
    "spectrum": _cmd_spectrum,
    "distance": _cmd_distance,
    "density": _cmd_density,
    "sample": _cmd_sample,
    "stats": _cmd_stats,
    "purity-dist": _cmd_purity_dist,
    "figure": _cmd_figure,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = QuadratureConfig(rtol=args.rtol, atol=args.atol)
        header, rows, code = COMMANDS[args.command](args, cfg)
    except CovarianceFormatError as exc:
        print(f"gaussgeom: file format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except NumericalError as exc:
        print(f"gaussgeom: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, ValueError) as exc:
        print(f"gaussgeom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render_table(header, rows, args.format, args.precision)
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
