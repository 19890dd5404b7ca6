"""Implements the walsh-summability command line interface."""

import argparse
import dataclasses
import logging
import os
import sys
from fractions import Fraction
from typing import Optional

import numpy as np

from walsh_summability import __version__
from walsh_summability.dyadic import GridSpec
from walsh_summability.errors import GuardRailError, IdentityCheckError
from walsh_summability.example1 import DEFAULT_NSEQ, NSeq, divergence_report
from walsh_summability.factory import get_matrix
from walsh_summability.gridio import (
    load_grid,
    save_grid,
    write_csv_table,
    write_grid,
    write_json,
)
from walsh_summability.lebesgue import classify_wlp, mt2_convergence_experiment
from walsh_summability.maximal import IndexSubsequence, weak_type_experiment
from walsh_summability.summability import (
    apply_mean,
    c2_quantity,
    check_decomposition,
    kernel_V,
    mean_report,
)
from walsh_summability.tensor import (
    GridFunction2D,
    llogl_weak_type_experiment,
    square_indicator,
    tensor_mean,
)
from walsh_summability.walsh import GridFunction1D

logger = logging.getLogger(__name__)

THREADS_ENV = "WALSH_SUMMABILITY_THREADS"

MAX_RESOLUTION_1D = 14
MAX_RESOLUTION_2D = 8

# Tolerance for the checked identities run from the command line.
PATH_TOLERANCE = 1e-10

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_GUARD_RAIL = 2
EXIT_IDENTITY = 3

_TWO_DIMENSIONAL = frozenset(["tensor", "llogl-experiment", "wlp", "mt2-experiment"])

_EXAMPLES = {
    "square-half": Fraction(1, 2),
    "square-third": Fraction(1, 3),
}


class UsageError(ValueError):
    """Command line arguments are malformed."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """Validated settings for one command.

    `params` holds command specific values such as indices, points or the
    input path.
    """

    command: str
    matrices: tuple = ()
    subsequences: tuple = ()
    resolution: Optional[int] = None
    trials: int = 1
    seed: int = 0
    output: Optional[str] = None
    fmt: str = "json"
    workers: int = 1
    params: dict = dataclasses.field(default_factory=dict)

    @property
    def dims(self):
        """2 for the tensor product commands, else 1."""
        return 2 if self.command in _TWO_DIMENSIONAL else 1

    def validate(self):
        """Return self after checking limits.

        Raises:
            GuardRailError: Resolution above the cap for this dimension.
            ValueError: Other invalid settings.
        """
        if self.resolution is not None:
            check_resolution(self.resolution, self.dims)
        if self.trials < 1:
            raise ValueError("--trials must be >= 1: %d" % self.trials)
        if self.workers < 1:
            raise ValueError("--workers must be >= 1: %d" % self.workers)
        if self.fmt not in ("json", "csv"):
            raise ValueError("Unknown format: %s" % self.fmt)
        return self

    def grid(self):
        """Return the GridSpec for `resolution`."""
        if self.resolution is None:
            raise ValueError("%s needs --resolution" % self.command)
        return GridSpec(self.resolution)


def check_resolution(resolution, dims):
    """Raise GuardRailError when `resolution` is above the cap for `dims`."""
    limit = MAX_RESOLUTION_2D if dims == 2 else MAX_RESOLUTION_1D
    if resolution > limit:
        raise GuardRailError(
            "Resolution %d exceeds the %dD limit of %d" % (resolution, dims, limit)
        )
    return resolution


def default_workers(environ=None):
    """Return the thread count from the environment, else 1."""
    environ = os.environ if environ is None else environ
    value = environ.get(THREADS_ENV)
    if not value:
        return 1
    try:
        return int(value)
    except ValueError:
        raise ValueError("Unable to parse %s=%r" % (THREADS_ENV, value)) from None


def build_parser():
    """Return the argument parser with one subcommand per operation."""
    parser = _ArgumentParser(
        prog="walsh-summability",
        description="Walsh-Paley summability means, kernels and maximal operators.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--json", dest="fmt", action="store_const", const="json")
    common.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    common.add_argument("--workers", type=int, help="thread count")
    common.set_defaults(fmt="json")
    commands = parser.add_subparsers(dest="command", required=True)

    def _command(name, help_text):
        return commands.add_parser(name, parents=[common], help=help_text)

    sub = _command("kernel", "write the kernel V_n of a matrix as a grid CSV")
    sub.add_argument("--matrix", default="fejer")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--resolution", type=int, required=True)
    sub.add_argument("--check-decomposition", action="store_true")

    sub = _command("mean", "apply the n-th mean to a grid function")
    sub.add_argument("--matrix", default="fejer")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--input", required=True)
    sub.add_argument("--path", choices=["coefficient", "kernel"], default="coefficient")
    sub.add_argument("--check-paths", action="store_true")

    sub = _command("upsilon", "tabulate upsilon(n, T) along a subsequence")
    sub.add_argument("--matrix", default="fejer")
    sub.add_argument("--seq", required=True)
    sub.add_argument("--resolution", type=int)

    sub = _command("maximal", "weak type experiment for a maximal operator")
    sub.add_argument("--matrix", default="fejer")
    sub.add_argument("--seq")
    sub.add_argument("--resolution", type=int, required=True)
    sub.add_argument("--trials", type=int, default=100)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument(
        "--operator", choices=["tilde", "plain", "dyadic"], default="tilde"
    )

    sub = _command("tensor", "apply a tensor product mean to a 2D grid function")
    _add_pair(sub)
    sub.add_argument("--n0", type=int, required=True)
    sub.add_argument("--n1", type=int, required=True)
    sub.add_argument("--input", required=True)
    sub.add_argument("--check-order", action="store_true")

    sub = _command("llogl-experiment", "L ln L weak type experiment in 2D")
    _add_pair(sub)
    sub.add_argument("--seq0", required=True)
    sub.add_argument("--seq1", required=True)
    sub.add_argument("--resolution", type=int, required=True)
    sub.add_argument("--trials", type=int, default=50)
    sub.add_argument("--seed", type=int, default=0)

    sub = _command("wlp", "classify points as Walsh-Lebesgue points")
    _add_function_2d(sub)
    sub.add_argument("--depths", default=None, help="range a..b (default 1..K)")

    sub = _command("mt2-experiment", "tensor mean errors at classified points")
    _add_pair(sub)
    _add_function_2d(sub)
    sub.add_argument("--seq0", required=True)
    sub.add_argument("--seq1", required=True)

    sub = _command("example1", "exact divergence table at a Lebesgue point")
    sub.add_argument("--nseq", default=",".join(map(str, DEFAULT_NSEQ)))

    sub = _command("c2-check", "tabulate the c2 quantity along a subsequence")
    sub.add_argument("--alpha", type=float, required=True)
    sub.add_argument("--seq", required=True)

    return parser


def _add_pair(sub):
    sub.add_argument("--matrix0", default="fejer")
    sub.add_argument("--matrix1", default="fejer")


def _add_function_2d(sub):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--input")
    group.add_argument("--example", choices=sorted(_EXAMPLES))
    sub.add_argument("--resolution", type=int)
    sub.add_argument("--point", action="append", required=True, help="x0,x1")


def config_from_args(args, environ=None):
    """Return a validated ExperimentConfig for parsed arguments."""
    known = {
        "command",
        "verbose",
        "out",
        "fmt",
        "workers",
        "resolution",
        "trials",
        "seed",
        "matrix",
        "matrix0",
        "matrix1",
        "seq",
        "seq0",
        "seq1",
    }
    values = vars(args)
    matrices = tuple(
        values[key] for key in ("matrix", "matrix0", "matrix1") if values.get(key)
    )
    subsequences = tuple(
        values[key] for key in ("seq", "seq0", "seq1") if values.get(key)
    )
    workers = values.get("workers")
    if workers is None:
        workers = default_workers(environ)
    config = ExperimentConfig(
        command=args.command,
        matrices=matrices,
        subsequences=subsequences,
        resolution=values.get("resolution"),
        trials=values.get("trials", 1),
        seed=values.get("seed", 0),
        output=values.get("out"),
        fmt=values.get("fmt") or "json",
        workers=workers,
        params={key: value for key, value in values.items() if key not in known},
    )
    return config.validate()


def run(config, stdout=None):
    """Execute `config` and write its output.

    Returns:
        int: Exit status, 0 on success.
    """
    stdout = sys.stdout if stdout is None else stdout
    result = _COMMANDS[config.command](config)
    if isinstance(result, (GridFunction1D, GridFunction2D)):
        _emit_grid(result, config, stdout)
    else:
        _emit_report(result, config, stdout)
    return EXIT_OK


def main(argv=None, stdout=None):
    """Entry point for the console script.

    Returns:
        int: Exit status (0 ok, 1 configuration error, 2 guard rail,
        3 failed identity check).
    """
    try:
        args = build_parser().parse_args(argv)
        _configure_logging(args.verbose)
        config = config_from_args(args)
        logger.debug("Running %r", config)
        return run(config, stdout)
    except GuardRailError as ex:
        sys.stderr.write("walsh-summability: guard rail: %s\n" % ex)
        return EXIT_GUARD_RAIL
    except IdentityCheckError as ex:
        sys.stderr.write("walsh-summability: check failed: %s\n" % ex)
        return EXIT_IDENTITY
    except (ValueError, KeyError, OSError) as ex:
        sys.stderr.write("walsh-summability: error: %s\n" % _message(ex))
        return EXIT_CONFIG


def _configure_logging(verbose):
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose and verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def _message(ex):
    if isinstance(ex, KeyError):
        return "unknown name %s" % ex
    return str(ex)


def _run_kernel(config):
    matrix = get_matrix(config.matrices[0])
    spec = config.grid()
    n = config.params["n"]
    if config.params.get("check_decomposition"):
        error = check_decomposition(matrix, n, spec)
        logger.info("V1 + V2 = V at n=%d within %.3g", n, error)
    return kernel_V(matrix, n, spec)


def _run_mean(config):
    matrix = get_matrix(config.matrices[0])
    f = _load_grid(config, 1)
    n = config.params["n"]
    result = apply_mean(matrix, n, f, path=config.params["path"])
    if config.params.get("check_paths"):
        other = "kernel" if config.params["path"] == "coefficient" else "coefficient"
        other_result = apply_mean(matrix, n, f, path=other)
        error = float(np.max(np.abs(result.samples - other_result.samples)))
        if error > PATH_TOLERANCE:
            raise IdentityCheckError(
                "Coefficient and kernel paths differ by %.3g at n=%d" % (error, n)
            )
        logger.info("Mean paths agree within %.3g", error)
    return result


def _run_upsilon(config):
    matrix = get_matrix(config.matrices[0])
    subseq = IndexSubsequence.parse(config.subsequences[0])
    spec = config.grid() if config.resolution is not None else None
    rows = [mean_report(matrix, n, spec).as_dict() for n in subseq]
    return _Table(
        {"family": matrix.name, "subsequence": subseq.label, "rows": rows},
        rows,
        ["n", "upsilon", "l1_kernel_norm", "t0"],
    )


def _run_maximal(config):
    spec = config.grid()
    kind = config.params["operator"]
    matrix = subseq = None
    if kind != "dyadic":
        matrix = get_matrix(config.matrices[0])
        text = "powers:0..%d" % spec.resolution
        if config.subsequences:
            text = config.subsequences[0]
        subseq = IndexSubsequence.parse(text)
    report = weak_type_experiment(
        matrix,
        subseq,
        config.trials,
        spec,
        seed=config.seed,
        kind=kind,
        workers=config.workers,
    )
    return report.as_dict()


def _run_tensor(config):
    matrix0 = get_matrix(config.matrices[0])
    matrix1 = get_matrix(config.matrices[1])
    F = _load_grid(config, 2)
    n0, n1 = config.params["n0"], config.params["n1"]
    result = tensor_mean(matrix0, n0, matrix1, n1, F)
    if config.params.get("check_order"):
        other = tensor_mean(matrix0, n0, matrix1, n1, F, first_axis=1)
        error = float(np.max(np.abs(result.samples - other.samples)))
        if error > PATH_TOLERANCE:
            raise IdentityCheckError(
                "Tensor mean depends on axis order: %.3g at (%d, %d)" % (error, n0, n1)
            )
        logger.info("Axis orders agree within %.3g", error)
    return result


def _run_llogl(config):
    matrix0 = get_matrix(config.matrices[0])
    matrix1 = get_matrix(config.matrices[1])
    report = llogl_weak_type_experiment(
        matrix0,
        IndexSubsequence.parse(config.subsequences[0]),
        matrix1,
        IndexSubsequence.parse(config.subsequences[1]),
        config.trials,
        config.grid(),
        seed=config.seed,
        workers=config.workers,
    )
    return report.as_dict()


def _run_wlp(config):
    F = _function_2d(config)
    depths = _parse_depths(config.params.get("depths"), F.spec)
    return [
        classify_wlp(F, point, depths).as_dict() for point in _parse_points(config)
    ]


def _run_mt2(config):
    F = _function_2d(config)
    report = mt2_convergence_experiment(
        get_matrix(config.matrices[0]),
        get_matrix(config.matrices[1]),
        IndexSubsequence.parse(config.subsequences[0]),
        IndexSubsequence.parse(config.subsequences[1]),
        F,
        _parse_points(config),
    )
    return report.as_dict()


def _run_example1(config):
    report = divergence_report(NSeq.parse(config.params["nseq"])).as_dict()
    rows = [
        {
            "k": row["k"],
            "n_k": row["n_k"],
            "sigma_exact": "%d/2^%d"
            % (row["sigma_exact"]["numerator"], row["sigma_exact"]["scale"]),
            "sigma_decimal": row["sigma_exact"]["decimal"],
            "nominal_bound": row["nominal_bound"]["decimal"],
            "proven_bound": row["proven_bound"]["decimal"],
            "ratio": row["ratio"],
        }
        for row in report["rows"]
    ]
    return _Table(
        report,
        rows,
        [
            "k",
            "n_k",
            "sigma_exact",
            "sigma_decimal",
            "nominal_bound",
            "proven_bound",
            "ratio",
        ],
    )


def _run_c2(config):
    alpha = config.params["alpha"]
    subseq = IndexSubsequence.parse(config.subsequences[0])
    rows = [{"n": n, "c2": c2_quantity(alpha, n)} for n in subseq]
    return _Table(
        {"alpha": alpha, "subsequence": subseq.label, "rows": rows}, rows, ["n", "c2"]
    )


_COMMANDS = {
    "kernel": _run_kernel,
    "mean": _run_mean,
    "upsilon": _run_upsilon,
    "maximal": _run_maximal,
    "tensor": _run_tensor,
    "llogl-experiment": _run_llogl,
    "wlp": _run_wlp,
    "mt2-experiment": _run_mt2,
    "example1": _run_example1,
    "c2-check": _run_c2,
}


@dataclasses.dataclass(frozen=True)
class _Table:
    """Report with a flat row view for CSV output."""

    report: dict
    rows: list
    header: list


def _emit_report(result, config, stdout):
    if config.fmt == "json":
        report = result.report if isinstance(result, _Table) else result
        write_json(report, path=config.output, stream=stdout)
        return
    if not isinstance(result, _Table):
        raise ValueError("CSV output is not available for %s" % config.command)
    if config.output:
        with open(config.output, "w", encoding="ascii", newline="") as output:
            write_csv_table(result.rows, result.header, output)
        logger.info("Wrote %s table to %s", config.command, config.output)
    else:
        write_csv_table(result.rows, result.header, stdout)


def _emit_grid(result, config, stdout):
    if config.output:
        save_grid(result, config.output)
    else:
        write_grid(result, stdout)


def _load_grid(config, dims):
    f = load_grid(config.params["input"])
    is_2d = isinstance(f, GridFunction2D)
    if is_2d != (dims == 2):
        raise ValueError(
            "%s expects a %dD grid: %s" % (config.command, dims, config.params["input"])
        )
    check_resolution(f.spec.resolution, dims)
    return f


def _function_2d(config):
    example = config.params.get("example")
    if example is None:
        return _load_grid(config, 2)
    return square_indicator(config.grid(), _EXAMPLES[example])


def _parse_points(config):
    points = []
    for text in config.params["point"]:
        try:
            x0, x1 = (int(field) for field in text.split(","))
        except ValueError:
            raise ValueError("Unable to parse point: %s" % text) from None
        points.append((x0, x1))
    return points


def _parse_depths(text, spec):
    if not text:
        return list(range(1, spec.resolution + 1))
    try:
        lo, hi = (int(field) for field in text.split(".."))
    except ValueError:
        raise ValueError("Unable to parse depths: %s" % text) from None
    return list(range(lo, hi + 1))
