"""Implements two-dimensional grid functions and tensor product means."""

import dataclasses
import logging
import math
from fractions import Fraction

import numpy as np

from walsh_summability.maximal import (
    as_subsequence,
    distribution_quasinorm,
    entropy_integral,
    quantile_table,
    run_trials,
)
from walsh_summability.summability import coefficient_weights
from walsh_summability.walsh import inverse_paley_transform, paley_transform

logger = logging.getLogger(__name__)

# Depth of the block part of random two-dimensional test functions.
ENSEMBLE_BLOCK_DEPTH = 2


class GridFunction2D:
    """Function constant on each cell of a 2^K x 2^K dyadic grid.

    Entry (i, j) is the value at (i/2^K, j/2^K); axis 0 is the first
    variable. Samples are copied and frozen.

    Args:
        spec (GridSpec): Grid shared by both axes.
        samples (array_like): 2^K x 2^K finite real values.

    Raises:
        ValueError: Not square at this resolution, or non-finite values.
    """

    def __init__(self, spec, samples):
        samples = np.array(samples, dtype=np.float64)
        if samples.shape != (spec.size, spec.size):
            raise ValueError(
                "Expected %dx%d samples for resolution %d, got shape %r"
                % (spec.size, spec.size, spec.resolution, samples.shape)
            )
        if not np.all(np.isfinite(samples)):
            raise ValueError("Grid function has non-finite samples")
        samples.setflags(write=False)
        self._spec = spec
        self._samples = samples

    @classmethod
    def constant(cls, spec, value):
        """Return the constant function `value`."""
        return cls(spec, np.full((spec.size, spec.size), float(value)))

    @classmethod
    def separable(cls, f, g):
        """Return F(x, y) = f(x) g(y) for one-dimensional grid functions."""
        if f.spec != g.spec:
            raise ValueError("Mismatched resolutions: %r vs %r" % (f.spec, g.spec))
        return cls(f.spec, np.outer(f.samples, g.samples))

    @property
    def spec(self):
        """Grid specification."""
        return self._spec

    @property
    def samples(self):
        """Read-only 2D array of cell values."""
        return self._samples

    def integral(self):
        """Return the integral over the unit square."""
        return float(np.mean(self._samples))

    def l1_norm(self):
        """Return the L1 norm."""
        return float(np.mean(np.abs(self._samples)))

    def __getitem__(self, index):
        i, j = index
        spec = self._spec
        return float(self._samples[spec.check_index(i), spec.check_index(j)])

    def __abs__(self):
        return GridFunction2D(self._spec, np.abs(self._samples))

    def __eq__(self, rhs):
        if not isinstance(rhs, GridFunction2D):
            return NotImplemented
        return self._spec == rhs._spec and np.array_equal(self._samples, rhs._samples)

    __hash__ = None

    def __repr__(self):
        return "GridFunction2D(%r, shape=%r)" % (self._spec, self._samples.shape)


def apply_axis(matrix, n, F, axis):
    """Apply the n-th mean of `matrix` along one axis, the other held fixed.

    Args:
        matrix (TransformationMatrix): Matrix of transformation.
        n (int): Index, n <= 2^K.
        F (GridFunction2D): Input function.
        axis (int): 0 for the first variable, 1 for the second.

    Returns:
        GridFunction2D: Result.

    Raises:
        ValueError: n > 2^K or bad axis.
    """
    if axis not in (0, 1):
        raise ValueError("Axis must be 0 or 1: %r" % axis)
    weights = coefficient_weights(matrix, n, F.spec.size)
    moved = np.moveaxis(F.samples, axis, -1)
    result = inverse_paley_transform(paley_transform(moved) * weights)
    return GridFunction2D(F.spec, np.moveaxis(result, -1, axis))


def tensor_mean(matrix0, n0, matrix1, n1, F, first_axis=0):
    """Return the tensor product mean, one axis at a time.

    Args:
        matrix0 (TransformationMatrix): Matrix for the first variable.
        n0 (int): Index for the first variable.
        matrix1 (TransformationMatrix): Matrix for the second variable.
        n1 (int): Index for the second variable.
        F (GridFunction2D): Input function.
        first_axis (int): Axis processed first; the result does not depend on it.

    Returns:
        GridFunction2D: Result.
    """
    if first_axis == 0:
        return apply_axis(matrix1, n1, apply_axis(matrix0, n0, F, 0), 1)
    return apply_axis(matrix0, n0, apply_axis(matrix1, n1, F, 1), 0)


def tensor_maximal(matrix0, subseq0, matrix1, subseq1, F):
    """Return the sup over all index pairs of |tensor_mean|, pointwise."""
    subseq0 = as_subsequence(subseq0).check_resolution(F.spec)
    subseq1 = as_subsequence(subseq1).check_resolution(F.spec)
    size = F.spec.size
    spectrum = _paley_2d(F.samples)
    weights1 = np.stack([coefficient_weights(matrix1, n, size) for n in subseq1])
    result = np.zeros((size, size))
    for n0 in subseq0:
        weights0 = coefficient_weights(matrix0, n0, size)
        spectra = (spectrum * weights0[:, np.newaxis]) * weights1[:, np.newaxis, :]
        means = _inverse_paley_2d(spectra)
        np.maximum(result, np.max(np.abs(means), axis=0), out=result)
    return GridFunction2D(F.spec, result)


def iterated_majorant(matrix0, subseq0, matrix1, subseq1, F):
    """Return sup_a (G * |V_{n_a}|) along the first variable.

    G = sup_b |T_{n_b} F| along the second variable. The result dominates
    tensor_maximal pointwise.
    """
    subseq0 = as_subsequence(subseq0).check_resolution(F.spec)
    subseq1 = as_subsequence(subseq1).check_resolution(F.spec)
    size = F.spec.size
    inner = np.zeros((size, size))
    for n1 in subseq1:
        mean = apply_axis(matrix1, n1, F, 1).samples
        np.maximum(inner, np.abs(mean), out=inner)
    columns = paley_transform(inner.T)
    result = np.zeros((size, size))
    for n0 in subseq0:
        weights = coefficient_weights(matrix0, n0, size)
        kernel = np.abs(inverse_paley_transform(weights))
        smoothed = inverse_paley_transform(columns * paley_transform(kernel)).T
        np.maximum(result, np.abs(smoothed), out=result)
    return GridFunction2D(F.spec, result)


def hybrid_maximal(F):
    """Return the sup over depths n <= K of first-variable dyadic averages.

    The second variable is held fixed.
    """
    size = F.spec.size
    samples = F.samples
    result = np.abs(samples).copy()
    for depth in range(F.spec.resolution):
        means = samples.reshape(1 << depth, size >> depth, size).mean(axis=1)
        block = np.repeat(np.abs(means), size >> depth, axis=0)
        np.maximum(result, block, out=result)
    return GridFunction2D(F.spec, result)


def square_indicator(spec, side):
    """Return the indicator of [0, side) x [0, side) on the grid.

    Cell i is inside when its left endpoint i/2^K is below `side`.

    Args:
        spec (GridSpec): Grid.
        side (Fraction): Side length in (0, 1].
    """
    side = Fraction(side)
    if not 0 < side <= 1:
        raise ValueError("Side must be in (0, 1]: %s" % side)
    count = math.ceil(side * spec.size)
    samples = np.zeros((spec.size, spec.size))
    samples[:count, :count] = 1.0
    return GridFunction2D(spec, samples)


def weak_quasinorm_2d(G):
    """Return sup_t t mu(|G| > t) with cell area 4^-K."""
    return distribution_quasinorm(G.samples)


def llogl_2d(F):
    """Return the integral of |F| ln+ |F| over the unit square."""
    return entropy_integral(F.samples)


def random_ensemble_function_2d(spec, rng):
    """Return a nonnegative test function of spikes over dyadic squares.

    One to four spikes of mass in [0.25, 1) at uniform positions sit over
    squares of depth 2 with heights in [0, 2). Draws do not depend on the
    resolution.
    """
    count = int(rng.integers(1, 5))
    positions = rng.random((count, 2))
    masses = rng.uniform(0.25, 1.0, count)
    blocks = 1 << ENSEMBLE_BLOCK_DEPTH
    heights = rng.uniform(0.0, 2.0, (blocks, blocks))
    depth = min(ENSEMBLE_BLOCK_DEPTH, spec.resolution)
    step = 1 << (ENSEMBLE_BLOCK_DEPTH - depth)
    heights = heights.reshape(1 << depth, step, 1 << depth, step).mean(axis=(1, 3))
    repeat = spec.size >> depth
    samples = np.repeat(np.repeat(heights, repeat, axis=0), repeat, axis=1)
    cells = np.floor(positions * spec.size).astype(np.int64)
    np.add.at(samples, (cells[:, 0], cells[:, 1]), masses * spec.size * spec.size)
    return GridFunction2D(spec, samples)


@dataclasses.dataclass(frozen=True)
class LloglReport:
    """Distribution of ||sup |T F| ||_{1,inf} / (1 + int |F| ln+ |F|)."""

    families: list
    subsequences: list
    K: int
    trials: int
    seed: int
    max_ratio: float
    mean_ratio: float
    quantiles: dict

    def as_dict(self):
        return dataclasses.asdict(self)


def llogl_weak_type_experiment(
    matrix0, subseq0, matrix1, subseq1, trials, spec, seed=0, workers=1
):
    """Run the L ln L weak type experiment for the tensor maximal operator.

    Trial i draws from numpy.random.default_rng([seed, i]).

    Raises:
        ValueError: trials < 1.
    """
    if trials < 1:
        raise ValueError("Need at least one trial: %d" % trials)
    subseq0 = as_subsequence(subseq0).check_resolution(spec)
    subseq1 = as_subsequence(subseq1).check_resolution(spec)

    def _trial(index):
        F = random_ensemble_function_2d(spec, np.random.default_rng([seed, index]))
        maximal = tensor_maximal(matrix0, subseq0, matrix1, subseq1, F)
        ratio = weak_quasinorm_2d(maximal) / (1.0 + llogl_2d(F))
        logger.debug("K=%d trial %d: ratio %.6g", spec.resolution, index, ratio)
        return ratio

    ratios = run_trials(_trial, trials, workers)
    report = LloglReport(
        families=[matrix0.name, matrix1.name],
        subsequences=[subseq0.label, subseq1.label],
        K=spec.resolution,
        trials=trials,
        seed=seed,
        max_ratio=float(np.max(ratios)),
        mean_ratio=float(np.mean(ratios)),
        quantiles=quantile_table(ratios),
    )
    logger.info(
        "%s x %s K=%d: max ratio %.6g over %d trials",
        matrix0.name,
        matrix1.name,
        spec.resolution,
        report.max_ratio,
        trials,
    )
    return report


def _paley_2d(samples):
    rows = paley_transform(samples)
    return np.swapaxes(paley_transform(np.swapaxes(rows, -1, -2)), -1, -2)


def _inverse_paley_2d(spectra):
    rows = inverse_paley_transform(spectra)
    return np.swapaxes(inverse_paley_transform(np.swapaxes(rows, -1, -2)), -1, -2)
