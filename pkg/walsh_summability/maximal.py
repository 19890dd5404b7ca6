"""Implements maximal operators, weak quasi-norms and weak type experiments."""

import concurrent.futures
import dataclasses
import logging
import operator
import re

import numpy as np

from walsh_summability.matrix import IdentityMatrix
from walsh_summability.summability import coefficient_weights
from walsh_summability.walsh import (
    GridFunction1D,
    inverse_paley_transform,
    paley_transform,
)

logger = logging.getLogger(__name__)

# Number of means evaluated together in one batched transform.
BATCH_SIZE = 64

# Depth of the smooth block part of random test functions.
ENSEMBLE_BLOCK_DEPTH = 3

QUANTILES = (0.5, 0.9, 0.99)

_SUBSEQUENCE = re.compile(
    r"^(powers|alternating|all):(\d+)\.\.(\d+)$|^list:([\d,\s]+)$"
)


class IndexSubsequence:
    """Finite strictly increasing list of indices n_a.

    Args:
        indices (Iterable[int]): Nonnegative indices in increasing order.

    Raises:
        ValueError: Empty, negative or not strictly increasing.
    """

    def __init__(self, indices):
        indices = tuple(operator.index(n) for n in indices)
        if not indices:
            raise ValueError("Empty subsequence")
        if indices[0] < 0:
            raise ValueError("Negative index in subsequence: %d" % indices[0])
        for i in range(len(indices) - 1):
            if indices[i] >= indices[i + 1]:
                raise ValueError(
                    "Subsequence not strictly increasing at position %d: %r"
                    % (i, indices[i : i + 2])
                )
        self._indices = indices
        self._label = None

    @classmethod
    def parse(cls, text):
        """Parse `powers:a..b`, `alternating:a..b`, `list:1,3,7` or `all:a..b`.

        `powers` yields 2^a..2^b. `alternating` yields 1 + 4 + ... + 4^j
        for j = a..b, the numbers with alternating binary digits 10101...

        Raises:
            ValueError: Unable to parse `text`.
        """
        m = _SUBSEQUENCE.match(text.strip())
        if not m:
            raise ValueError("Unable to parse subsequence: %s" % text)
        kind = m.group(1)
        if kind is None:
            fields = [field for field in m.group(4).split(",") if field.strip()]
            result = cls(int(field) for field in fields)
        else:
            lo, hi = int(m.group(2)), int(m.group(3))
            if lo > hi:
                raise ValueError("Invalid range (lo > hi): %s" % text)
            if kind == "powers":
                result = cls(1 << a for a in range(lo, hi + 1))
            elif kind == "alternating":
                result = cls(alternating_index(a) for a in range(lo, hi + 1))
            else:
                result = cls(range(lo, hi + 1))
        result._label = text.strip()
        return result

    @property
    def indices(self):
        """Tuple of indices."""
        return self._indices

    @property
    def label(self):
        """Text this subsequence was parsed from, or a list rendering."""
        if self._label:
            return self._label
        return "list:" + ",".join(str(n) for n in self._indices)

    def check_resolution(self, spec):
        """Return self if every index is at most 2^K.

        Raises:
            ValueError: Largest index exceeds 2^K.
        """
        if self._indices[-1] > spec.size:
            raise ValueError(
                "Subsequence index %d exceeds 2^K = %d"
                % (self._indices[-1], spec.size)
            )
        return self

    def __iter__(self):
        return iter(self._indices)

    def __len__(self):
        return len(self._indices)

    def __eq__(self, rhs):
        if not isinstance(rhs, IndexSubsequence):
            return NotImplemented
        return self._indices == rhs._indices

    def __hash__(self):
        return hash(self._indices)

    def __repr__(self):
        return "IndexSubsequence(%r)" % (self._indices,)


def alternating_index(a):
    """Return 1 + 4 + ... + 4^a."""
    return ((4 ** (a + 1)) - 1) // 3


def maximal_mean(matrix, subseq, f):
    """Return sup over the subsequence of |T_n f|, pointwise.

    Args:
        matrix (TransformationMatrix): Matrix of transformation.
        subseq (IndexSubsequence): Indices n_a <= 2^K.
        f (GridFunction1D): Input function.

    Returns:
        GridFunction1D: Pointwise maximum.
    """
    subseq = as_subsequence(subseq).check_resolution(f.spec)
    spectrum = paley_transform(f.samples)
    result = np.zeros(f.spec.size)
    for weights in _weight_batches(matrix, subseq, f.spec.size):
        means = inverse_paley_transform(weights * spectrum)
        np.maximum(result, np.max(np.abs(means), axis=0), out=result)
    return GridFunction1D(f.spec, result)


def maximal_abs_mean(matrix, subseq, f):
    """Return sup over the subsequence of |f * |V_n||, pointwise.

    The absolute value of each kernel is taken before convolving.
    """
    subseq = as_subsequence(subseq).check_resolution(f.spec)
    spectrum = paley_transform(f.samples)
    result = np.zeros(f.spec.size)
    for weights in _weight_batches(matrix, subseq, f.spec.size):
        magnitudes = np.abs(inverse_paley_transform(weights))
        means = inverse_paley_transform(paley_transform(magnitudes) * spectrum)
        np.maximum(result, np.max(np.abs(means), axis=0), out=result)
    return GridFunction1D(f.spec, result)


def carleson_maximal(f):
    """Return sup over 1 <= n <= 2^K of |S_n f|, pointwise."""
    subseq = IndexSubsequence(range(1, f.spec.size + 1))
    return maximal_mean(IdentityMatrix(), subseq, f)


def dyadic_maximal(f):
    """Return E*(f) = sup over 0 <= n <= K of |S_{2^n} f|, pointwise.

    S_{2^n} f averages f over the dyadic intervals of depth n.
    """
    samples = f.samples
    result = np.abs(samples).copy()
    for depth in range(f.spec.resolution):
        means = samples.reshape(1 << depth, -1).mean(axis=1)
        block = np.repeat(np.abs(means), f.spec.size >> depth)
        np.maximum(result, block, out=result)
    return GridFunction1D(f.spec, result)


def distribution_quasinorm(values):
    """Return sup_t t mu(|g| > t) for equally weighted cell values.

    For a step function the supremum is max over values v of v mu(|g| >= v).
    """
    magnitudes = np.sort(np.abs(np.ravel(values)))[::-1]
    if not magnitudes.size:
        return 0.0
    counts = np.arange(1, magnitudes.size + 1)
    return float(np.max(magnitudes * counts) / magnitudes.size)


def weak_quasinorm(g):
    """Return the weak L1 quasi-norm of the grid function `g`."""
    return distribution_quasinorm(g.samples)


def entropy_integral(values):
    """Return the mean of |v| ln+ |v| over equally weighted cells."""
    magnitudes = np.abs(np.ravel(values))
    return float(np.mean(magnitudes * np.log(np.maximum(magnitudes, 1.0))))


def llogl_norm(f):
    """Return the integral of |f| ln+ |f|."""
    return entropy_integral(f.samples)


def h1_norm(f):
    """Return ||E*(f)||_1, the dyadic Hardy space norm."""
    return dyadic_maximal(f).l1_norm()


def random_ensemble_function(spec, rng):
    """Return a nonnegative test function of spikes over dyadic blocks.

    Every draw is independent of the resolution, so the same generator
    state gives nested functions on nested grids: one to four spikes of mass
    in [0.25, 1) at uniform positions, over blocks of depth 3 with heights
    in [0, 1).
    """
    count = int(rng.integers(1, 5))
    positions = rng.random(count)
    masses = rng.uniform(0.25, 1.0, count)
    heights = rng.random(1 << ENSEMBLE_BLOCK_DEPTH)
    depth = min(ENSEMBLE_BLOCK_DEPTH, spec.resolution)
    heights = heights.reshape(1 << depth, -1).mean(axis=1)
    samples = np.repeat(heights, spec.size >> depth)
    cells = np.floor(positions * spec.size).astype(np.int64)
    np.add.at(samples, cells, masses * spec.size)
    return GridFunction1D(spec, samples)


@dataclasses.dataclass(frozen=True)
class WeakTypeReport:
    """Distribution of ||M f||_{1,inf} / ||f||_1 over random trials."""

    family: str
    operator: str
    subsequence: str
    K: int
    trials: int
    seed: int
    max_ratio: float
    mean_ratio: float
    quantiles: dict

    def as_dict(self):
        return dataclasses.asdict(self)


_OPERATORS = {
    "tilde": maximal_abs_mean,
    "plain": maximal_mean,
}


def weak_type_experiment(
    matrix, subseq, trials, spec, seed=0, kind="tilde", workers=1
):
    """Run the weak (1,1) ratio experiment on seeded random functions.

    Trial i draws from numpy.random.default_rng([seed, i]), so reports are
    reproducible and ensembles match across resolutions.

    When `subseq` contains 1 and t_{0,1} = 1 (Fejer, identity), the first
    mean is the constant integral of f, so M f >= ||f||_1 on every cell of a
    nonnegative ensemble function and each ratio is at least 1. Growth of the
    maximum across resolutions, not its level, is the signal there.

    Args:
        matrix (Optional[TransformationMatrix]): Matrix; unused for 'dyadic'.
        subseq (Optional[IndexSubsequence]): Indices; unused for 'dyadic'.
        trials (int): Number of random functions, >= 1.
        spec (GridSpec): Grid.
        seed (int): Base seed.
        kind (str): 'tilde' (absolute kernels), 'plain' or 'dyadic' (E*).
        workers (int): Thread count.

    Returns:
        WeakTypeReport: Ratio statistics.

    Raises:
        ValueError: trials < 1 or unknown operator.
    """
    if trials < 1:
        raise ValueError("Need at least one trial: %d" % trials)
    if kind == "dyadic":
        family, label = "dyadic", "powers:0..%d" % spec.resolution

        def _maximal(f):
            return dyadic_maximal(f)

    elif kind in _OPERATORS:
        subseq = as_subsequence(subseq).check_resolution(spec)
        family, label = matrix.name, subseq.label
        apply = _OPERATORS[kind]

        def _maximal(f):
            return apply(matrix, subseq, f)

    else:
        raise ValueError("Unknown maximal operator: %s" % kind)

    def _trial(index):
        f = random_ensemble_function(spec, np.random.default_rng([seed, index]))
        ratio = weak_quasinorm(_maximal(f)) / f.l1_norm()
        logger.debug(
            "%s K=%d trial %d: ratio %.6g", family, spec.resolution, index, ratio
        )
        return ratio

    ratios = run_trials(_trial, trials, workers)
    report = WeakTypeReport(
        family=family,
        operator=kind,
        subsequence=label,
        K=spec.resolution,
        trials=trials,
        seed=seed,
        max_ratio=float(np.max(ratios)),
        mean_ratio=float(np.mean(ratios)),
        quantiles=quantile_table(ratios),
    )
    logger.info(
        "%s/%s K=%d: max ratio %.6g over %d trials",
        family,
        kind,
        spec.resolution,
        report.max_ratio,
        trials,
    )
    return report


def run_trials(trial, trials, workers=1):
    """Return [trial(0), ..., trial(trials-1)] computed on `workers` threads."""
    if workers <= 1:
        return np.array([trial(index) for index in range(trials)])
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return np.array(list(executor.map(trial, range(trials))))


def quantile_table(ratios):
    """Return {"q50": ..., "q90": ..., "q99": ...} for the ratio sample."""
    values = np.quantile(ratios, QUANTILES)
    return {"q%d" % round(100 * q): float(v) for q, v in zip(QUANTILES, values)}


def as_subsequence(subseq):
    """Return `subseq` as an IndexSubsequence, parsing strings."""
    if isinstance(subseq, IndexSubsequence):
        return subseq
    if isinstance(subseq, str):
        return IndexSubsequence.parse(subseq)
    return IndexSubsequence(subseq)


def _weight_batches(matrix, subseq, size):
    indices = subseq.indices
    for start in range(0, len(indices), BATCH_SIZE):
        chunk = indices[start : start + BATCH_SIZE]
        yield np.stack([coefficient_weights(matrix, n, size) for n in chunk])
