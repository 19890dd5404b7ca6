"""Implements Walsh-Paley functions, the fast Walsh-Hadamard transform and kernels.

Grid index l stands for x = l/2^K. The Paley function w_n is row bitrev(n)
of the natural-order Hadamard matrix, so the Paley spectrum is the natural
transform permuted by K-bit reversal.
"""

import functools
import operator
from fractions import Fraction

import numpy as np

from walsh_summability.dyadic import DyadicInterval, bit_reverse


class GridFunction1D:
    """Function constant on each cell [l/2^K, (l+1)/2^K).

    Samples are copied and frozen; instances are safe to share.

    Args:
        spec (GridSpec): Grid.
        samples (array_like): 2^K finite real values.

    Raises:
        ValueError: Wrong length or non-finite values.
    """

    def __init__(self, spec, samples):
        samples = np.array(samples, dtype=np.float64)
        if samples.shape != (spec.size,):
            raise ValueError(
                "Expected %d samples for resolution %d, got shape %r"
                % (spec.size, spec.resolution, samples.shape)
            )
        if not np.all(np.isfinite(samples)):
            raise ValueError("Grid function has non-finite samples")
        samples.setflags(write=False)
        self._spec = spec
        self._samples = samples

    @classmethod
    def constant(cls, spec, value):
        """Return the constant function `value`."""
        return cls(spec, np.full(spec.size, float(value)))

    @classmethod
    def indicator(cls, spec, interval):
        """Return the indicator of a DyadicInterval no finer than the grid."""
        samples = np.zeros(spec.size)
        cells = interval.cells(spec)
        samples[cells.start : cells.stop] = 1.0
        return cls(spec, samples)

    @property
    def spec(self):
        """Grid specification."""
        return self._spec

    @property
    def samples(self):
        """Read-only array of cell values."""
        return self._samples

    def integral(self):
        """Return the integral over [0, 1)."""
        return float(np.mean(self._samples))

    def l1_norm(self):
        """Return the L1 norm."""
        return float(np.mean(np.abs(self._samples)))

    def translate(self, y):
        """Return x -> f(x + y), dyadic addition with grid index `y`."""
        y = self._spec.check_index(y)
        return GridFunction1D(self._spec, self._samples[_grid_indices(self._spec) ^ y])

    def __len__(self):
        return self._spec.size

    def __getitem__(self, index):
        return float(self._samples[self._spec.check_index(index)])

    def __abs__(self):
        return GridFunction1D(self._spec, np.abs(self._samples))

    def __neg__(self):
        return GridFunction1D(self._spec, -self._samples)

    def __add__(self, rhs):
        return GridFunction1D(self._spec, self._samples + self._operand(rhs))

    def __sub__(self, rhs):
        return GridFunction1D(self._spec, self._samples - self._operand(rhs))

    def __mul__(self, rhs):
        return GridFunction1D(self._spec, self._samples * self._operand(rhs))

    __radd__ = __add__
    __rmul__ = __mul__

    def _operand(self, rhs):
        if isinstance(rhs, GridFunction1D):
            _check_same_spec(self._spec, rhs.spec)
            return rhs.samples
        return float(rhs)

    def __eq__(self, rhs):
        if not isinstance(rhs, GridFunction1D):
            return NotImplemented
        return self._spec == rhs._spec and np.array_equal(self._samples, rhs._samples)

    __hash__ = None

    def __repr__(self):
        return "GridFunction1D(%r, %s)" % (self._spec, np.array2string(self._samples))


class WalshSpectrum:
    """Walsh-Paley coefficients f^(i), i = 0..2^K-1.

    Args:
        spec (GridSpec): Grid.
        coefficients (array_like): 2^K real values in Paley order.
    """

    def __init__(self, spec, coefficients):
        coefficients = np.array(coefficients, dtype=np.float64)
        if coefficients.shape != (spec.size,):
            raise ValueError(
                "Expected %d coefficients for resolution %d, got shape %r"
                % (spec.size, spec.resolution, coefficients.shape)
            )
        coefficients.setflags(write=False)
        self._spec = spec
        self._coefficients = coefficients

    @property
    def spec(self):
        """Grid specification."""
        return self._spec

    @property
    def coefficients(self):
        """Read-only coefficient array."""
        return self._coefficients

    def __getitem__(self, index):
        return float(self._coefficients[self._spec.check_index(index)])

    def __repr__(self):
        return "WalshSpectrum(%r, %s)" % (
            self._spec,
            np.array2string(self._coefficients),
        )


def paley_transform(array):
    """Return Paley-ordered Walsh coefficients along the last axis.

    The last axis must have length 2^K. Coefficients are normalized by
    2^-K so that entry i equals the integral of f times w_i.
    """
    array = np.asarray(array, dtype=np.float64)
    size = array.shape[-1]
    permutation = _paley_permutation(_resolution_of(size))
    return _hadamard(array)[..., permutation] / size


def inverse_paley_transform(array):
    """Return sample values from Paley-ordered coefficients along the last axis."""
    array = np.asarray(array, dtype=np.float64)
    permutation = _paley_permutation(_resolution_of(array.shape[-1]))
    return _hadamard(array[..., permutation])


def fwht(f):
    """Return the Walsh-Paley spectrum of `f`.

    Args:
        f (GridFunction1D): Input function.

    Returns:
        WalshSpectrum: f^(i) = 2^-K sum_l f(l) w_i(l).
    """
    return WalshSpectrum(f.spec, paley_transform(f.samples))


def inverse_fwht(spectrum):
    """Return the function sum_i f^(i) w_i.

    Args:
        spectrum (WalshSpectrum): Coefficients.

    Returns:
        GridFunction1D: Reconstructed samples.
    """
    return GridFunction1D(spectrum.spec, inverse_paley_transform(spectrum.coefficients))


def walsh_sample(n, spec):
    """Return w_n on the grid.

    Args:
        n (int|BinaryIndex): Index with n < 2^K.
        spec (GridSpec): Grid.

    Returns:
        GridFunction1D: Values in {-1, +1}.

    Raises:
        ValueError: n is not representable at this resolution.
    """
    n = operator.index(n)
    if not 0 <= n < spec.size:
        raise ValueError(
            "Walsh index %d not representable at resolution %d" % (n, spec.resolution)
        )
    masked = _grid_indices(spec) & bit_reverse(n, spec.resolution)
    parity = np.zeros(spec.size, dtype=np.int64)
    for k in range(spec.resolution):
        parity ^= (masked >> k) & 1
    return GridFunction1D(spec, 1 - 2 * parity)


def partial_sum(f, m):
    """Return S_m f = sum_{i<m} f^(i) w_i.

    Raises:
        ValueError: m > 2^K.
    """
    m = _check_count(m, f.spec)
    coefficients = paley_transform(f.samples)
    coefficients[m:] = 0.0
    return GridFunction1D(f.spec, inverse_paley_transform(coefficients))


def dirichlet_kernel(n, spec):
    """Return D_n = sum_{k<n} w_k; D_0 = 0.

    Raises:
        ValueError: n > 2^K.
    """
    n = _check_count(n, spec)
    coefficients = np.zeros(spec.size)
    coefficients[:n] = 1.0
    return GridFunction1D(spec, inverse_paley_transform(coefficients))


def fejer_kernel(n, spec):
    """Return K_n = (1/n) sum_{k=1}^n D_k; K_0 = 0.

    Coefficient j of n K_n counts the k in [1, n] with k > j.

    Raises:
        ValueError: n > 2^K.
    """
    n = _check_count(n, spec)
    if not n:
        return GridFunction1D.constant(spec, 0.0)
    coefficients = np.maximum(n - np.arange(spec.size), 0) / n
    return GridFunction1D(spec, inverse_paley_transform(coefficients))


def fejer_plateaus(m):
    """Return the dyadic plateaus of K_{2^m} as exact (interval, value) pairs.

    K_{2^m} = 1/2 ((2^m + 1) on I_m + sum_{j<m} 2^j on I_m(2^-j-1)) and
    vanishes elsewhere.

    Args:
        m (int): Exponent, m >= 0.

    Returns:
        list: Pairs (DyadicInterval, Fraction).
    """
    m = operator.index(m)
    if m < 0:
        raise ValueError("Negative exponent: %d" % m)
    plateaus = [(DyadicInterval(m, 0), Fraction((1 << m) + 1, 2))]
    for j in range(m):
        plateaus.append((DyadicInterval(m, 1 << (m - j - 1)), Fraction(1 << j, 2)))
    return plateaus


def fejer_power_kernel(m, spec):
    """Return K_{2^m} on the grid from its closed-form plateaus.

    Raises:
        ValueError: m > K.
    """
    spec.check_depth(m)
    samples = np.zeros(spec.size)
    for interval, value in fejer_plateaus(m):
        cells = interval.cells(spec)
        samples[cells.start : cells.stop] = float(value)
    return GridFunction1D(spec, samples)


def dyadic_convolve(f, g):
    """Return (f * g)(l) = 2^-K sum_j f(j) g(l xor j).

    The spectra multiply under dyadic convolution.

    Raises:
        ValueError: Mismatched resolutions.
    """
    _check_same_spec(f.spec, g.spec)
    product = paley_transform(f.samples) * paley_transform(g.samples)
    return GridFunction1D(f.spec, inverse_paley_transform(product))


def _hadamard(array):
    """Natural-order Walsh-Hadamard butterflies along the last axis, unnormalized."""
    size = array.shape[-1]
    lead = array.shape[:-1]
    half = 1
    while half < size:
        blocks = array.reshape(lead + (size // (2 * half), 2, half))
        low = blocks[..., 0, :]
        high = blocks[..., 1, :]
        array = np.stack((low + high, low - high), axis=-2).reshape(lead + (size,))
        half *= 2
    return array


@functools.lru_cache(maxsize=None)
def _paley_permutation(resolution):
    index = np.arange(1 << resolution, dtype=np.int64)
    result = np.zeros_like(index)
    for k in range(resolution):
        result |= ((index >> k) & 1) << (resolution - 1 - k)
    result.setflags(write=False)
    return result


@functools.lru_cache(maxsize=None)
def _grid_indices_for(resolution):
    result = np.arange(1 << resolution, dtype=np.int64)
    result.setflags(write=False)
    return result


def _grid_indices(spec):
    return _grid_indices_for(spec.resolution)


def _resolution_of(size):
    resolution = size.bit_length() - 1
    if size < 2 or size != 1 << resolution:
        raise ValueError("Transform length must be a power of two >= 2: %d" % size)
    return resolution


def _check_count(n, spec):
    n = operator.index(n)
    if not 0 <= n <= spec.size:
        raise ValueError(
            "Index %d exceeds 2^K = %d at resolution %d"
            % (n, spec.size, spec.resolution)
        )
    return n


def _check_same_spec(lhs, rhs):
    if lhs != rhs:
        raise ValueError("Mismatched resolutions: %r vs %r" % (lhs, rhs))
