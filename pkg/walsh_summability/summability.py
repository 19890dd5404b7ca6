"""Implements matrix means, their kernels and the boundedness functional."""

import dataclasses
import math
import operator
from typing import Optional

import numpy as np

from walsh_summability.dyadic import BinaryIndex, binary_bits, prefix
from walsh_summability.errors import IdentityCheckError
from walsh_summability.walsh import (
    GridFunction1D,
    dirichlet_kernel,
    dyadic_convolve,
    inverse_paley_transform,
    paley_transform,
    walsh_sample,
)

# Default max-norm tolerance for V1 + V2 = V.
DECOMPOSITION_TOLERANCE = 1e-9


def tau(matrix, s, n):
    """Return tau_{s,n}, the partial sum of row n up to s."""
    return matrix.tau(s, n)


def upsilon(matrix, n):
    """Return the sum over k <= |n| of |eps_k(n) - eps_{k+1}(n)| tau_{2^k,n}.

    Args:
        matrix (TransformationMatrix): Matrix of transformation.
        n (int|BinaryIndex): Index >= 1.

    Returns:
        float: upsilon(n, T).

    Raises:
        ValueError: n = 0.
    """
    n = BinaryIndex(n).value
    if not n:
        raise ValueError("upsilon is undefined for n = 0")
    bits = binary_bits(n) + [0]
    return math.fsum(
        matrix.tau(1 << k, n)
        for k in range(len(bits) - 1)
        if bits[k] != bits[k + 1]
    )


def coefficient_weights(matrix, n, size):
    """Return the multiplier of coefficient j in the n-th mean.

    Entry j is the sum of t_{n-k,n} over k = j+1..n, which is
    tau_{n-1-j,n} for j < n and zero from j = n on.

    Args:
        matrix (TransformationMatrix): Matrix of transformation.
        n (int): Index, n <= size.
        size (int): Length of the returned array.

    Returns:
        numpy.ndarray: Weights in Paley order.
    """
    n = operator.index(n)
    if not 0 <= n <= size:
        raise ValueError("Index %d exceeds grid size %d" % (n, size))
    weights = np.zeros(size)
    if n:
        weights[:n] = np.cumsum(matrix.row(n))[:n][::-1]
    return weights


def kernel_V(matrix, n, spec):
    """Return V_n = sum_{k=1}^n t_{n-k,n} D_k on the grid.

    Raises:
        ValueError: n > 2^K.
    """
    _check_mean_index(n, spec)
    return GridFunction1D(
        spec, inverse_paley_transform(coefficient_weights(matrix, n, spec.size))
    )


def kernel_l1_norm(matrix, n, spec):
    """Return ||V_n||_1."""
    return kernel_V(matrix, n, spec).l1_norm()


def linf_operator_norm(matrix, indices, spec):
    """Return the largest ||V_n||_1 over `indices`.

    This is the norm of the means as operators on bounded functions.
    """
    return max(kernel_l1_norm(matrix, n, spec) for n in indices)


def apply_mean(matrix, n, f, path="coefficient"):
    """Return the n-th mean sum_{k=0}^n t_{n-k,n} S_k f.

    Args:
        matrix (TransformationMatrix): Matrix of transformation.
        n (int): Index, n <= 2^K.
        f (GridFunction1D): Input function.
        path (str): 'coefficient' weights the spectrum; 'kernel' convolves
            with V_n.

    Returns:
        GridFunction1D: The mean.

    Raises:
        ValueError: n > 2^K or unknown path.
    """
    _check_mean_index(n, f.spec)
    if path == "coefficient":
        weights = coefficient_weights(matrix, n, f.spec.size)
        return GridFunction1D(
            f.spec, inverse_paley_transform(paley_transform(f.samples) * weights)
        )
    if path == "kernel":
        return dyadic_convolve(f, kernel_V(matrix, n, f.spec))
    raise ValueError("Unknown evaluation path: %s" % path)


def kernel_decomposition(matrix, n, spec):
    """Split V_n into the dyadic block part V1 and the Fejer part V2.

    V1 = w_n sum_s eps_s(n) tau_{n(s)-1,n} w_{2^s} D_{2^s}.

    V2 subtracts, for every set bit s, the first differences of
    t_{n(s-1)+1,n}, ..., t_{n(s-1)+2^s-1,n} applied to l K_l, moved to the
    block of bit s by w_n w_{n(s) xor (2^s-1)}.

    Args:
        matrix (TransformationMatrix): Matrix of transformation.
        n (int): Index with 1 <= n <= 2^K.
        spec (GridSpec): Grid.

    Returns:
        tuple: (V1, V2) as GridFunction1D.

    Raises:
        ValueError: n = 0 or n > 2^K.
    """
    n = operator.index(n)
    if not 1 <= n <= spec.size:
        raise ValueError(
            "Decomposition needs 1 <= n <= 2^K; resolution %d too small for n=%d"
            % (spec.resolution, n)
        )
    row = matrix.row(n)
    cumulative = np.cumsum(row)
    first = np.zeros(spec.size)
    second = np.zeros(spec.size)
    for s, bit in enumerate(binary_bits(n)):
        if not bit:
            continue
        upper = prefix(n, s)
        lower = upper - (1 << s)
        # w_n w_{2^s} = w_{n xor 2^s}, and w_{2^K} is 1 on the grid.
        block = walsh_sample(n ^ (1 << s), spec) * dirichlet_kernel(1 << s, spec)
        first += cumulative[upper - 1] * block.samples
        if s:
            combination = _fejer_combination(row[lower + 1 : upper], spec.size)
            shift = walsh_sample(n ^ upper ^ ((1 << s) - 1), spec).samples
            second -= shift * combination
    return GridFunction1D(spec, first), GridFunction1D(spec, second)


def check_decomposition(matrix, n, spec, tolerance=DECOMPOSITION_TOLERANCE):
    """Return max |V1 + V2 - V_n|.

    Raises:
        IdentityCheckError: Difference exceeds `tolerance`.
    """
    first, second = kernel_decomposition(matrix, n, spec)
    kernel = kernel_V(matrix, n, spec)
    error = float(np.max(np.abs(first.samples + second.samples - kernel.samples)))
    if error > tolerance:
        raise IdentityCheckError(
            "%s: V1 + V2 != V at n=%d (max error %.3g > %.3g)"
            % (matrix.name, n, error, tolerance)
        )
    return error


def c2_quantity(alpha, n):
    """Return 2^(-|n| alpha) times the sum over alternations k of 2^(k alpha).

    Args:
        alpha (float): Order in (0, 1].
        n (int|BinaryIndex): Index >= 1.

    Raises:
        ValueError: n = 0 or alpha outside (0, 1].
    """
    n = BinaryIndex(n).value
    if not n:
        raise ValueError("c2 quantity is undefined for n = 0")
    if not 0.0 < alpha <= 1.0:
        raise ValueError("Order must lie in (0, 1]: %r" % alpha)
    bits = binary_bits(n) + [0]
    top = len(bits) - 2
    return math.fsum(
        2.0 ** ((k - top) * alpha)
        for k in range(top + 1)
        if bits[k] != bits[k + 1]
    )


@dataclasses.dataclass(frozen=True)
class MeanReport:
    """Summary of the n-th mean of one matrix.

    `l1_kernel_norm` is None when no grid was given or n exceeds it.
    """

    n: int
    upsilon: float
    l1_kernel_norm: Optional[float]
    t0: float

    def as_dict(self):
        return dataclasses.asdict(self)


def mean_report(matrix, n, spec=None):
    """Return a MeanReport for row `n` of `matrix`."""
    norm = None
    if spec is not None and n <= spec.size:
        norm = kernel_l1_norm(matrix, n, spec)
    return MeanReport(
        n=n, upsilon=upsilon(matrix, n), l1_kernel_norm=norm, t0=matrix.entry(0, n)
    )


def _fejer_combination(entries, size):
    """Return sum_l b_l l K_l for b the first differences of `entries`.

    entries[l-1] holds a_l for l = 1..L. b_l = a_l - a_{l+1} and b_L = a_L.
    The spectrum of l K_l at j is (l - j) for j < l.
    """
    count = len(entries)
    differences = np.append(-np.diff(entries), entries[-1])
    lengths = np.arange(1, count + 1)
    # Suffix sums over l > j of b_l l and of b_l.
    moments = np.cumsum((differences * lengths)[::-1])[::-1]
    tails = np.cumsum(differences[::-1])[::-1]
    spectrum = np.zeros(size)
    spectrum[:count] = moments - np.arange(count) * tails
    return inverse_paley_transform(spectrum)


def _check_mean_index(n, spec):
    n = operator.index(n)
    if not 0 <= n <= spec.size:
        raise ValueError(
            "Index %d exceeds 2^K = %d at resolution %d"
            % (n, spec.size, spec.resolution)
        )
    return n
