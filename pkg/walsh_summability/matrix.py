"""Implements the matrix of transformation classes."""

import functools
import math
import operator
import threading

import numpy as np

from walsh_summability.errors import raise_row_error

# Absolute tolerance for the monotonicity and row-sum conditions.
ROW_TOLERANCE = 1e-12

_ROW_CACHE_SIZE = 256


class TransformationMatrix:
    """Base class for a matrix of transformation t_{k,n}.

    Subclasses override `compute_row`, and may override `tau` with a closed
    form. Rows are validated against conditions (a)-(c) when first computed
    and memoized afterwards.

    Args:
        name (str): Name of matrix.
        params (Optional[dict]): Family parameters.
    """

    def __init__(self, name, params=None):
        self._name = name
        self._params = dict(params or {})
        self._cached_row = functools.lru_cache(maxsize=_ROW_CACHE_SIZE)(self._make_row)

    @property
    def name(self):
        """Matrix name."""
        return self._name

    @property
    def params(self):
        """Copy of the family parameters."""
        return dict(self._params)

    def row(self, n):
        """Return (t_{0,n}, ..., t_{n,n}) as a read-only array.

        Args:
            n (int|BinaryIndex): Row index.

        Returns:
            numpy.ndarray: n+1 weights.

        Raises:
            RowValidationError: Row violates (a), (b) or (c).
            ValueError: Negative row index.
        """
        n = operator.index(n)
        if n < 0:
            raise ValueError("Negative row index: %d" % n)
        return self._cached_row(n)

    def entry(self, k, n):
        """Return t_{k,n}.

        Raises:
            ValueError: k outside [0, n].
        """
        n = operator.index(n)
        k = operator.index(k)
        if not 0 <= k <= n:
            raise ValueError("Entry k=%d outside row %d" % (k, n))
        return float(self.row(n)[k])

    def tau(self, s, n):
        """Return tau_{s,n} = t_{0,n} + ... + t_{s,n}.

        Raises:
            ValueError: s outside [0, n].
        """
        s, n = _check_partial(s, n)
        return math.fsum(self.row(n)[: s + 1])

    def compute_row(self, n):
        """Compute row `n` without validation.

        Args:
            n (int): Row index.

        Returns:
            array_like: n+1 weights.
        """
        raise NotImplementedError

    def validate_row(self, n, row):
        """Check conditions (a)-(c) for row `n`.

        Args:
            n (int): Row index.
            row (numpy.ndarray): Candidate weights.

        Returns:
            numpy.ndarray: `row`, unchanged.

        Raises:
            RowValidationError: Row is invalid.
        """
        if row.shape != (n + 1,):
            raise_row_error(self._name, n, "shape", -1, "expected %d entries" % (n + 1))
        if not np.all(np.isfinite(row)):
            raise_row_error(self._name, n, "shape", -1, "non-finite entry")
        negative = np.flatnonzero(row < 0)
        if negative.size:
            k = int(negative[0])
            raise_row_error(self._name, n, "a", k, "t=%r < 0" % row[k])
        rising = np.flatnonzero(np.diff(row) > ROW_TOLERANCE)
        if rising.size:
            k = int(rising[0]) + 1
            raise_row_error(
                self._name, n, "b", k, "t=%r > previous %r" % (row[k], row[k - 1])
            )
        total = math.fsum(row)
        if abs(total - 1.0) > ROW_TOLERANCE:
            raise_row_error(self._name, n, "c", -1, "row sums to %r" % total)
        return row

    def _make_row(self, n):
        row = np.array(self.compute_row(n), dtype=np.float64)
        self.validate_row(n, row)
        row.setflags(write=False)
        return row

    def __repr__(self):
        return "<%s %s>" % (self.__class__.__name__, self._name)


class IdentityMatrix(TransformationMatrix):
    """Concrete class for the identity family: t_{0,n} = 1, so the mean is S_n."""

    def __init__(self, name="identity"):
        super().__init__(name)

    def compute_row(self, n):
        # Override
        row = np.zeros(n + 1)
        row[0] = 1.0
        return row

    def tau(self, s, n):
        # Override
        _check_partial(s, n)
        return 1.0


class FejerMatrix(TransformationMatrix):
    """Concrete class for Fejer means.

    t_{k,n} = 1/n for k < n and t_{n,n} = 0, which gives the arithmetic mean
    of S_1, ..., S_n. Row 0 is (1,).
    """

    def __init__(self, name="fejer"):
        super().__init__(name)

    def compute_row(self, n):
        # Override
        if not n:
            return [1.0]
        row = np.full(n + 1, 1.0 / n)
        row[n] = 0.0
        return row

    def tau(self, s, n):
        # Override
        s, n = _check_partial(s, n)
        if not n:
            return 1.0
        return min(s + 1, n) / n


class CesaroMatrix(TransformationMatrix):
    """Concrete class for (C, alpha) means, t_{k,n} = A_k^(alpha-1) / A_n^alpha.

    Args:
        alpha (float): Order in (0, 1].
        name (Optional[str]): Name of matrix.

    Raises:
        ValueError: `alpha` outside (0, 1].
    """

    def __init__(self, alpha, name=None):
        alpha = _check_alpha(alpha)
        super().__init__(name or "cesaro:%r" % alpha, {"alpha": alpha})
        self._alpha = alpha

    @property
    def alpha(self):
        """Order of the means."""
        return self._alpha

    def order_for_row(self, n):
        """Return the order used by row `n`."""
        return self._alpha

    def compute_row(self, n):
        # Override
        weights = cesaro_table(self.order_for_row(n) - 1.0, n)
        return weights / math.fsum(weights)

    def tau(self, s, n):
        # Override
        s, n = _check_partial(s, n)
        if s == n:
            return 1.0
        table = cesaro_table(self.order_for_row(n), n)
        return float(table[s] / table[n])


class CesaroSequenceMatrix(CesaroMatrix):
    """Concrete class for variable order Cesaro means.

    Row n uses alpha_n. Rows past the end of `alphas` reuse the last order.

    Args:
        alphas (Sequence[float]): Orders alpha_0, alpha_1, ..., each in (0, 1].
        name (Optional[str]): Name of matrix.

    Raises:
        ValueError: Empty sequence or order outside (0, 1].
    """

    def __init__(self, alphas, name="cesaro-seq"):
        alphas = tuple(_check_alpha(alpha) for alpha in alphas)
        if not alphas:
            raise ValueError("Empty order sequence")
        super().__init__(alphas[-1], name=name)
        self._params = {"alphas": list(alphas)}
        self._alphas = alphas

    @property
    def alphas(self):
        """Tuple of orders."""
        return self._alphas

    def order_for_row(self, n):
        # Override
        return self._alphas[min(n, len(self._alphas) - 1)]


class NorlundLogMatrix(TransformationMatrix):
    """Concrete class for logarithmic Norlund means.

    t_{k,n} = 1 / (l_n (k+1)) with l_n = 1 + 1/2 + ... + 1/(n+1).
    """

    def __init__(self, name="nlog"):
        super().__init__(name)

    def compute_row(self, n):
        # Override
        reciprocals = 1.0 / np.arange(1, n + 2)
        return reciprocals / math.fsum(reciprocals)

    def tau(self, s, n):
        # Override
        s, n = _check_partial(s, n)
        if s == n:
            return 1.0
        table = harmonic_table(n)
        return float(table[s] / table[n])


class CustomMatrix(TransformationMatrix):
    """Concrete class for a finite matrix given row by row.

    All rows are validated on construction.

    Args:
        rows (Sequence[Sequence[float]]): Row n holds n+1 weights.
        name (str): Name of matrix.

    Raises:
        RowValidationError: A row is invalid.
        ValueError: No rows.
    """

    def __init__(self, rows, name="custom"):
        super().__init__(name, {"rows": len(rows)})
        if not rows:
            raise ValueError("Custom matrix has no rows")
        self._rows = [np.array(row, dtype=np.float64) for row in rows]
        for n, row in enumerate(self._rows):
            self.validate_row(n, row)

    @property
    def size(self):
        """Number of rows available."""
        return len(self._rows)

    def compute_row(self, n):
        # Override
        if n >= len(self._rows):
            raise ValueError(
                "%s: row %d not defined (matrix has %d rows)"
                % (self.name, n, len(self._rows))
            )
        return self._rows[n]


def cesaro_A(alpha, k):
    """Return A_k^alpha by the recurrence A_0 = 1, A_k = A_{k-1} (k + alpha) / k.

    Args:
        alpha (float): Order, alpha > -1.
        k (int): Index.

    Returns:
        float: A_k^alpha.

    Raises:
        ValueError: alpha <= -1 or k < 0.
    """
    k = operator.index(k)
    if alpha <= -1.0 or k < 0:
        raise ValueError(
            "cesaro_A needs alpha > -1 and k >= 0: alpha=%r k=%d" % (alpha, k)
        )
    value = 1.0
    for j in range(1, k + 1):
        value *= (j + alpha) / j
    return value


class _GrowingTable:
    """Prefix table extended by doubling, shared across threads."""

    def __init__(self, build):
        self._build = build
        self._values = build(0)
        self._values.setflags(write=False)
        self._lock = threading.Lock()

    def upto(self, n):
        values = self._values
        if len(values) > n:
            return values
        with self._lock:
            if len(self._values) <= n:
                size = max(2 * len(self._values), n + 1)
                self._values = self._build(size - 1)
                self._values.setflags(write=False)
            return self._values


@functools.lru_cache(maxsize=64)
def _cesaro_growing(alpha):
    def _build(n):
        factors = (np.arange(1, n + 1) + alpha) / np.arange(1, n + 1)
        return np.concatenate(([1.0], np.cumprod(factors)))

    return _GrowingTable(_build)


def cesaro_table(alpha, n):
    """Return [A_0^alpha, ..., A_n^alpha] as a read-only array."""
    return _cesaro_growing(float(alpha)).upto(n)[: n + 1]


def _build_harmonic(n):
    return np.cumsum(1.0 / np.arange(1, n + 2))


_HARMONIC = _GrowingTable(_build_harmonic)


def harmonic_table(n):
    """Return [l_0, ..., l_n] with l_s = 1 + 1/2 + ... + 1/(s+1)."""
    return _HARMONIC.upto(n)[: n + 1]


def _check_alpha(alpha):
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ValueError("Cesaro order must lie in (0, 1]: %r" % alpha)
    return alpha


def _check_partial(s, n):
    s = operator.index(s)
    n = operator.index(n)
    if not 0 <= s <= n:
        raise ValueError("Partial index s=%d outside [0, %d]" % (s, n))
    return s, n
