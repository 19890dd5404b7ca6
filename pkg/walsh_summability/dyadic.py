"""Implements binary index arithmetic, dyadic rationals and dyadic intervals."""

import functools
import operator
from fractions import Fraction


class BinaryIndex:
    """Natural number with access to its binary coefficients.

    The order |n| satisfies 2^|n| <= n < 2^(|n|+1). It is undefined for zero;
    `order` returns None in that case.

    Args:
        value (int): Nonnegative integer.

    Raises:
        ValueError: `value` is negative.
    """

    def __init__(self, value):
        value = operator.index(value)
        if value < 0:
            raise ValueError("Negative index: %d" % value)
        self._value = value

    @property
    def value(self):
        """Integer value."""
        return self._value

    @property
    def order(self):
        """Position of the highest set bit, or None for zero."""
        if not self._value:
            return None
        return self._value.bit_length() - 1

    def bit(self, k):
        """Return the binary coefficient eps_k(n)."""
        return (self._value >> k) & 1

    def bits(self):
        """Return [eps_0(n), ..., eps_|n|(n)]."""
        return binary_bits(self._value)

    def prefix(self, s):
        """Return n(s), the sum of eps_j(n) 2^j for j <= s."""
        return prefix(self._value, s)

    def __index__(self):
        return self._value

    def __int__(self):
        return self._value

    def __eq__(self, rhs):
        if isinstance(rhs, BinaryIndex):
            return self._value == rhs._value
        if isinstance(rhs, int):
            return self._value == rhs
        return NotImplemented

    def __hash__(self):
        return hash(self._value)

    def __repr__(self):
        return "BinaryIndex(%d)" % self._value


def binary_bits(n):
    """Return the binary coefficients of `n` from eps_0 up to eps_|n|.

    Args:
        n (int|BinaryIndex): Nonnegative integer.

    Returns:
        list: Coefficients in {0, 1}; empty for n = 0.
    """
    n = BinaryIndex(n).value
    return [(n >> k) & 1 for k in range(n.bit_length())]


def order(n):
    """Return |n|, or None when n = 0."""
    return BinaryIndex(n).order


def prefix(n, s):
    """Return n(s) := sum of eps_j(n) 2^j for j = 0..s.

    Args:
        n (int|BinaryIndex): Nonnegative integer.
        s (int): Last bit position kept.

    Returns:
        int: Lower bits of `n`; equals `n` once s >= |n|.

    Raises:
        ValueError: `s` is negative.
    """
    n = BinaryIndex(n).value
    if s < 0:
        raise ValueError("Negative prefix position: %d" % s)
    return n & ((1 << (s + 1)) - 1)


class GridSpec:
    """Dyadic grid of 2^K cells on [0, 1).

    Grid index l stands for the point l/2^K. Digit x_m of that point is bit
    K-1-m of l.

    Args:
        resolution (int): K >= 1.

    Raises:
        ValueError: `resolution` < 1.
    """

    def __init__(self, resolution):
        resolution = operator.index(resolution)
        if resolution < 1:
            raise ValueError("Resolution must be >= 1: %d" % resolution)
        self._resolution = resolution

    @property
    def resolution(self):
        """K."""
        return self._resolution

    @property
    def size(self):
        """Number of cells, 2^K."""
        return 1 << self._resolution

    def check_index(self, index):
        """Return `index` if it is a valid grid index.

        Raises:
            ValueError: Index out of range.
        """
        index = operator.index(index)
        if not 0 <= index < self.size:
            raise ValueError(
                "Grid index %d out of range for resolution %d"
                % (index, self._resolution)
            )
        return index

    def check_depth(self, depth):
        """Return `depth` if 0 <= depth <= K.

        Raises:
            ValueError: Depth exceeds the resolution.
        """
        depth = operator.index(depth)
        if not 0 <= depth <= self._resolution:
            raise ValueError(
                "Depth %d exceeds resolution %d" % (depth, self._resolution)
            )
        return depth

    def point(self, index):
        """Return the dyadic rational l/2^K for grid index `index`."""
        return DyadicRational(self.check_index(index), self._resolution)

    def __eq__(self, rhs):
        if not isinstance(rhs, GridSpec):
            return NotImplemented
        return self._resolution == rhs._resolution

    def __hash__(self):
        return hash(self._resolution)

    def __repr__(self):
        return "GridSpec(%d)" % self._resolution


@functools.total_ordering
class DyadicRational:
    """Exact number numerator/2^scale in canonical form.

    Canonical form has an odd numerator, or numerator 0 with scale 0.

    Args:
        numerator (int): Arbitrary precision integer.
        scale (int): Nonnegative power of two in the denominator.

    Raises:
        ValueError: `scale` is negative.
    """

    def __init__(self, numerator, scale=0):
        numerator = operator.index(numerator)
        scale = operator.index(scale)
        if scale < 0:
            raise ValueError("Negative scale: %d" % scale)
        if numerator == 0:
            scale = 0
        else:
            shift = min((numerator & -numerator).bit_length() - 1, scale)
            numerator >>= shift
            scale -= shift
        self._numerator = numerator
        self._scale = scale

    @classmethod
    def from_fraction(cls, value):
        """Convert a Fraction (or int) with a power-of-two denominator.

        Raises:
            ValueError: Denominator is not a power of two.
        """
        value = Fraction(value)
        denominator = value.denominator
        if denominator & (denominator - 1):
            raise ValueError("Not a dyadic rational: %s" % value)
        return cls(value.numerator, denominator.bit_length() - 1)

    @property
    def numerator(self):
        """Numerator in canonical form."""
        return self._numerator

    @property
    def scale(self):
        """Exponent of the power-of-two denominator."""
        return self._scale

    def to_fraction(self):
        """Return the value as a Fraction."""
        return Fraction(self._numerator, 1 << self._scale)

    def digit(self, m):
        """Return binary digit x_m of a point in [0, 1).

        The terminating expansion is used, so digits beyond `scale` are 0.
        """
        if not 0 <= self._numerator < (1 << self._scale) and self._numerator:
            raise ValueError("Digits are defined for points in [0, 1): %s" % self)
        if m + 1 > self._scale:
            return 0
        return (self._numerator >> (self._scale - m - 1)) & 1

    def as_dict(self):
        """Return a JSON-friendly rendering with a decimal approximation."""
        return {
            "numerator": self._numerator,
            "scale": self._scale,
            "decimal": repr(float(self.to_fraction())),
        }

    def __float__(self):
        return float(self.to_fraction())

    def __eq__(self, rhs):
        if isinstance(rhs, DyadicRational):
            return (self._numerator, self._scale) == (rhs._numerator, rhs._scale)
        if isinstance(rhs, (int, Fraction)):
            return self.to_fraction() == rhs
        return NotImplemented

    def __lt__(self, rhs):
        if isinstance(rhs, DyadicRational):
            rhs = rhs.to_fraction()
        if isinstance(rhs, (int, Fraction)):
            return self.to_fraction() < rhs
        return NotImplemented

    def __hash__(self):
        return hash(self.to_fraction())

    def __str__(self):
        return "%d/2^%d" % (self._numerator, self._scale)

    def __repr__(self):
        return "DyadicRational(%d, %d)" % (self._numerator, self._scale)


class DyadicInterval:
    """Dyadic interval I(l, k) = [l/2^k, (l+1)/2^k).

    Args:
        depth (int): k >= 0.
        offset (int): l with 0 <= l < 2^k.

    Raises:
        ValueError: Offset out of range.
    """

    def __init__(self, depth, offset):
        depth = operator.index(depth)
        offset = operator.index(offset)
        if depth < 0 or not 0 <= offset < (1 << depth):
            raise ValueError(
                "Invalid dyadic interval: offset=%d depth=%d" % (offset, depth)
            )
        self._depth = depth
        self._offset = offset

    @property
    def depth(self):
        """k."""
        return self._depth

    @property
    def offset(self):
        """l."""
        return self._offset

    @property
    def left(self):
        """Left endpoint as a DyadicRational."""
        return DyadicRational(self._offset, self._depth)

    @property
    def right(self):
        """Right endpoint as a DyadicRational."""
        return DyadicRational(self._offset + 1, self._depth)

    @property
    def length(self):
        """2^-k as a Fraction."""
        return Fraction(1, 1 << self._depth)

    def contains(self, x):
        """Check if the point `x` (DyadicRational or Fraction) lies in the interval."""
        return interval_of(x, self._depth) == self

    def is_subset(self, other):
        """Check if this interval is contained in `other`."""
        shift = self._depth - other._depth
        return shift >= 0 and (self._offset >> shift) == other._offset

    def intersection_length(self, other):
        """Return the exact length of the intersection with `other`.

        Two dyadic intervals are either nested or disjoint.
        """
        if self.is_subset(other):
            return self.length
        if other.is_subset(self):
            return other.length
        return Fraction(0)

    def cells(self, spec):
        """Return the range of grid indices covered at resolution `spec`.

        Raises:
            ValueError: Interval is finer than the grid.
        """
        shift = spec.resolution - self._depth
        if shift < 0:
            raise ValueError(
                "Interval depth %d finer than resolution %d"
                % (self._depth, spec.resolution)
            )
        return range(self._offset << shift, (self._offset + 1) << shift)

    def __eq__(self, rhs):
        if not isinstance(rhs, DyadicInterval):
            return NotImplemented
        return (self._depth, self._offset) == (rhs._depth, rhs._offset)

    def __hash__(self):
        return hash((self._depth, self._offset))

    def __str__(self):
        return "[%d/2^%d, %d/2^%d)" % (
            self._offset,
            self._depth,
            self._offset + 1,
            self._depth,
        )

    def __repr__(self):
        return "DyadicInterval(depth=%d, offset=%d)" % (self._depth, self._offset)


def dyadic_add(i, j, spec=None):
    """Return the dyadic sum i + j (digitwise addition mod 2).

    Grid indices combine by exclusive-or and need `spec`. DyadicRationals in
    [0, 1) combine digitwise at their common scale.

    Args:
        i (int|DyadicRational): First operand.
        j (int|DyadicRational): Second operand.
        spec (Optional[GridSpec]): Grid for integer operands.

    Returns:
        int|DyadicRational: The dyadic sum.

    Raises:
        ValueError: Index out of range, or grid missing for integer operands.
    """
    if isinstance(i, DyadicRational) and isinstance(j, DyadicRational):
        scale = max(i.scale, j.scale)
        for x in (i, j):
            if not 0 <= x.numerator < (1 << x.scale) and x.numerator:
                raise ValueError("Dyadic addition needs points in [0, 1): %s" % x)
        left = i.numerator << (scale - i.scale)
        right = j.numerator << (scale - j.scale)
        return DyadicRational(left ^ right, scale)
    if spec is None:
        raise ValueError("Grid spec required to add grid indices")
    return spec.check_index(i) ^ spec.check_index(j)


def dyadic_shift(index, k, spec):
    """Return grid index of x + 2^-(k+1) for x = index/2^K.

    Digits beyond the grid are zero, so for k >= K the index is unchanged.
    """
    index = spec.check_index(index)
    if k < spec.resolution:
        return index ^ (1 << (spec.resolution - 1 - k))
    return index


def interval_of(x, k, spec=None):
    """Return I_k(x), the dyadic interval of length 2^-k containing `x`.

    Args:
        x (int|DyadicRational|Fraction): Grid index (needs `spec`) or point.
        k (int): Depth.
        spec (Optional[GridSpec]): Grid for integer `x`.

    Returns:
        DyadicInterval: Interval of depth `k` containing `x`.

    Raises:
        ValueError: `x` outside [0, 1), or grid missing for integer `x`.
    """
    if k < 0:
        raise ValueError("Negative depth: %d" % k)
    if isinstance(x, DyadicRational):
        x = x.to_fraction()
    if isinstance(x, Fraction):
        if not 0 <= x < 1:
            raise ValueError("Point outside [0, 1): %s" % x)
        return DyadicInterval(k, (x.numerator << k) // x.denominator)
    if spec is None:
        raise ValueError("Grid spec required for a grid index")
    x = spec.check_index(x)
    shift = spec.resolution - k
    if shift >= 0:
        return DyadicInterval(k, x >> shift)
    return DyadicInterval(k, x << -shift)


def bit_reverse(value, width):
    """Reverse the lowest `width` bits of `value`."""
    result = 0
    for _ in range(width):
        result = (result << 1) | (value & 1)
        value >>= 1
    return result
