"""Implements the SparseStepFunction class."""

import io
import re
from fractions import Fraction

import numpy as np

from walsh_summability.dyadic import DyadicInterval, DyadicRational, interval_of
from walsh_summability.walsh import GridFunction1D


class SparseStepFunction:
    """Concrete class for an exact function made of dyadic pieces.

    Each piece is a pair (DyadicInterval, DyadicRational). Pieces are kept
    sorted by left endpoint and must be pairwise disjoint. The function is 0
    off the pieces.

    This class can be constructed from a multi-line table with one piece per
    line.

      offset/depth = numerator/2^scale

    The piece is the interval [offset/2^depth, (offset+1)/2^depth). Comment
    lines begin with '#'. Blank lines are ignored.

    Args:
        pieces (Iterable[tuple]): Pairs (DyadicInterval, DyadicRational).

    Raises:
        ValueError: Overlapping pieces.
    """

    def __init__(self, pieces=()):
        self._pieces = _sort_disjoint(
            [(interval, _as_dyadic(value)) for interval, value in pieces]
        )

    @classmethod
    def parse(cls, table):
        """Construct from a multi-line string of pieces.

        Raises:
            ValueError: Error while parsing `table`, or overlapping pieces.
        """
        return cls(_parse(table))

    def items(self):
        """Generator yielding sequence of piece tuples (interval, value)."""
        yield from self._pieces

    def __len__(self):
        return len(self._pieces)

    def value_at(self, x):
        """Return the exact value at the point `x` in [0, 1).

        Args:
            x (DyadicRational|Fraction): Point.

        Returns:
            DyadicRational: Value, 0 off the pieces.
        """
        for interval, value in self._pieces:
            if interval_of(x, interval.depth) == interval:
                return value
        return DyadicRational(0)

    def integral(self):
        """Return the exact integral over [0, 1) as a Fraction."""
        return sum(
            (value.to_fraction() * interval.length for interval, value in self._pieces),
            Fraction(0),
        )

    def integral_over(self, window, weight=None):
        """Return the exact integral of weight(value) over `window`.

        Args:
            window (DyadicInterval): Region of integration.
            weight (Optional[Callable]): Maps a Fraction value to a Fraction.
                Defaults to the identity.

        Returns:
            Fraction: Integral.
        """
        total = Fraction(0)
        for interval, value in self._pieces:
            overlap = interval.intersection_length(window)
            if overlap:
                amount = value.to_fraction()
                if weight is not None:
                    amount = weight(amount)
                total += amount * overlap
        return total

    def covered_length(self, window):
        """Return the length of `window` covered by pieces."""
        return sum(
            (interval.intersection_length(window) for interval, _ in self._pieces),
            Fraction(0),
        )

    def to_grid(self, spec):
        """Return the cell averages on the grid `spec` as a GridFunction1D."""
        samples = np.zeros(spec.size)
        for interval, value in self._pieces:
            amount = float(value)
            if interval.depth <= spec.resolution:
                cells = interval.cells(spec)
                samples[cells.start : cells.stop] += amount
            else:
                cell = interval.offset >> (interval.depth - spec.resolution)
                samples[cell] += amount * float(interval.length * spec.size)
        return GridFunction1D(spec, samples)

    def __eq__(self, rhs):
        if not isinstance(rhs, SparseStepFunction):
            return NotImplemented
        return self._pieces == rhs._pieces

    __hash__ = None

    def __repr__(self):
        """Return string representation of the function.

        Example:
            "SparseStepFunction('1/2 = 1/2^0\n3/4 = 3/2^1')"
        """
        elems = "\\n".join(_repr(piece) for piece in self._pieces)
        return "SparseStepFunction('%s')" % elems

    def to_table(self):
        """Return the multi-line table accepted by `parse`."""
        return "".join(_repr(piece) + "\n" for piece in self._pieces)


def _as_dyadic(value):
    if isinstance(value, DyadicRational):
        return value
    return DyadicRational.from_fraction(value)


def _parse(table):
    """Parse a multi-line string containing pieces.

    Args:
        table (str): Multi-line string of pieces.

    Returns:
        list: List of 2-tuples (DyadicInterval, DyadicRational).

    Raises:
        ValueError: Error while parsing `table`.
    """
    piece = re.compile(r"^(\d+)/(\d+)\s*=\s*(-?\d+)(?:/2\^(\d+))?$")
    elems = []
    for line in io.StringIO(table):
        line = line.strip()
        m = piece.match(line)
        if not m:
            if line and line[0] != "#":
                raise ValueError("Unable to parse line: %s" % line)
            continue
        offset, depth = int(m.group(1)), int(m.group(2))
        if offset >= (1 << depth):
            raise ValueError("Invalid piece (offset >= 2^depth): %s" % line)
        scale = int(m.group(4)) if m.group(4) else 0
        value = DyadicRational(int(m.group(3)), scale)
        elems.append((DyadicInterval(depth, offset), value))
    return elems


def _sort_disjoint(elems):
    """Sort pieces by left endpoint (in-place) and check they are disjoint.

    Args:
        elems (list): List of 2-tuples (interval, value).

    Returns:
        list: List `elems` after sorting in-place.

    Raises:
        ValueError: Overlapping pieces.
    """
    elems.sort(key=lambda elem: (elem[0].left, elem[0].depth))
    for i in range(len(elems) - 1):
        (left, _), (right, _) = elems[i : i + 2]
        if left.intersection_length(right):
            raise ValueError(
                "Piece overlaps at index %d: %s and %s" % (i, left, right)
            )
    return elems


def _repr(elem):
    """Return string representation for tuple (interval, value).

    Examples:
        "3/4 = 1/2^1"
    """
    interval, value = elem
    return "%d/%d = %d/2^%d" % (
        interval.offset,
        interval.depth,
        value.numerator,
        value.scale,
    )
