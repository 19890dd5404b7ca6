"""Implements Walsh-Lebesgue point functionals and the convergence experiment."""

import dataclasses
import logging
import math
import operator

import numpy as np

from walsh_summability.dyadic import dyadic_shift
from walsh_summability.maximal import as_subsequence
from walsh_summability.tensor import tensor_mean
from walsh_summability.walsh import fejer_kernel

logger = logging.getLogger(__name__)

# A point passes (wl1) when W_{n,n} falls by this factor over the depth range.
DEFAULT_DECAY = 4.0

# (wl2)/(wl3) fail when an H functional grows by more than this factor.
DEFAULT_GROWTH = 4.0

# Constant in the (zz) estimate, 2 per variable.
ZZ_CONSTANT = 4.0

PASSES = "passes"
FAILS_WL1 = "fails wl1"
FAILS_WL2 = "fails wl2"
FAILS_WL3 = "fails wl3"


def w1(f, x, n):
    """Return W_n f(x) = sum_{k<=n} 2^k int over I_n(x + 2^-k-1) of |f - f(x)|.

    Args:
        f (GridFunction1D): Function.
        x (int): Grid index of the point.
        n (int): Depth, n <= K.

    Returns:
        float: Nonnegative value.

    Raises:
        ValueError: n > K or x out of range.
    """
    spec = f.spec
    x = spec.check_index(x)
    n = spec.check_depth(n)
    distance = np.abs(f.samples - f.samples[x])
    blocks = distance.reshape(1 << n, -1).sum(axis=1) / spec.size
    offsets = _shifted_offsets(x, n, spec)
    return math.fsum(
        (1 << k) * float(blocks[offset]) for k, offset in enumerate(offsets)
    )


def w2d(F, x0, x1, n0, n1):
    """Return W_{n0,n1} F(x0, x1), the two-dimensional shifted sum.

    Raises:
        ValueError: Depth exceeds K or point out of range.
    """
    return _point(F, x0, x1).w(n0, n1)


def w_table(F, x0, x1, depths):
    """Return [[W_{n0,n1} F(x) for n1 in depths] for n0 in depths]."""
    point = _point(F, x0, x1)
    return [[point.w(n0, n1) for n1 in depths] for n0 in depths]


def h0(F, x0, x1, n0):
    """Return H^(0)_{n0} F(x): shifts in the first variable, full second variable."""
    return _point(F, x0, x1).h0(n0)


def h1(F, x0, x1, n1):
    """Return H^(1)_{n1} F(x): shifts in the second variable, full first variable."""
    return _point(F, x0, x1).h1(n1)


class _PointFunctionals:
    """Block sums of |F - F(x0, x1)| shared by the W and H functionals."""

    def __init__(self, F, x0, x1):
        spec = F.spec
        self.spec = spec
        self.x0 = spec.check_index(x0)
        self.x1 = spec.check_index(x1)
        self.distance = np.abs(F.samples - F.samples[self.x0, self.x1])

    def blocks(self, n0, n1):
        size = self.spec.size
        sums = self.distance.reshape(1 << n0, size >> n0, 1 << n1, size >> n1)
        return sums.sum(axis=(1, 3)) / (size * size)

    def w(self, n0, n1):
        n0 = self.spec.check_depth(n0)
        n1 = self.spec.check_depth(n1)
        blocks = self.blocks(n0, n1)
        offsets0 = _shifted_offsets(self.x0, n0, self.spec)
        offsets1 = _shifted_offsets(self.x1, n1, self.spec)
        weights0 = np.exp2(np.arange(n0 + 1))
        weights1 = np.exp2(np.arange(n1 + 1))
        return float(weights0 @ blocks[np.ix_(offsets0, offsets1)] @ weights1)

    def h0(self, n0):
        n0 = self.spec.check_depth(n0)
        blocks = self.blocks(n0, 0)[:, 0]
        offsets = _shifted_offsets(self.x0, n0, self.spec)
        return float(np.exp2(np.arange(n0 + 1)) @ blocks[offsets])

    def h1(self, n1):
        n1 = self.spec.check_depth(n1)
        blocks = self.blocks(0, n1)[0, :]
        offsets = _shifted_offsets(self.x1, n1, self.spec)
        return float(np.exp2(np.arange(n1 + 1)) @ blocks[offsets])


@dataclasses.dataclass(frozen=True)
class WlpDiagnostic:
    """Finite-depth Walsh-Lebesgue point verdict for one point.

    The verdict is relative to the tested depths; it says nothing about the
    true limit.
    """

    point: tuple
    depths: list
    w_table: list
    h0_values: list
    h1_values: list
    h0_sup: float
    h1_sup: float
    verdict: str
    thresholds: dict

    @property
    def passes(self):
        return self.verdict == PASSES

    def as_dict(self):
        return {
            "point": list(self.point),
            "depths": list(self.depths),
            "W_values": [list(row) for row in self.w_table],
            "H0_values": list(self.h0_values),
            "H1_values": list(self.h1_values),
            "H0_sup": self.h0_sup,
            "H1_sup": self.h1_sup,
            "verdict": self.verdict,
            "thresholds": dict(self.thresholds),
        }


def classify_wlp(F, point, depths, decay=DEFAULT_DECAY, growth=DEFAULT_GROWTH):
    """Classify a grid point against (wl1)-(wl3) over a finite depth range.

    (wl1) passes when W_{n,n} at the last depth is at most 1/decay times its
    value at the first depth. (wl2) and (wl3) fail when H^(1), respectively
    H^(0), grows by more than `growth` from the first to the last depth.

    Args:
        F (GridFunction2D): Function.
        point (tuple): Grid coordinates (x0, x1).
        depths (Sequence[int]): Increasing depths, each <= K.
        decay (float): Required decay factor for (wl1).
        growth (float): Allowed growth factor for (wl2) and (wl3).

    Returns:
        WlpDiagnostic: Tables and verdict.
    """
    depths = [operator.index(n) for n in depths]
    if len(depths) < 2:
        raise ValueError("Need at least two depths: %r" % depths)
    x0, x1 = point
    functionals = _PointFunctionals(F, x0, x1)
    table = [[functionals.w(n0, n1) for n1 in depths] for n0 in depths]
    diagonal = [table[i][i] for i in range(len(depths))]
    h0_values = [functionals.h0(n) for n in depths]
    h1_values = [functionals.h1(n) for n in depths]
    if not _decays(diagonal, decay):
        verdict = FAILS_WL1
    elif not _bounded(h1_values, growth):
        verdict = FAILS_WL2
    elif not _bounded(h0_values, growth):
        verdict = FAILS_WL3
    else:
        verdict = PASSES
    logger.debug("Point (%d, %d): %s", functionals.x0, functionals.x1, verdict)
    return WlpDiagnostic(
        point=(functionals.x0, functionals.x1),
        depths=depths,
        w_table=table,
        h0_values=h0_values,
        h1_values=h1_values,
        h0_sup=max(h0_values),
        h1_sup=max(h1_values),
        verdict=verdict,
        thresholds={"decay": decay, "growth": growth},
    )


def classical_lebesgue_avg(f, x, depth):
    """Return 2^depth times the integral over [0, 2^-depth] of |f(x+t) - f(x)|.

    Args:
        f (GridFunction1D): Function.
        x (int): Grid index of the point.
        depth (int): Window depth, <= K.

    Raises:
        ValueError: Window leaves [0, 1).
    """
    spec = f.spec
    x = spec.check_index(x)
    width = spec.size >> spec.check_depth(depth)
    if x + width > spec.size:
        raise ValueError(
            "Window of depth %d at index %d leaves [0, 1)" % (depth, x)
        )
    window = f.samples[x : x + width]
    return float(np.mean(np.abs(window - f.samples[x])))


def wl1_sides(F, x0, x1, s0, s1):
    """Return (|F| * D_{2^s0} x D_{2^s1} at x, W_{s0,s1} F(x)).

    The first never exceeds the second when F(x) = 0.
    """
    functionals = _PointFunctionals(F, x0, x1)
    spec = functionals.spec
    s0 = spec.check_depth(s0)
    s1 = spec.check_depth(s1)
    magnitudes = np.abs(F.samples)
    size = spec.size
    sums = magnitudes.reshape(1 << s0, size >> s0, 1 << s1, size >> s1)
    sums = sums.sum(axis=(1, 3))
    local = sums[
        functionals.x0 >> (spec.resolution - s0),
        functionals.x1 >> (spec.resolution - s1),
    ]
    lhs = float(local) * (1 << (s0 + s1)) / (size * size)
    return lhs, functionals.w(s0, s1)


def wl2_sides(F, x0, x1, s0, s1):
    """Return (W_{s0,s1} F(x), 2^s0 H^(1)_{s1} F(x))."""
    functionals = _PointFunctionals(F, x0, x1)
    return functionals.w(s0, s1), (1 << s0) * functionals.h1(s1)


def wl3_sides(F, x0, x1, s0, s1):
    """Return (W_{s0,s1} F(x), 2^s1 H^(0)_{s0} F(x))."""
    functionals = _PointFunctionals(F, x0, x1)
    return functionals.w(s0, s1), (1 << s1) * functionals.h0(s0)


def wl4_constant(F, x0, x1, depths):
    """Return the smallest C with W_{s0,s1} F(x) <= C 2^(s0+s1) over `depths`."""
    functionals = _PointFunctionals(F, x0, x1)
    return max(
        functionals.w(s0, s1) / (1 << (s0 + s1)) for s0 in depths for s1 in depths
    )


def zz_sides(F, x0, x1, l0, l1, constant=ZZ_CONSTANT):
    """Return both sides of the (zz) estimate at the point (x0, x1).

    The left side is |F - F(x)| * (|K_l0| x |K_l1|) evaluated at x. The right
    side is constant/(l0 l1) times the sum over i0 <= |l0|, i1 <= |l1| of
    2^(i0+i1) W_{i0,i1} F(x).

    Raises:
        ValueError: l0 or l1 outside [1, 2^K].
    """
    functionals = _PointFunctionals(F, x0, x1)
    spec = functionals.spec
    for index_ in (l0, l1):
        if not 1 <= index_ <= spec.size:
            raise ValueError("Fejer index %d outside [1, %d]" % (index_, spec.size))
    index = np.arange(spec.size)
    kernel0 = np.abs(fejer_kernel(l0, spec).samples)[index ^ functionals.x0]
    kernel1 = np.abs(fejer_kernel(l1, spec).samples)[index ^ functionals.x1]
    lhs = float(kernel0 @ functionals.distance @ kernel1) / (spec.size * spec.size)
    total = math.fsum(
        (1 << (i0 + i1)) * functionals.w(i0, i1)
        for i0 in range(l0.bit_length())
        for i1 in range(l1.bit_length())
    )
    return lhs, constant * total / (l0 * l1)


@dataclasses.dataclass(frozen=True)
class ConvergenceRow:
    """Errors |T_{n_a} x T_{n_b} F - F| at one point."""

    point: tuple
    verdict: str
    errors: list
    diagonal: list
    tail_sups: list
    converging: bool

    def as_dict(self):
        return {
            "point": list(self.point),
            "verdict": self.verdict,
            "errors": [list(row) for row in self.errors],
            "diagonal": list(self.diagonal),
            "tail_sups": list(self.tail_sups),
            "converging": self.converging,
        }


@dataclasses.dataclass(frozen=True)
class ConvergenceReport:
    """Result of the tensor mean convergence experiment."""

    families: list
    indices0: list
    indices1: list
    t0_values0: list
    t0_values1: list
    points: list

    def as_dict(self):
        return {
            "families": list(self.families),
            "indices0": list(self.indices0),
            "indices1": list(self.indices1),
            "t0_values0": list(self.t0_values0),
            "t0_values1": list(self.t0_values1),
            "points": [row.as_dict() for row in self.points],
        }


def mt2_convergence_experiment(
    matrix0, matrix1, subseq0, subseq1, F, points, depths=None
):
    """Tabulate tensor mean errors at classified points.

    For each point the table holds |(T_{n_a} x T_{n_b} F)(x) - F(x)| over all
    index pairs. tail_sups[m] is the largest error over pairs with both
    positions >= m. A point is converging when the last tail sup is at most
    half the first. The t0 columns list t_{0,n} along each subsequence.

    Args:
        matrix0 (TransformationMatrix): First variable.
        matrix1 (TransformationMatrix): Second variable.
        subseq0 (IndexSubsequence): First variable indices.
        subseq1 (IndexSubsequence): Second variable indices.
        F (GridFunction2D): Function.
        points (Sequence[tuple]): Grid coordinates.
        depths (Optional[Sequence[int]]): Classification depths; 1..K by default.

    Returns:
        ConvergenceReport: Tables per point.
    """
    spec = F.spec
    subseq0 = as_subsequence(subseq0).check_resolution(spec)
    subseq1 = as_subsequence(subseq1).check_resolution(spec)
    if depths is None:
        depths = range(1, spec.resolution + 1)
    means = [
        [tensor_mean(matrix0, n0, matrix1, n1, F).samples for n1 in subseq1]
        for n0 in subseq0
    ]
    rows = []
    for x0, x1 in points:
        diagnostic = classify_wlp(F, (x0, x1), depths)
        value = F.samples[x0, x1]
        errors = [[abs(float(mean[x0, x1]) - value) for mean in line] for line in means]
        steps = min(len(subseq0), len(subseq1))
        tails = [
            max(max(line[m:]) for line in errors[m:]) for m in range(steps)
        ]
        rows.append(
            ConvergenceRow(
                point=(x0, x1),
                verdict=diagnostic.verdict,
                errors=errors,
                diagonal=[errors[m][m] for m in range(steps)],
                tail_sups=tails,
                converging=tails[-1] <= tails[0] / 2,
            )
        )
        logger.info(
            "Point (%d, %d) %s: tail sup %.3g -> %.3g",
            x0,
            x1,
            diagnostic.verdict,
            tails[0],
            tails[-1],
        )
    return ConvergenceReport(
        families=[matrix0.name, matrix1.name],
        indices0=list(subseq0),
        indices1=list(subseq1),
        t0_values0=[matrix0.entry(0, n) for n in subseq0],
        t0_values1=[matrix1.entry(0, n) for n in subseq1],
        points=rows,
    )


def _point(F, x0, x1):
    return _PointFunctionals(F, x0, x1)


def _shifted_offsets(x, n, spec):
    """Return the depth-n offsets of x + 2^-k-1 for k = 0..n."""
    shift = spec.resolution - n
    return [dyadic_shift(x, k, spec) >> shift for k in range(n + 1)]


def _decays(values, decay):
    return values[-1] <= values[0] / decay


def _bounded(values, growth):
    first, last = values[0], values[-1]
    if first == 0.0:
        return last == 0.0
    return last <= growth * first
