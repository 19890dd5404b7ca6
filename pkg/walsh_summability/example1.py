"""Implements the exact divergence example for Fejer means at a Lebesgue point.

The function is f = sum_k f_k / 2^k with

    f_k = sum over a in (n_{k-1}, n_k] of 2^(n_k-a) on [2^-a, 2^-a + 2^-n_k)

for a sequence n_1 < n_2 < ... with n_k > 3 n_{k-1} and n_k > 4^k. All
arithmetic is exact; the Fejer kernel K_{2^m} is integrated through its
m+1 dyadic plateaus and never sampled.
"""

import dataclasses
import logging
import operator
from fractions import Fraction

from walsh_summability.dyadic import DyadicInterval, DyadicRational
from walsh_summability.errors import IdentityCheckError
from walsh_summability.stepfunction import SparseStepFunction
from walsh_summability.walsh import fejer_plateaus

logger = logging.getLogger(__name__)

DEFAULT_NSEQ = (5, 17, 65)


class NSeq:
    """Increasing sequence n_1 < n_2 < ... < n_m of positive integers.

    Args:
        values (Iterable[int]): Sequence values.

    Raises:
        ValueError: Empty, nonpositive or not increasing.
    """

    def __init__(self, values):
        values = tuple(operator.index(v) for v in values)
        if not values:
            raise ValueError("Empty sequence")
        previous = 0
        for value in values:
            if value <= previous:
                raise ValueError(
                    "Sequence must be positive and increasing: %r" % (values,)
                )
            previous = value
        self._values = values

    @classmethod
    def parse(cls, text):
        """Parse a comma separated list such as '5,17,65'."""
        try:
            return cls(int(field) for field in text.split(",") if field.strip())
        except ValueError:
            raise ValueError("Unable to parse sequence: %s" % text) from None

    @property
    def values(self):
        """Tuple of values."""
        return self._values

    def previous(self, k):
        """Return n_{k-1} for 1-based `k`, with n_0 = 0."""
        return self._values[k - 2] if k > 1 else 0

    def __getitem__(self, k):
        """Return n_k for 1-based `k`."""
        if not 1 <= k <= len(self._values):
            raise IndexError("k=%d outside 1..%d" % (k, len(self._values)))
        return self._values[k - 1]

    def __len__(self):
        return len(self._values)

    def __iter__(self):
        return iter(self._values)

    def __repr__(self):
        return "NSeq(%r)" % (self._values,)


@dataclasses.dataclass(frozen=True)
class NSeqVerdict:
    """Result of checking n_k > 3 n_{k-1} ('n1') and n_k > 4^k ('n2')."""

    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def validate_nseq(seq):
    """Check both growth conditions for every k, with n_0 = 0.

    Returns:
        NSeqVerdict: Violations read like 'n1 at k=2'.
    """
    seq = _as_nseq(seq)
    violations = []
    for k in range(1, len(seq) + 1):
        if not seq[k] > 3 * seq.previous(k):
            violations.append("n1 at k=%d" % k)
        if not seq[k] > 4**k:
            violations.append("n2 at k=%d" % k)
    return NSeqVerdict(ok=not violations, violations=violations)


def example1_component(seq, k):
    """Return the pieces of f_k / 2^k.

    Returns:
        list: Pairs (DyadicInterval, DyadicRational).
    """
    seq = _as_nseq(seq)
    top = seq[k]
    return [
        (DyadicInterval(top, 1 << (top - a)), DyadicRational(1 << (top - a), k))
        for a in range(seq.previous(k) + 1, top + 1)
    ]


def build_example1(seq):
    """Return the truncated function sum_k f_k / 2^k as a SparseStepFunction.

    Raises:
        ValueError: `seq` fails validation.
    """
    seq = _as_nseq(seq)
    verdict = validate_nseq(seq)
    if not verdict:
        raise ValueError(
            "Invalid sequence %r: %s" % (seq.values, ", ".join(verdict.violations))
        )
    pieces = []
    for k in range(1, len(seq) + 1):
        pieces.extend(example1_component(seq, k))
    return SparseStepFunction(pieces)


def component_integral(seq, k):
    """Return the exact integral of f_k, which is below 2^-n_{k-1}."""
    seq = _as_nseq(seq)
    return sum(
        (Fraction(1, 1 << a) for a in range(seq.previous(k) + 1, seq[k] + 1)),
        Fraction(0),
    )


def truncation_tail_bound(seq):
    """Return a bound on the integral of the dropped terms f_s / 2^s, s > m.

    Each dropped f_s integrates to less than 2^-n_m, so the tail is below
    2^-(n_m + m).
    """
    seq = _as_nseq(seq)
    return Fraction(1, 1 << (seq[len(seq)] + len(seq)))


def exact_fejer_at_zero(f, m):
    """Return the Fejer mean sigma_{2^m}(f, 0) as an exact Fraction.

    Args:
        f (SparseStepFunction): Function.
        m (int): Exponent; no grid is involved.

    Returns:
        Fraction: Integral of f times K_{2^m}.
    """
    return sum(
        (value * f.integral_over(interval) for interval, value in fejer_plateaus(m)),
        Fraction(0),
    )


def exact_avg_at_zero(f, depth):
    """Return 2^depth times the integral over [0, 2^-depth) of |f - f(0)|.

    Returns:
        Fraction: Exact average.
    """
    window = DyadicInterval(depth, 0)
    base = f.value_at(Fraction(0)).to_fraction()
    covered = f.covered_length(window)
    total = f.integral_over(window, lambda value: abs(value - base))
    total += abs(base) * (window.length - covered)
    return total / window.length


@dataclasses.dataclass(frozen=True)
class DivergenceRow:
    """One row of the divergence table."""

    k: int
    n_k: int
    sigma: DyadicRational
    nominal_bound: Fraction
    proven_bound: Fraction

    def as_dict(self):
        return {
            "k": self.k,
            "n_k": self.n_k,
            "sigma_exact": self.sigma.as_dict(),
            "nominal_bound": _fraction_dict(self.nominal_bound),
            "proven_bound": _fraction_dict(self.proven_bound),
            "ratio": float(self.sigma.to_fraction() / self.proven_bound),
            "meets_nominal_bound": self.sigma.to_fraction() >= self.nominal_bound,
        }


@dataclasses.dataclass(frozen=True)
class DivergenceReport:
    """Exact Fejer means at 0 and the Lebesgue average sweep."""

    nseq: tuple
    rows: list
    avg_sweep: list
    fitted_constant: Fraction
    tail_bound: Fraction

    def as_dict(self):
        return {
            "nseq": list(self.nseq),
            "rows": [row.as_dict() for row in self.rows],
            "avg_at_zero": [
                {"depth": depth, "k": k, "value": _fraction_dict(value)}
                for depth, k, value in self.avg_sweep
            ],
            "fitted_constant": _fraction_dict(self.fitted_constant),
            "tail_bound": _fraction_dict(self.tail_bound),
        }


def divergence_report(seq):
    """Tabulate sigma_{2^n_k}(f, 0) against the lower bounds.

    Each plateau of K_{2^n_k} over a piece of f_k contributes exactly 1/4
    times 2^-k, so the table checks sigma >= (n_k - n_{k-1}) / 2^(k+2). The
    column (n_k - n_{k-1}) / 2^(k+1) is reported alongside.

    The average sweep covers every depth in (n_{k-1}, n_k] and fits the
    smallest C with average <= C / 2^k.

    Raises:
        ValueError: Invalid sequence.
        IdentityCheckError: An exact value falls below the proven bound.
    """
    seq = _as_nseq(seq)
    f = build_example1(seq)
    rows = []
    for k in range(1, len(seq) + 1):
        gap = seq[k] - seq.previous(k)
        sigma = exact_fejer_at_zero(f, seq[k])
        row = DivergenceRow(
            k=k,
            n_k=seq[k],
            sigma=DyadicRational.from_fraction(sigma),
            nominal_bound=Fraction(gap, 1 << (k + 1)),
            proven_bound=Fraction(gap, 1 << (k + 2)),
        )
        if sigma < row.proven_bound:
            raise IdentityCheckError(
                "sigma at k=%d is %s, below bound %s" % (k, sigma, row.proven_bound)
            )
        logger.info("k=%d n_k=%d: sigma=%.6g", k, seq[k], float(sigma))
        rows.append(row)
    sweep = []
    constant = Fraction(0)
    for k in range(1, len(seq) + 1):
        for depth in range(seq.previous(k) + 1, seq[k] + 1):
            value = exact_avg_at_zero(f, depth)
            sweep.append((depth, k, value))
            constant = max(constant, value * (1 << k))
    logger.info("Lebesgue average at 0 fits C=%.6g", float(constant))
    return DivergenceReport(
        nseq=seq.values,
        rows=rows,
        avg_sweep=sweep,
        fitted_constant=constant,
        tail_bound=truncation_tail_bound(seq),
    )


def _fraction_dict(value):
    return {
        "numerator": value.numerator,
        "denominator": value.denominator,
        "decimal": repr(float(value)),
    }


def _as_nseq(seq):
    if isinstance(seq, NSeq):
        return seq
    return NSeq(seq)
