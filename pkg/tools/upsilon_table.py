"""
Generate upsilon(n, T) table for README.
"""

from walsh_summability import get_matrix
from walsh_summability.summability import upsilon

FAMILIES = ["identity", "fejer", "cesaro:0.5", "nlog"]

INDICES = [1, 2, 3, 4, 5, 10, 21, 42, 85, 170, 341, 1024]


def _column(value):
    return "%.4f" % value


def main():
    print("n|" + "|".join(FAMILIES))
    print("-|" + "|".join("-" * len(name) for name in FAMILIES))

    matrices = [get_matrix(name) for name in FAMILIES]
    for n in INDICES:
        cols = [_column(upsilon(matrix, n)) for matrix in matrices]
        print("%d | %s" % (n, " | ".join(cols)))


if __name__ == "__main__":
    main()
