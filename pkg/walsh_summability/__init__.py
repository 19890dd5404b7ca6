"""Walsh-Paley summability: matrix means, kernels and maximal operators."""

__version__ = "0.3.0"

from walsh_summability.factory import get_matrix as get_matrix  # noqa: F401
