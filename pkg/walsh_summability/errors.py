"""Implements the exception classes raised by walsh_summability."""


class GuardRailError(ValueError):
    """Requested resolution exceeds a configured cap."""


class IdentityCheckError(AssertionError):
    """A checked identity or inequality failed numerically."""


class RowValidationError(ValueError):
    """A matrix row violates one of the conditions (a), (b) or (c).

    Args:
        name (str): Matrix name.
        n (int): Row index.
        condition (str): 'a', 'b', 'c' or 'shape'.
        index (int): Offending entry, or -1 for the whole row.
        detail (str): Human readable description.
    """

    def __init__(self, name, n, condition, index, detail):
        super().__init__(
            "%s: row %d INVALID/%s at k=%d: %s" % (name, n, condition, index, detail)
        )
        self.name = name
        self.n = n
        self.condition = condition
        self.index = index


def raise_row_error(name, n, condition, index, detail):
    """Raise specially formatted RowValidationError exception.

    Args:
        name (str): Matrix name.
        n (int): Row index.
        condition (str): Failed condition.
        index (int): Offending entry. Use -1 to indicate the entire row.
        detail (str): Description of the failure.

    Raises:
        RowValidationError: Always.
    """
    raise RowValidationError(name, n, condition, index, detail)
