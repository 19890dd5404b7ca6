"""Implements the `get_matrix` factory function used to create matrices."""

import walsh_summability.gridio as _gridio
import walsh_summability.matrix as _matrix


def _factory(matrix, parse_arg=None, **kwds):
    def _construct(arg):
        if parse_arg is None:
            if arg:
                raise ValueError(
                    "Matrix family %s takes no parameter: %r" % (kwds["name"], arg)
                )
            return matrix(**kwds)
        if not arg:
            raise ValueError("Matrix family needs a parameter: %s" % matrix.__name__)
        return matrix(*parse_arg(arg), **kwds)

    return _construct


def _parse_alpha(arg):
    try:
        return (float(arg),)
    except ValueError:
        raise ValueError("Unable to parse Cesaro order: %s" % arg) from None


def _load_alphas(path):
    return (_gridio.load_alphas(path),)


def _load_rows(path):
    return (_gridio.load_rows(path),)


_MATRICES = {
    "identity": _factory(_matrix.IdentityMatrix, name="identity"),
    "fejer": _factory(_matrix.FejerMatrix, name="fejer"),
    "cesaro": _factory(_matrix.CesaroMatrix, _parse_alpha),
    "cesaro-seq": _factory(_matrix.CesaroSequenceMatrix, _load_alphas),
    "nlog": _factory(_matrix.NorlundLogMatrix, name="nlog"),
    "custom": _factory(_matrix.CustomMatrix, _load_rows),
}


def get_matrix(spec):
    """Return the matrix of transformation described by `spec`.

    Choose spec from:
        "identity"
        "fejer"
        "cesaro:<alpha>"        (0 < alpha <= 1)
        "cesaro-seq:<file>"     (one order per line)
        "nlog"
        "custom:<rows.csv>"     (row n holds n+1 weights)

    The family name is case-insensitive. This function constructs a new
    matrix each time; rows are cached per matrix object.

    Args:
        spec (str): Matrix description.

    Returns:
        TransformationMatrix: Matrix object.

    Raises:
        KeyError: Family not found.
        ValueError: Parameter missing or malformed.
    """
    family, _, arg = spec.partition(":")
    return _MATRICES[family.strip().lower()](arg.strip())
