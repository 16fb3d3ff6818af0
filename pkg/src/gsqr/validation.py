"""Input validation helpers shared by the library, the estimators and the CLI."""

import numpy as np


def check_matrix(a, *, square=False, min_rows=1, min_cols=1, name="matrix"):
    """Coerce ``a`` to a 2-D float64 array and validate its shape.

    Rejects empty dimensions and non-finite entries so the numerical kernels
    never see NaN or Inf.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got ndim={a.ndim}")
    m, n = a.shape
    if m < min_rows or n < min_cols:
        raise ValueError(f"{name} must be at least {min_rows}x{min_cols}, got {m}x{n}")
    if square and m != n:
        raise ValueError(f"{name} must be square, got {m}x{n}")
    if not np.isfinite(a).all():
        raise ValueError(f"{name} contains non-finite entries")
    return a


def check_tall(a, name="matrix"):
    """Validate a matrix whose column count must not exceed its row count."""
    a = check_matrix(a, name=name)
    m, n = a.shape
    if m < n:
        raise ValueError(f"{name} must have at least as many rows as columns, got {m}x{n}")
    return a


def check_vector(x, name="vector"):
    """Coerce ``x`` to a 1-D float64 array with at least one entry."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        x = x.reshape(-1)
    if x.size < 1:
        raise ValueError(f"{name} must have at least one entry")
    if not np.isfinite(x).all():
        raise ValueError(f"{name} contains non-finite entries")
    return x


def check_count(value, minimum, name):
    """Validate an integer count such as a dimension or trial number."""
    n = int(value)
    if n != value or n < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return n
