"""Input validation helpers shared by every public entry point.

Tensors are plain ``numpy.ndarray`` objects: a dense 3-way tensor is a
float64 array of shape ``(n1, n2, n3)`` whose frontal slices are
``t[:, :, k]``, and an observation mask is a boolean array of the same
shape (``True`` = observed).  Validation happens here, at module
boundaries, never inside inner loops.
"""

import numpy as np

__all__ = ["as_tensor3", "as_mask3", "check_same_dims"]


def as_tensor3(t, name="tensor", allow_nan=False):
    """Coerce `t` to a float64 3-way array and validate it.

    Parameters
    ----------
    t : array_like
        Anything ``np.asarray`` accepts, expected shape ``(n1, n2, n3)``.
    name : str
        Label used in error messages.
    allow_nan : bool
        When True, NaN entries are allowed (used for the NaN-as-missing
        estimator convention).  Inf is never allowed.

    Returns
    -------
    ndarray of float64, shape (n1, n2, n3)
    """
    t = np.asarray(t, dtype=np.float64)
    if t.ndim != 3:
        raise ValueError(
            "%s must be a 3-way array, got ndim=%d" % (name, t.ndim))
    if min(t.shape) < 1:
        raise ValueError("%s has an empty dimension: %r" % (name, t.shape))
    if allow_nan:
        if np.isinf(t).any():
            raise ValueError("%s contains infinite entries" % name)
    elif not np.isfinite(t).all():
        raise ValueError("%s contains non-finite entries" % name)
    return t


def as_mask3(m, name="mask"):
    """Coerce `m` to a boolean 3-way array.

    Accepts boolean arrays or 0/1 numeric arrays; anything else is an
    error so silent truthiness bugs cannot slip through.
    """
    m = np.asarray(m)
    if m.ndim != 3:
        raise ValueError(
            "%s must be a 3-way array, got ndim=%d" % (name, m.ndim))
    if m.dtype != np.bool_:
        vals = np.unique(m)
        if not np.isin(vals, (0, 1)).all():
            raise ValueError("%s entries must be boolean or 0/1" % name)
        m = m.astype(bool)
    return m


def check_same_dims(a, b, name_a="tensor", name_b="mask"):
    """Raise if two arrays do not share the same shape."""
    if a.shape != b.shape:
        raise ValueError(
            "%s dims %r do not match %s dims %r"
            % (name_a, a.shape, name_b, b.shape))
