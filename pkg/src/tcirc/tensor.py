"""Dense 3-way tensor primitives: slices, unfoldings, twist/squeeze,
norms, and the observation projector.

A tensor of shape ``(n1, n2, n3)`` is stored entry-major in the order
``i`` fastest, then ``j``, then ``k`` slowest (column-major frontal
slices stacked along mode 3); ``flatten_entries``/serialization rely on
that order as a library contract.  All operations return new arrays;
inputs are never mutated.
"""

import numpy as np

from .validation import as_mask3, check_same_dims

__all__ = [
    "frontal_slice",
    "mode_unfold",
    "mode_fold",
    "twist",
    "squeeze",
    "fro_norm",
    "l1_norm",
    "project",
    "flatten_entries",
    "unflatten_entries",
]


def frontal_slice(t, k):
    """Return the k-th frontal slice ``t[:, :, k]`` (a writable view)."""
    n3 = t.shape[2]
    if not -n3 <= k < n3:
        raise IndexError("frontal slice index %d out of range for n3=%d"
                         % (k, n3))
    return t[:, :, k]


def mode_unfold(t, mode):
    """Mode-`mode` unfolding of a 3-way tensor (modes are 1, 2, or 3).

    The result has shape ``(n_mode, prod of the other dims)``; columns
    are mode fibers, ordered with the lower-numbered remaining mode
    varying fastest.  For mode 3 this means column ``c`` is the fiber at
    ``i = c % n1, j = c // n1``, so each row is a frontal slice
    vectorized column-major.
    """
    if mode not in (1, 2, 3):
        raise ValueError("mode must be 1, 2, or 3, got %r" % (mode,))
    ax = mode - 1
    return np.moveaxis(t, ax, 0).reshape(t.shape[ax], -1, order="F")


def mode_fold(m, mode, dims):
    """Inverse of :func:`mode_unfold`: rebuild the tensor of shape `dims`."""
    if mode not in (1, 2, 3):
        raise ValueError("mode must be 1, 2, or 3, got %r" % (mode,))
    ax = mode - 1
    rest = tuple(d for i, d in enumerate(dims) if i != ax)
    m = np.asarray(m)
    if m.shape != (dims[ax], int(np.prod(rest))):
        raise ValueError("unfolding shape %r does not match dims %r"
                         % (m.shape, tuple(dims)))
    t = m.reshape((dims[ax],) + rest, order="F")
    return np.moveaxis(t, 0, ax)


def twist(t):
    """Permute ``(n1, n2, n3) -> (n1, n3, n2)`` so that lateral slices of
    the result are the frontal slices of the input:
    ``twist(t)[i, k, j] == t[i, j, k]``.

    Exact (a pure index permutation, no arithmetic).
    """
    return np.ascontiguousarray(np.swapaxes(t, 1, 2))


def squeeze(t):
    """Inverse of :func:`twist` (the same axis swap applied once more)."""
    return np.ascontiguousarray(np.swapaxes(t, 1, 2))


def fro_norm(t):
    """Frobenius norm ``sqrt(sum of squared entries)``."""
    return float(np.linalg.norm(np.asarray(t).ravel()))


def l1_norm(t):
    """Entrywise absolute sum."""
    return float(np.abs(t).sum())


def project(t, m):
    """Observation projector: keep entries where the mask is True, zero
    elsewhere.  ``project(t, m) + project(t, ~m) == t`` exactly.
    """
    t = np.asarray(t)
    m = as_mask3(m)
    check_same_dims(t, m)
    return np.where(m, t, 0.0)


def flatten_entries(t):
    """Entries of `t` in the documented linear order (i fastest, k slowest)."""
    return np.asarray(t).flatten(order="F")


def unflatten_entries(flat, dims):
    """Rebuild a tensor from :func:`flatten_entries` output."""
    flat = np.asarray(flat)
    if flat.size != int(np.prod(dims)):
        raise ValueError("expected %d entries for dims %r, got %d"
                         % (int(np.prod(dims)), tuple(dims), flat.size))
    return flat.reshape(dims, order="F")
