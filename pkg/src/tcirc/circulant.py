"""Block-circulant operators and the tensor-tensor product.

Two families live here.  The materialized matrices (``bcirc``, ``circ``,
``bdiag`` and friends) exist for oracle-scale verification and are
guarded by an element budget; production code never builds them.  The
implicit fast path (``t_product``) works slice-wise in the Fourier
domain.

Index conventions (0-based): ``bcirc`` block (r, c) is frontal slice
``(r - c) mod n3``; ``circ`` block (i, j) is the circulant matrix of the
mode-3 fiber at (i, j), whose (r, s) entry is ``t[i, j, (r - s) mod n3]``.
The two matricizations are the same matrix up to stride permutations of
rows and columns.
"""

import numpy as np

__all__ = [
    "ORACLE_BUDGET_DEFAULT",
    "bcirc",
    "bvec",
    "bvfold",
    "bdiag",
    "bdfold",
    "circ",
    "stride_perm_rows",
    "stride_perm_cols",
    "t_product_direct",
    "t_product",
    "tensor_transpose",
    "identity_tensor",
    "is_orthogonal",
    "is_f_diagonal",
]

# Materialized circulant matrices are refused above this many elements.
ORACLE_BUDGET_DEFAULT = 2 ** 24


def _check_budget(n1, n2, n3, budget, op):
    if budget is None:
        budget = ORACLE_BUDGET_DEFAULT
    elements = (n1 * n3) * (n2 * n3)
    if elements > budget:
        raise ValueError(
            "%s would materialize %d elements, above the oracle budget %d"
            % (op, elements, budget))


def bcirc(t, budget=None):
    """Block-circulant matricization, shape ``(n1*n3, n2*n3)``.

    Block row r, block column c holds frontal slice ``(r - c) mod n3``,
    so the first block column stacks the slices in order.
    """
    n1, n2, n3 = t.shape
    _check_budget(n1, n2, n3, budget, "bcirc")
    out = np.empty((n1 * n3, n2 * n3), dtype=t.dtype)
    for r in range(n3):
        for c in range(n3):
            k = (r - c) % n3
            out[r * n1:(r + 1) * n1, c * n2:(c + 1) * n2] = t[:, :, k]
    return out


def bvec(t):
    """Stack frontal slices vertically: shape ``(n1*n3, n2)``."""
    n1, n2, n3 = t.shape
    return np.moveaxis(t, 2, 0).reshape(n1 * n3, n2)


def bvfold(m, dims):
    """Inverse of :func:`bvec` for a tensor of shape `dims`."""
    n1, n2, n3 = dims
    m = np.asarray(m)
    if m.shape != (n1 * n3, n2):
        raise ValueError("bvec shape %r does not match dims %r"
                         % (m.shape, tuple(dims)))
    return np.moveaxis(m.reshape(n3, n1, n2), 0, 2)


def bdiag(t):
    """Block-diagonal stacking of frontal slices: ``(n1*n3, n2*n3)``."""
    n1, n2, n3 = t.shape
    out = np.zeros((n1 * n3, n2 * n3), dtype=t.dtype)
    for k in range(n3):
        out[k * n1:(k + 1) * n1, k * n2:(k + 1) * n2] = t[:, :, k]
    return out


def bdfold(m, dims):
    """Inverse of :func:`bdiag` for a tensor of shape `dims`."""
    n1, n2, n3 = dims
    m = np.asarray(m)
    if m.shape != (n1 * n3, n2 * n3):
        raise ValueError("bdiag shape %r does not match dims %r"
                         % (m.shape, tuple(dims)))
    out = np.empty((n1, n2, n3), dtype=m.dtype)
    for k in range(n3):
        out[:, :, k] = m[k * n1:(k + 1) * n1, k * n2:(k + 1) * n2]
    return out


def circ(t, budget=None):
    """Circulant-block matricization, shape ``(n1*n3, n2*n3)``.

    Block (i, j) is the n3 x n3 circulant generated by the mode-3 fiber
    ``t[i, j, :]`` (first column = the fiber).
    """
    n1, n2, n3 = t.shape
    _check_budget(n1, n2, n3, budget, "circ")
    # circulant of a fiber v: entry (r, s) = v[(r - s) mod n3]
    r = np.arange(n3)
    idx = (r[:, None] - r[None, :]) % n3
    blocks = t[:, :, idx]                       # (n1, n2, n3, n3)
    return blocks.transpose(0, 2, 1, 3).reshape(n1 * n3, n2 * n3)


def stride_perm_rows(n1, n3):
    """Row index map p with ``circ_rows[q] = bcirc_rows[p[q]]``.

    circ orders rows as (i, r) with r fastest; bcirc as (r, i) with i
    fastest.  Returned as an index array so permuting is ``M[p]``.
    """
    i = np.arange(n1 * n3) // n3
    r = np.arange(n1 * n3) % n3
    return r * n1 + i


def stride_perm_cols(n2, n3):
    """Column index map q with ``circ_cols = bcirc_cols[q]``."""
    return stride_perm_rows(n2, n3)


def t_product_direct(x, y, budget=None):
    """Tensor-tensor product by materializing the block-circulant matrix:
    ``bvfold(bcirc(x) @ bvec(y))``.  Oracle path; budget-guarded.
    """
    n1, n2x, n3 = x.shape
    n2y, n4, n3y = y.shape
    if n2x != n2y or n3 != n3y:
        raise ValueError("t-product dims mismatch: %r vs %r"
                         % (x.shape, y.shape))
    _check_budget(n1, n2x, n3, budget, "t_product_direct")
    return bvfold(bcirc(x, budget=budget) @ bvec(y), (n1, n4, n3))


def t_product(x, y):
    """Tensor-tensor product via slice-wise products in the Fourier
    domain (the fast path, equal to :func:`t_product_direct` up to
    roundoff).
    """
    n1, n2x, n3 = x.shape
    n2y, n4, n3y = y.shape
    if n2x != n2y or n3 != n3y:
        raise ValueError("t-product dims mismatch: %r vs %r"
                         % (x.shape, y.shape))
    xf = np.fft.fft(x, axis=2)
    yf = np.fft.fft(y, axis=2)
    # einsum contracts the shared mode per frontal slice
    mf = np.einsum("ijk,jlk->ilk", xf, yf)
    return np.fft.ifft(mf, axis=2).real


def tensor_transpose(t):
    """Transpose each frontal slice and reverse the order of slices
    2..n3 (slice 1 stays first).  An involution.
    """
    tt = np.transpose(t, (1, 0, 2))
    out = np.empty_like(tt)
    out[:, :, 0] = tt[:, :, 0]
    out[:, :, 1:] = tt[:, :, :0:-1]
    return out


def identity_tensor(n, n3, dtype=np.float64):
    """Identity for the t-product: first frontal slice is I_n, rest zero."""
    out = np.zeros((n, n, n3), dtype=dtype)
    out[:, :, 0] = np.eye(n, dtype=dtype)
    return out


def is_orthogonal(q, tol=1e-8):
    """True when ``q^T * q`` and ``q * q^T`` both equal the identity
    tensor within `tol` in Frobenius norm.
    """
    n1, n2, n3 = q.shape
    if n1 != n2:
        return False
    qt = tensor_transpose(q)
    ident = identity_tensor(n1, n3)
    left = np.linalg.norm((t_product(qt, q) - ident).ravel())
    right = np.linalg.norm((t_product(q, qt) - ident).ravel())
    return bool(left <= tol and right <= tol)


def is_f_diagonal(t, tol=0.0):
    """True when every frontal slice is diagonal (off-diagonal entries
    bounded by `tol`; default exact).
    """
    n1, n2, _ = t.shape
    off = np.abs(t) * (1.0 - np.eye(n1, n2))[:, :, None]
    return bool(off.max(initial=0.0) <= tol)
