"""Mode-3 Fourier transforms, the tensor SVD, and multi-rank.

The transform convention is fixed once for the whole library:
unnormalized forward DFT along mode 3, ``1/n3`` on the inverse.  Under
this convention the sum of all Fourier-slice singular values equals the
nuclear norm of the block-circulant matricization with no extra
constant, which is what the norm modules rely on.
"""

from collections import namedtuple

import numpy as np
from numpy.linalg import svd

__all__ = [
    "TSvdFactors",
    "fft_mode3",
    "ifft_mode3",
    "tsvd",
    "tsvd_half",
    "multi_rank",
]


TSvdFactors = namedtuple("TSvdFactors", ["u", "s", "v"])
TSvdFactors.__doc__ = """Orthogonal-diagonal-orthogonal factor triple.

``u`` is (n1, n1, n3), ``s`` is (n1, n2, n3) f-diagonal with
nonincreasing nonnegative Fourier-domain diagonals, ``v`` is
(n2, n2, n3); the input is ``u * s * transpose(v)`` under the t-product.
"""


def fft_mode3(t):
    """Unnormalized forward DFT along every mode-3 fiber.

    For real input the result has conjugate symmetry: slice k and slice
    n3-k are elementwise conjugates for k = 1..n3-1.
    """
    return np.fft.fft(t, axis=2)


def ifft_mode3(f):
    """Inverse DFT along mode 3 (applies the 1/n3 scaling) returning the
    real part.  For symmetry-respecting stacks the discarded imaginary
    residue is at roundoff level.
    """
    return np.fft.ifft(f, axis=2).real


def _slice_svd(a):
    # single indirection point so tests can count per-slice decompositions
    return svd(a, full_matrices=True)


def _embed_diag(sig, n1, n2):
    out = np.zeros((n1, n2), dtype=sig.dtype)
    out[:len(sig), :len(sig)][np.diag_indices(len(sig))] = sig
    return out


def tsvd(t):
    """Tensor SVD: per-slice matrix SVDs in the Fourier domain, inverse
    transformed back.  Returns :class:`TSvdFactors`.
    """
    n1, n2, n3 = t.shape
    tf = fft_mode3(t)
    uf = np.empty((n1, n1, n3), dtype=complex)
    sf = np.zeros((n1, n2, n3), dtype=complex)
    vf = np.empty((n2, n2, n3), dtype=complex)
    for k in range(n3):
        try:
            u, sig, vh = _slice_svd(tf[:, :, k])
        except np.linalg.LinAlgError as e:
            raise np.linalg.LinAlgError(
                "SVD failed on Fourier slice %d: %s" % (k, e)) from e
        uf[:, :, k] = u
        sf[:, :, k] = _embed_diag(sig, n1, n2)
        vf[:, :, k] = vh.conj().T
    return TSvdFactors(ifft_mode3(uf), ifft_mode3(sf), ifft_mode3(vf))


def tsvd_half(t):
    """Tensor SVD of a real tensor decomposing only the first
    ``n3 // 2 + 1`` Fourier slices; the rest are filled by conjugation.

    Same contract as :func:`tsvd` (identical singular values, same
    reconstruction up to roundoff) at roughly half the SVD cost.
    """
    n1, n2, n3 = t.shape
    tf = fft_mode3(t)
    uf = np.empty((n1, n1, n3), dtype=complex)
    sf = np.zeros((n1, n2, n3), dtype=complex)
    vf = np.empty((n2, n2, n3), dtype=complex)
    half = n3 // 2 + 1
    for k in range(half):
        try:
            u, sig, vh = _slice_svd(tf[:, :, k])
        except np.linalg.LinAlgError as e:
            raise np.linalg.LinAlgError(
                "SVD failed on Fourier slice %d: %s" % (k, e)) from e
        uf[:, :, k] = u
        sf[:, :, k] = _embed_diag(sig, n1, n2)
        vf[:, :, k] = vh.conj().T
    for k in range(half, n3):
        uf[:, :, k] = np.conj(uf[:, :, n3 - k])
        sf[:, :, k] = sf[:, :, n3 - k]
        vf[:, :, k] = np.conj(vf[:, :, n3 - k])
    return TSvdFactors(ifft_mode3(uf), ifft_mode3(sf), ifft_mode3(vf))


def multi_rank(t, tol=None):
    """Per-Fourier-slice numerical ranks as an integer vector of length n3.

    A singular value counts toward the rank when it exceeds
    ``tol * sigma_max`` with ``sigma_max`` taken over all slices.  The
    default tol is the usual ``max(n1, n2) * eps`` numerical-rank rule.
    """
    n1, n2, n3 = t.shape
    if tol is None:
        tol = max(n1, n2) * np.finfo(np.float64).eps
    tf = fft_mode3(t)
    sigmas = [svd(tf[:, :, k], compute_uv=False) for k in range(n3)]
    smax = max((s[0] if len(s) else 0.0) for s in sigmas)
    thresh = tol * smax
    return np.array([int((s > thresh).sum()) for s in sigmas])
