"""Spectral norms for third-order tensors and their shrinkage operators.

Three penalties are provided:

* ``gtnn`` -- sum of singular values over all mode-3 Fourier slices,
  equal to the nuclear norm of the block-circulant matricization.
* ``ttnn`` -- ``gtnn`` of the twist tensor, i.e. the same norm applied
  after exchanging modes 2 and 3.  Low values reward shared structure
  across lateral slices, which is where inter-frame correlation of a
  video lives.
* ``mnn_mode3`` -- plain matrix nuclear norm of the mode-3 unfolding.

``tsvc`` is the tensor singular value shrinkage used as the proximal
step of ``gtnn`` (and, composed with twisting, of ``ttnn``).  Because
the Frobenius norm picks up a factor 1/n3 in the Fourier domain, the
exact minimizer of ``tau * gtnn(y) + 0.5 * ||y - z||_F^2`` shrinks each
Fourier slice by ``n3 * tau``, not ``tau``.  Both scalings are exposed:
``"parseval"`` (the exact one, default) and ``"paper"`` (threshold
applied to the Fourier slices verbatim).
"""

import numpy as np
from numpy.linalg import svd

from .tensor import mode_unfold, twist, squeeze
from .tsvd import fft_mode3, ifft_mode3

__all__ = ["gtnn", "ttnn", "mnn_mode3", "svt", "tsvc", "tsvc_twisted",
           "PROX_SCALINGS"]

PROX_SCALINGS = ("parseval", "paper")


def gtnn(t):
    """Sum of the singular values of every mode-3 Fourier slice."""
    tf = fft_mode3(t)
    return sum(svd(tf[:, :, k], compute_uv=False).sum()
               for k in range(t.shape[2]))


def ttnn(t):
    """Twist-tensor nuclear norm: ``gtnn`` after swapping modes 2 and 3."""
    return gtnn(twist(t))


def mnn_mode3(t):
    """Nuclear norm of the mode-3 unfolding."""
    return svd(mode_unfold(t, 3), compute_uv=False).sum()


def svt(m, tau):
    """Matrix singular value thresholding: shrink every singular value by
    ``tau`` and clip at zero.  Minimizes ``tau*||Y||_* + 0.5*||Y - m||_F^2``.
    """
    if tau < 0:
        raise ValueError("shrinkage threshold must be nonnegative")
    u, sig, vh = svd(m, full_matrices=False)
    shrunk = np.maximum(sig - tau, 0.0)
    return (u * shrunk) @ vh


def _effective_tau(tau, n3, scaling):
    if scaling not in PROX_SCALINGS:
        raise ValueError("unknown prox scaling %r; expected one of %s"
                         % (scaling, list(PROX_SCALINGS)))
    return n3 * tau if scaling == "parseval" else tau


def tsvc(z, tau, scaling="parseval", half_spectrum=True):
    """Tensor singular value shrinkage in the mode-3 Fourier domain.

    Applies :func:`svt` to each Fourier slice with threshold
    ``n3 * tau`` (``scaling="parseval"``, the exact proximal map of
    ``tau * gtnn``) or ``tau`` (``scaling="paper"``), then transforms
    back.  With ``half_spectrum=True`` only the first ``n3 // 2 + 1``
    slices are decomposed and the rest filled by conjugate symmetry,
    which requires real input.
    """
    if tau < 0:
        raise ValueError("shrinkage threshold must be nonnegative")
    n1, n2, n3 = z.shape
    t_eff = _effective_tau(tau, n3, scaling)
    zf = fft_mode3(z)
    yf = np.empty_like(zf)
    last = n3 // 2 + 1 if half_spectrum else n3
    for k in range(last):
        yf[:, :, k] = svt(zf[:, :, k], t_eff)
    for k in range(last, n3):
        yf[:, :, k] = np.conj(yf[:, :, n3 - k])
    return ifft_mode3(yf)


def tsvc_twisted(z, tau, scaling="parseval", half_spectrum=True):
    """Shrinkage for the twist-tensor norm: twist, shrink, squeeze back."""
    return squeeze(tsvc(twist(z), tau, scaling, half_spectrum))
