"""Circulant tensor algebra, tensor SVD, and low-rank tensor completion.

Third-order tensors are plain float64 ``numpy`` arrays of shape
``(n1, n2, n3)``.  The algebra treats mode-3 fibers as elements of a
circular-convolution ring: products, transposes, orthogonality, and the
tensor SVD all reduce to per-slice matrix operations in the mode-3
Fourier domain.  On top sit three low-rank surrogate norms and an ADMM
solver that completes a tensor from a subset of entries — the typical
use being video inpainting with frames as frontal slices — plus a
scikit-learn style :class:`TensorCompleter` and a command line
(``tcirc complete / synth / oracle / metrics``).
"""

from .circulant import (
    bcirc,
    bdfold,
    bdiag,
    bvec,
    bvfold,
    circ,
    identity_tensor,
    is_f_diagonal,
    is_orthogonal,
    t_product,
    t_product_direct,
    tensor_transpose,
)
from .estimator import TensorCompleter
from .io import (
    TensorFileError,
    dump_frames,
    load_frames,
    read_mask,
    read_tensor,
    write_mask,
    write_tensor,
)
from .metrics import irse, rse_per_frame
from .norms import gtnn, mnn_mode3, svt, tsvc, tsvc_twisted, ttnn
from .oracle import run_checks
from .sampling import (
    MaskSpec,
    bernoulli_mask,
    occlusion_mask,
    panning_tensor,
    parse_mask_spec,
    synth_low_multirank,
)
from .solver import AdmmConfig, SolveReport, complete, y_update
from .tensor import (
    flatten_entries,
    fro_norm,
    frontal_slice,
    mode_fold,
    mode_unfold,
    project,
    squeeze,
    twist,
    unflatten_entries,
)
from .tsvd import TSvdFactors, fft_mode3, ifft_mode3, multi_rank, tsvd, tsvd_half

__version__ = "0.1.0"

__all__ = [
    "AdmmConfig",
    "MaskSpec",
    "SolveReport",
    "TSvdFactors",
    "TensorCompleter",
    "TensorFileError",
    "bcirc",
    "bdfold",
    "bdiag",
    "bernoulli_mask",
    "bvec",
    "bvfold",
    "circ",
    "complete",
    "dump_frames",
    "fft_mode3",
    "flatten_entries",
    "fro_norm",
    "frontal_slice",
    "gtnn",
    "identity_tensor",
    "ifft_mode3",
    "irse",
    "is_f_diagonal",
    "is_orthogonal",
    "load_frames",
    "mnn_mode3",
    "mode_fold",
    "mode_unfold",
    "multi_rank",
    "occlusion_mask",
    "panning_tensor",
    "parse_mask_spec",
    "project",
    "read_mask",
    "read_tensor",
    "rse_per_frame",
    "run_checks",
    "squeeze",
    "svt",
    "synth_low_multirank",
    "t_product",
    "t_product_direct",
    "tensor_transpose",
    "tsvc",
    "tsvc_twisted",
    "tsvd",
    "tsvd_half",
    "ttnn",
    "twist",
    "unflatten_entries",
    "write_mask",
    "write_tensor",
    "y_update",
]
