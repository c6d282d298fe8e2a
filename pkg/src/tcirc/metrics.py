"""Recovery-quality metrics in decibels.

Per-frame error is reported as RSE (lower is better, -inf for an exact
frame); whole-tensor quality as inverse RSE (higher is better, +inf for
exact recovery).  A uniform 10% relative error gives an inverse RSE of
exactly 20 dB.
"""

import os

import numpy as np

from .tensor import fro_norm
from .validation import as_tensor3, check_same_dims

__all__ = ["rse_per_frame", "irse", "write_metrics_csv"]


def _rel_err(err, ref):
    if ref > 0.0:
        return err / ref
    return 0.0 if err == 0.0 else np.inf


def _db(rel):
    if rel == 0.0:
        return -np.inf
    if np.isinf(rel):
        return np.inf
    return 20.0 * np.log10(rel)


def rse_per_frame(x, truth):
    """Relative squared error per frontal slice, in dB.

    ``20 * log10(||x_k - truth_k||_F / ||truth_k||_F)`` for each frame
    k.  An exactly recovered frame gives -inf; a nonzero error against
    an all-zero frame gives +inf.

    Returns
    -------
    ndarray, shape (n3,)
    """
    x = as_tensor3(x, "x")
    truth = as_tensor3(truth, "truth")
    check_same_dims(x, truth, "x", "truth")
    out = np.empty(x.shape[2])
    for k in range(x.shape[2]):
        err = fro_norm(x[:, :, k] - truth[:, :, k])
        out[k] = _db(_rel_err(err, fro_norm(truth[:, :, k])))
    return out


def irse(x, truth):
    """Inverse RSE over the whole tensor, in dB (higher is better):
    ``-20 * log10(||x - truth||_F / ||truth||_F)``.
    """
    x = as_tensor3(x, "x")
    truth = as_tensor3(truth, "truth")
    check_same_dims(x, truth, "x", "truth")
    return -_db(_rel_err(fro_norm(x - truth), fro_norm(truth)))


def write_metrics_csv(path_or_file, rse_db, irse_db):
    """Write ``frame,rse_db`` rows (frames count from 0) followed by a
    footer row ``irse,<value>``.  Infinities render as ``inf``/``-inf``.
    """
    if isinstance(path_or_file, (str, os.PathLike)):
        with open(path_or_file, "w") as fh:
            _write(fh, rse_db, irse_db)
    else:
        _write(path_or_file, rse_db, irse_db)


def _write(fh, rse_db, irse_db):
    fh.write("frame,rse_db\n")
    for k, val in enumerate(rse_db):
        fh.write("%d,%s\n" % (k, repr(float(val))))
    fh.write("irse,%s\n" % repr(float(irse_db)))
