"""Estimator-style front end for tensor completion.

Wraps the ADMM solver in the usual fit/transform shape so it can sit
in pipelines next to other imputers: missing entries are NaN (or an
explicit boolean mask passed to ``fit``), ``fit`` solves, and the
completed tensor is both an attribute and the ``transform`` output.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .solver import AdmmConfig, complete
from .validation import as_tensor3

__all__ = ["TensorCompleter"]


class TensorCompleter(TransformerMixin, BaseEstimator):
    """Impute missing entries of a 3-way tensor by low-rank completion.

    Parameters
    ----------
    regularizer : {"ttnn", "gtnn", "mnn3"}, default="ttnn"
        Low-rank surrogate norm to minimize.
    rho0 : float, default=1e-3
        Initial ADMM penalty weight.
    eta : float, default=1.1
        Penalty growth factor per iteration, > 1.
    tol : float, default=1e-4
        Stopping threshold on the relative feasibility residual.
    max_iters : int, default=200
        Iteration cap.
    rho_cap : float, default=1e10
        Penalty ceiling.
    prox_scaling : {"parseval", "paper"}, default="parseval"
        Threshold scaling of the spectral shrinkage step.
    half_spectrum : bool, default=True
        Use the conjugate-symmetry shortcut in the shrinkage step.
    seed : int, default=0
        Recorded for reproducibility of anything stochastic upstream;
        the solve itself is deterministic.
    track_objective : bool, default=False
        Record the regularizer value per iteration in the report.

    Attributes
    ----------
    completed_ : ndarray of shape (n1, n2, n3)
        The completed tensor from the last ``fit``.
    report_ : SolveReport
        Iteration telemetry from the last ``fit``.
    mask_ : ndarray of bool, shape (n1, n2, n3)
        The observation mask that was used.

    Examples
    --------
    >>> import numpy as np
    >>> from tcirc import TensorCompleter
    >>> x = np.ones((4, 4, 3))
    >>> x[0, 0, 0] = np.nan
    >>> filled = TensorCompleter().fit_transform(x)
    >>> bool(np.isfinite(filled).all())
    True
    """

    def __init__(self, regularizer="ttnn", rho0=1e-3, eta=1.1, tol=1e-4,
                 max_iters=200, rho_cap=1e10, prox_scaling="parseval",
                 half_spectrum=True, seed=0, track_objective=False):
        self.regularizer = regularizer
        self.rho0 = rho0
        self.eta = eta
        self.tol = tol
        self.max_iters = max_iters
        self.rho_cap = rho_cap
        self.prox_scaling = prox_scaling
        self.half_spectrum = half_spectrum
        self.seed = seed
        self.track_objective = track_objective

    def _config(self):
        # parameter validation happens here (at fit time, not __init__)
        return AdmmConfig(
            regularizer=self.regularizer, rho0=self.rho0, eta=self.eta,
            tol=self.tol, max_iters=self.max_iters, rho_cap=self.rho_cap,
            prox_scaling=self.prox_scaling, half_spectrum=self.half_spectrum,
            seed=self.seed, track_objective=self.track_objective)

    def _solve(self, X, mask):
        X = as_tensor3(X, "X", allow_nan=True)
        if mask is None:
            mask = np.isfinite(X)
        return complete(X, mask, self._config()) + (mask,)

    def fit(self, X, y=None, mask=None):
        """Solve the completion problem for ``X``.

        Parameters
        ----------
        X : ndarray of shape (n1, n2, n3)
            Partially observed tensor.  Entries that are NaN are
            treated as missing unless an explicit ``mask`` says
            otherwise.
        y : ignored
            Present for pipeline compatibility.
        mask : ndarray of bool, shape (n1, n2, n3), optional
            True marks an observed entry.  Defaults to the finite
            entries of ``X``.

        Returns
        -------
        self
        """
        self.completed_, self.report_, self.mask_ = self._solve(X, mask)
        return self

    def transform(self, X):
        """Complete ``X`` (NaN entries missing) with the fitted parameters.

        Runs a fresh solve on ``X``; use :meth:`fit_transform` to get
        the tensor already solved during ``fit`` without recomputing.
        """
        check_is_fitted(self)
        completed, _, _ = self._solve(X, None)
        return completed

    def fit_transform(self, X, y=None, **fit_params):
        """Fit on ``X`` and return the completed tensor from that solve."""
        return self.fit(X, y, **fit_params).completed_
