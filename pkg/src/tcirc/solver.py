"""Tensor completion by ADMM with an exact-penalty split.

Recovers a third-order tensor from a subset of its entries by
minimizing a low-rank surrogate norm subject to agreement with the
observations.  The split introduces a feasibility copy Y of the
variable X and a dual W; each sweep holds the observed entries of X
fixed, shrinks Y through the proximal map of the chosen norm, then
takes a dual ascent step.  The penalty weight rho grows geometrically,
which drives ||X - Y|| to zero.
"""

import dataclasses
import io
import os

import numpy as np

from .norms import PROX_SCALINGS, gtnn, mnn_mode3, svt, tsvc, tsvc_twisted, ttnn
from .tensor import fro_norm, mode_fold, mode_unfold, project
from .validation import as_mask3, as_tensor3, check_same_dims

__all__ = ["REGULARIZERS", "AdmmConfig", "SolveReport", "y_update", "complete"]

REGULARIZERS = ("ttnn", "gtnn", "mnn3")

_NORM_OF = {"ttnn": ttnn, "gtnn": gtnn, "mnn3": mnn_mode3}

DIVERGENCE_FACTOR = 1e6


@dataclasses.dataclass
class AdmmConfig:
    """Knobs for :func:`complete`.

    Parameters
    ----------
    regularizer : str
        Low-rank surrogate to minimize: ``"ttnn"`` (twist-tensor
        nuclear norm, default), ``"gtnn"`` (the same norm without the
        mode swap) or ``"mnn3"`` (nuclear norm of the mode-3 unfolding).
    rho0 : float
        Initial penalty weight, > 0.
    eta : float
        Per-iteration growth factor for the penalty, > 1.
    tol : float
        Convergence threshold (> 0) on the relative feasibility
        residual ``||X - Y||_F / ||X||_F``.
    max_iters : int
        Iteration cap, >= 1.
    rho_cap : float
        Ceiling for the penalty weight (guards against overflow).
    prox_scaling : str
        Fourier-domain threshold scaling for the shrinkage step; see
        :func:`tcirc.norms.tsvc`.  Ignored by ``"mnn3"``.
    half_spectrum : bool
        Decompose only half of the Fourier slices in the shrinkage
        step, filling the rest by conjugate symmetry.
    seed : int
        Recorded for anything stochastic layered on top of the solver
        (mask generation, synthetic data); the solve itself is
        deterministic.
    track_objective : bool
        Record the regularizer value of Y each iteration (costs one
        extra spectral sweep per iteration; meant for small problems).
    """

    regularizer: str = "ttnn"
    rho0: float = 1e-3
    eta: float = 1.1
    tol: float = 1e-4
    max_iters: int = 200
    rho_cap: float = 1e10
    prox_scaling: str = "parseval"
    half_spectrum: bool = True
    seed: int = 0
    track_objective: bool = False

    def __post_init__(self):
        if self.regularizer not in REGULARIZERS:
            raise ValueError("unknown regularizer %r; expected one of %s"
                             % (self.regularizer, list(REGULARIZERS)))
        if self.prox_scaling not in PROX_SCALINGS:
            raise ValueError("unknown prox scaling %r; expected one of %s"
                             % (self.prox_scaling, list(PROX_SCALINGS)))
        if not self.rho0 > 0:
            raise ValueError("rho0 must be positive")
        if not self.eta > 1:
            raise ValueError("eta must be > 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.max_iters >= 1:
            raise ValueError("max_iters must be at least 1")
        if not self.rho_cap >= self.rho0:
            raise ValueError("rho_cap must be >= rho0")

    @classmethod
    def from_file(cls, path):
        """Build a config from a text file of ``key = value`` lines.

        Blank lines and lines starting with ``#`` are ignored.  Keys
        must be field names of this class; values are coerced to the
        field's type (booleans accept true/false/yes/no/1/0, any case).
        """
        with open(path) as fh:
            return cls.from_lines(fh, str(path))

    @classmethod
    def from_lines(cls, lines, source="<config>"):
        types = {f.name: (f.type if isinstance(f.type, str) else
                          f.type.__name__)
                 for f in dataclasses.fields(cls)}
        kwargs = {}
        for lineno, raw in enumerate(lines, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError("%s:%d: expected key = value, got %r"
                                 % (source, lineno, raw.strip()))
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in types:
                raise ValueError("%s:%d: unknown config key %r"
                                 % (source, lineno, key))
            kwargs[key] = _coerce(value, types[key], source, lineno)
        return cls(**kwargs)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


def _coerce(value, typename, source, lineno):
    try:
        if typename == "bool":
            low = value.lower()
            if low in ("true", "1", "yes"):
                return True
            if low in ("false", "0", "no"):
                return False
            raise ValueError("not a boolean: %r" % value)
        if typename == "int":
            return int(value)
        if typename == "float":
            return float(value)
        return value
    except ValueError as e:
        raise ValueError("%s:%d: %s" % (source, lineno, e)) from e


@dataclasses.dataclass
class SolveReport:
    """Per-iteration trace of a completion run.

    ``residual_history[i]`` and ``rho_history[i]`` belong to iteration
    i+1; ``objective_history`` (regularizer value of Y per iteration)
    is present only when the config asked for it.  The config that
    produced the run is carried along for reproducibility.
    """

    converged: bool
    iterations: int
    residual_history: np.ndarray
    rho_history: np.ndarray
    objective_history: np.ndarray = None
    config: AdmmConfig = None

    @property
    def final_rho(self):
        return float(self.rho_history[-1])

    @property
    def final_residual(self):
        return float(self.residual_history[-1])

    def summary(self):
        state = "converged" if self.converged else "stopped"
        return "%s after %d iterations, residual %.3e, rho %.3e" % (
            state, self.iterations, self.final_residual, self.final_rho)

    def to_csv(self, path_or_file):
        """Write ``iteration,residual,rho`` rows (iterations count from 1)."""
        if isinstance(path_or_file, (str, os.PathLike)):
            with open(path_or_file, "w") as fh:
                self._write(fh)
        else:
            self._write(path_or_file)

    def _write(self, fh):
        fh.write("iteration,residual,rho\n")
        for i, (res, rho) in enumerate(
                zip(self.residual_history, self.rho_history), 1):
            fh.write("%d,%s,%s\n" % (i, repr(float(res)), repr(float(rho))))

    def to_csv_string(self):
        buf = io.StringIO()
        self._write(buf)
        return buf.getvalue()


def y_update(z, rho, regularizer, prox_scaling="parseval",
             half_spectrum=True):
    """Proximal map of ``(1/rho) * <regularizer>`` at ``z``.

    As ``rho`` grows the shrinkage vanishes and the output approaches
    ``z``.  Pure function; ``prox_scaling`` is ignored by ``"mnn3"``
    (unfolding leaves the Frobenius norm alone, so there is nothing to
    rescale).
    """
    if not rho > 0:
        raise ValueError("rho must be positive")
    tau = 1.0 / rho
    if regularizer == "ttnn":
        return tsvc_twisted(z, tau, prox_scaling, half_spectrum)
    if regularizer == "gtnn":
        return tsvc(z, tau, prox_scaling, half_spectrum)
    if regularizer == "mnn3":
        return mode_fold(svt(mode_unfold(z, 3), tau), 3, z.shape)
    raise ValueError("unknown regularizer %r; expected one of %s"
                     % (regularizer, list(REGULARIZERS)))


def complete(observed, mask, config=None):
    """Fill in the unobserved entries of a partially known tensor.

    Parameters
    ----------
    observed : ndarray, shape (n1, n2, n3)
        Known entries where ``mask`` is True; values elsewhere are
        ignored (NaN allowed there).
    mask : ndarray of bool, shape (n1, n2, n3)
        True marks an observed entry.  Must have at least one.
    config : AdmmConfig, optional
        Solver knobs; defaults are used when omitted.

    Returns
    -------
    x : ndarray, shape (n1, n2, n3)
        The completed tensor.  Observed entries are reproduced exactly.
    report : SolveReport

    Raises
    ------
    ValueError
        Empty mask, shape mismatch, or non-finite observed entries.
    RuntimeError
        If the feasibility residual stops being finite or grows by more
        than a factor of 1e6 over its initial value.
    """
    if config is None:
        config = AdmmConfig()
    observed = as_tensor3(observed, "observed", allow_nan=True)
    mask = as_mask3(mask, "mask")
    check_same_dims(observed, mask, "observed", "mask")
    if not mask.any():
        raise ValueError("mask has no observed entries")

    m = project(observed, mask)
    if not np.isfinite(m).all():
        raise ValueError("observed entries contain non-finite values")

    x = m.copy()
    y = np.zeros_like(x)
    w = np.zeros_like(x)
    rho = config.rho0
    unseen = ~mask
    norm_of = _NORM_OF[config.regularizer]

    residuals, rhos = [], []
    objectives = [] if config.track_objective else None
    converged = False
    first_residual = None
    for _ in range(config.max_iters):
        np.copyto(x, y - w / rho, where=unseen)
        z = x + w / rho
        y = y_update(z, rho, config.regularizer,
                     config.prox_scaling, config.half_spectrum)
        w += rho * (x - y)

        gap = fro_norm(x - y)
        denom = fro_norm(x)
        residual = gap / denom if denom > 0 else gap
        residuals.append(residual)
        rhos.append(rho)
        if objectives is not None:
            objectives.append(norm_of(y))

        if first_residual is None:
            first_residual = residual
        if not np.isfinite(residual) or (
                first_residual > 0
                and residual > DIVERGENCE_FACTOR * first_residual):
            raise RuntimeError(
                "completion diverged: residual %.3e after %d iterations "
                "(started at %.3e)" % (residual, len(residuals),
                                       first_residual))

        rho = min(config.eta * rho, config.rho_cap)
        if residual <= config.tol:
            converged = True
            break

    return x, SolveReport(
        converged=converged,
        iterations=len(residuals),
        residual_history=np.array(residuals),
        rho_history=np.array(rhos),
        objective_history=(np.array(objectives) if objectives is not None
                           else None),
        config=config)
