"""Brute-force verification suite.

Every identity the fast paths rely on is re-derived here against dense,
materialized linear algebra at desk scale: the two t-product paths, the
equality of the spectral norm sum with the block-circulant nuclear
norm, permutation invariance of the two matricizations, the tensor-SVD
contract, the half-spectrum shortcut, and the arbitration between the
two candidate shrinkage scalings.  Checks that need materialized
circulant matrices honor the element budget and report SKIPPED when it
refuses them.

All checks call library code through module namespaces, so a corrupted
build (or a deliberately patched function) is caught as a FAILED
verdict rather than silently ignored.
"""

import dataclasses

import numpy as np

from . import circulant, norms, tensor, tsvd

__all__ = ["CheckResult", "CHECK_NAMES", "run_checks", "arbitrate_prox"]

CHECK_NAMES = (
    "t_product_paths",
    "norm_equality",
    "permutation_invariance",
    "tsvd_reconstruction",
    "half_spectrum_equality",
    "prox_arbitration",
)


@dataclasses.dataclass
class CheckResult:
    name: str
    verdict: str                # PASSED / FAILED / SKIPPED
    max_error: float = None
    tolerance: float = None
    detail: str = ""

    @property
    def failed(self):
        return self.verdict == "FAILED"


def _gen(seed):
    return np.random.Generator(np.random.Philox(seed))


def _rel(a, b):
    ref = float(np.linalg.norm(np.asarray(b).ravel()))
    err = float(np.linalg.norm((np.asarray(a) - np.asarray(b)).ravel()))
    return err / ref if ref > 0 else err


def _is_budget_refusal(e):
    return isinstance(e, ValueError) and "budget" in str(e)


def _guarded(name, tolerance, fn):
    try:
        return fn()
    except Exception as e:  # noqa: BLE001 - verdicts, not crashes
        if _is_budget_refusal(e):
            return CheckResult(name, "SKIPPED", None, tolerance,
                               "dense path refused: %s" % e)
        return CheckResult(name, "FAILED", None, tolerance,
                           "check raised %r" % e)


def check_t_product_paths(seed=0, budget=None, pairs=50, tol=1e-10):
    """Fourier-domain product vs materialized block-circulant product."""
    def run():
        g = _gen(seed)
        worst = 0.0
        for _ in range(pairs):
            n1, n2, n4, n3 = (int(v) for v in g.integers(2, 7, size=4))
            x = g.standard_normal((n1, n2, n3))
            y = g.standard_normal((n2, n4, n3))
            fast = circulant.t_product(x, y)
            direct = circulant.t_product_direct(x, y, budget=budget)
            worst = max(worst, _rel(fast, direct))
        verdict = "PASSED" if worst <= tol else "FAILED"
        return CheckResult("t_product_paths", verdict, worst, tol,
                           "%d random shape pairs" % pairs)
    return _guarded("t_product_paths", tol, run)


def check_norm_equality(seed=1, budget=None, count=25, tol=1e-8):
    """Spectral norm sum vs dense nuclear norm of the matricization,
    plain and twisted.
    """
    def run():
        g = _gen(seed)
        worst = 0.0
        for _ in range(count):
            dims = tuple(int(v) for v in g.integers(2, 7, size=3))
            t = g.standard_normal(dims)
            plain = norms.gtnn(t)
            dense = np.linalg.svd(circulant.bcirc(t, budget=budget),
                                  compute_uv=False).sum()
            worst = max(worst, abs(plain - dense) / plain)
            tw = norms.ttnn(t)
            dense_tw = np.linalg.svd(
                circulant.bcirc(tensor.twist(t), budget=budget),
                compute_uv=False).sum()
            worst = max(worst, abs(tw - dense_tw) / tw)
        verdict = "PASSED" if worst <= tol else "FAILED"
        return CheckResult("norm_equality", verdict, worst, tol,
                           "%d random tensors, plain and twisted" % count)
    return _guarded("norm_equality", tol, run)


def check_permutation_invariance(seed=2, budget=None, count=25, tol=1e-8):
    """The two matricizations are row/column permutations of each other
    and share the nuclear norm.
    """
    def run():
        g = _gen(seed)
        worst = 0.0
        for _ in range(count):
            dims = tuple(int(v) for v in g.integers(2, 7, size=3))
            t = g.standard_normal(dims)
            b = circulant.bcirc(t, budget=budget)
            c = circulant.circ(t, budget=budget)
            p = circulant.stride_perm_rows(dims[0], dims[2])
            q = circulant.stride_perm_cols(dims[1], dims[2])
            if not np.array_equal(c, b[p][:, q]):
                return CheckResult(
                    "permutation_invariance", "FAILED", None, tol,
                    "stride permutation does not map one matricization "
                    "onto the other at dims %r" % (dims,))
            nb = np.linalg.svd(b, compute_uv=False).sum()
            nc = np.linalg.svd(c, compute_uv=False).sum()
            worst = max(worst, abs(nc - nb) / nb)
        verdict = "PASSED" if worst <= tol else "FAILED"
        return CheckResult("permutation_invariance", verdict, worst, tol,
                           "%d random tensors" % count)
    return _guarded("permutation_invariance", tol, run)


def check_tsvd_reconstruction(seed=3, count=25, tol=1e-10, orth_tol=1e-8):
    """Factor product reproduces the input; factors are orthogonal; the
    middle factor is f-diagonal with nonincreasing spectral diagonals.
    """
    def run():
        g = _gen(seed)
        worst = 0.0
        worst_orth = 0.0
        for _ in range(count):
            dims = tuple(int(v) for v in g.integers(2, 7, size=3))
            t = g.standard_normal(dims)
            f = tsvd.tsvd(t)
            rec = circulant.t_product(circulant.t_product(f.u, f.s),
                                      circulant.tensor_transpose(f.v))
            worst = max(worst, _rel(rec, t))
            for qmat in (f.u, f.v):
                n = qmat.shape[0]
                ident = circulant.identity_tensor(n, dims[2])
                res = tensor.fro_norm(circulant.t_product(
                    circulant.tensor_transpose(qmat), qmat) - ident)
                worst_orth = max(worst_orth, res)
            sf = tsvd.fft_mode3(f.s)
            smax = float(np.abs(sf).max())
            scale = max(1.0, smax)
            if not circulant.is_f_diagonal(f.s, tol=1e-10 * scale):
                return CheckResult(
                    "tsvd_reconstruction", "FAILED", None, tol,
                    "middle factor is not f-diagonal at dims %r" % (dims,))
            for k in range(dims[2]):
                d = np.diagonal(sf[:, :, k]).real
                if np.any(np.diff(d) > 1e-10 * scale) or \
                        np.any(d < -1e-10 * scale):
                    return CheckResult(
                        "tsvd_reconstruction", "FAILED", None, tol,
                        "spectral diagonal not nonincreasing/nonnegative "
                        "at dims %r slice %d" % (dims, k))
        ok = worst <= tol and worst_orth <= orth_tol
        return CheckResult(
            "tsvd_reconstruction", "PASSED" if ok else "FAILED", worst, tol,
            "%d random tensors; max orthogonality residual %.3e (tol %.0e)"
            % (count, worst_orth, orth_tol))
    return _guarded("tsvd_reconstruction", tol, run)


def check_half_spectrum_equality(seed=4, count=25, tol=1e-10):
    """Conjugate-symmetry shortcut agrees with the full decomposition."""
    def run():
        g = _gen(seed)
        worst = 0.0
        for _ in range(count):
            dims = tuple(int(v) for v in g.integers(2, 7, size=3))
            t = g.standard_normal(dims)
            full = tsvd.tsvd(t)
            half = tsvd.tsvd_half(t)
            worst = max(worst, _rel(half.s, full.s))
            rec = circulant.t_product(circulant.t_product(half.u, half.s),
                                      circulant.tensor_transpose(half.v))
            worst = max(worst, _rel(rec, t))
        verdict = "PASSED" if worst <= tol else "FAILED"
        return CheckResult("half_spectrum_equality", verdict, worst, tol,
                           "%d random tensors" % count)
    return _guarded("half_spectrum_equality", tol, run)


def _prox_objective(y, z, tau):
    return tau * norms.gtnn(y) + 0.5 * tensor.fro_norm(y - z) ** 2


def arbitrate_prox(seed=5, instances=10, dims=(4, 5, 3),
                   taus=(0.1, 0.5, 2.0), n_perturbations=1000,
                   rel_size=1e-2, margin=1e-10, budget=None):
    """Decide which shrinkage scaling is the true proximal map.

    For each (tensor, tau) instance, each candidate's output is tested
    against random perturbations of relative size ``rel_size``: a true
    minimizer's objective never loses by more than ``margin``.  Also
    cross-checks the winner against a dense materialized shrinkage when
    the budget allows.

    Returns a dict with keys ``winner``, ``winner_worst_margin``,
    ``loser_failed``, ``cross_err`` (None when skipped), ``instances``.
    """
    g = _gen(seed)
    survives = {}
    worst_margin = {}
    for scaling in norms.PROX_SCALINGS:
        survives[scaling] = True
        worst_margin[scaling] = -np.inf
    cases = []
    for _ in range(instances):
        z = g.standard_normal(dims)
        for tau in taus:
            cases.append((z, tau))
    for scaling in norms.PROX_SCALINGS:
        for z, tau in cases:
            y = norms.tsvc(z, tau, scaling=scaling)
            fy = _prox_objective(y, z, tau)
            size = rel_size * tensor.fro_norm(z)
            for _ in range(n_perturbations):
                d = g.standard_normal(dims)
                d *= size / tensor.fro_norm(d)
                gain = fy - _prox_objective(y + d, z, tau)
                worst_margin[scaling] = max(worst_margin[scaling], gain)
                if gain > margin:
                    survives[scaling] = False
                    break
            if not survives[scaling]:
                break
    alive = [s for s in norms.PROX_SCALINGS if survives[s]]
    winner = alive[0] if len(alive) == 1 else None
    cross_err = None
    if winner is not None:
        z, tau = cases[0]
        y = norms.tsvc(z, tau, scaling=winner)
        t_eff = dims[2] * tau if winner == "parseval" else tau
        try:
            dense = norms.svt(circulant.bcirc(z, budget=budget), t_eff)
            y_dense = circulant.bvfold(dense[:, :dims[1]], dims)
            cross_err = _rel(y, y_dense)
        except ValueError as e:
            if not _is_budget_refusal(e):
                raise
    return {
        "winner": winner,
        "survivors": alive,
        "winner_worst_margin": (worst_margin[winner]
                                if winner is not None else None),
        "loser_failed": len(alive) == 1,
        "cross_err": cross_err,
        "instances": len(cases),
    }


def check_prox_arbitration(seed=5, budget=None, tol=1e-10,
                           n_perturbations=1000):
    """Exactly one scaling mode must survive perturbation testing."""
    def run():
        res = arbitrate_prox(seed=seed, margin=tol, budget=budget,
                             n_perturbations=n_perturbations)
        if res["winner"] is None:
            return CheckResult(
                "prox_arbitration", "FAILED", None, tol,
                "arbitration inconclusive: survivors %r" % res["survivors"])
        detail = "winner=%s over %d instances" % (res["winner"],
                                                  res["instances"])
        err = max(res["winner_worst_margin"], 0.0)
        if res["cross_err"] is None:
            detail += "; dense cross-check skipped (budget)"
        else:
            detail += "; dense cross-check err %.3e" % res["cross_err"]
            if res["cross_err"] > 1e-8:
                return CheckResult("prox_arbitration", "FAILED",
                                   res["cross_err"], tol,
                                   detail + "; dense disagreement")
        return CheckResult("prox_arbitration", "PASSED", err, tol, detail)
    return _guarded("prox_arbitration", tol, run)


def run_checks(seed=0, budget=None, n_perturbations=1000):
    """Run the whole suite; returns a list of :class:`CheckResult`."""
    return [
        check_t_product_paths(seed=seed, budget=budget),
        check_norm_equality(seed=seed + 1, budget=budget),
        check_permutation_invariance(seed=seed + 2, budget=budget),
        check_tsvd_reconstruction(seed=seed + 3),
        check_half_spectrum_equality(seed=seed + 4),
        check_prox_arbitration(seed=seed + 5, budget=budget,
                               n_perturbations=n_perturbations),
    ]
