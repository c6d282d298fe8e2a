"""Observation masks and synthetic test tensors.

All randomness is counter-based (Philox) and fully determined by the
seed, so masks and synthetic data are bit-reproducible across machines.
Entry-wise draws are taken as one flat stream in storage order (first
index fastest, last slowest) and reshaped back, which pins down exactly
which entry consumes which draw.
"""

import dataclasses

import numpy as np

from .circulant import t_product

__all__ = [
    "MaskSpec",
    "OCCLUSION_MODES",
    "bernoulli_mask",
    "occlusion_mask",
    "panning_tensor",
    "parse_mask_spec",
    "synth_low_multirank",
]

OCCLUSION_MODES = ("area", "side")


def _generator(seed):
    return np.random.Generator(np.random.Philox(seed))


def _check_dims(dims):
    dims = tuple(int(n) for n in dims)
    if len(dims) != 3 or any(n < 1 for n in dims):
        raise ValueError("dims must be three positive integers, got %r"
                         % (dims,))
    return dims


def bernoulli_mask(dims, p, seed=0):
    """Observe each entry independently with probability ``p``.

    Draws one uniform per entry from a Philox stream in storage order.

    Parameters
    ----------
    dims : tuple of int
        Tensor shape (n1, n2, n3).
    p : float
        Observation probability, in [0, 1].
    seed : int

    Returns
    -------
    ndarray of bool, shape ``dims``
    """
    dims = _check_dims(dims)
    if not 0.0 <= p <= 1.0:
        raise ValueError("observation probability must be in [0, 1], got %r"
                         % (p,))
    g = _generator(seed)
    flat = g.random(int(np.prod(dims))) < p
    return flat.reshape(dims, order="F")


def occlusion_mask(dims, frac, seed=0, mode="area"):
    """Hide one axis-aligned rectangle per frontal slice.

    The rectangle side lengths are ``floor(sqrt(frac) * n)`` per axis in
    ``"area"`` mode (so the hidden area is about ``frac`` of the frame)
    and ``floor(frac * n)`` in ``"side"`` mode.  For each slice in
    order, the top-left corner is drawn uniformly over admissible
    positions: first the row offset, then the column offset.

    Returns
    -------
    ndarray of bool, shape ``dims``
        True marks an observed entry; the rectangles are False.
    """
    dims = _check_dims(dims)
    if not 0.0 <= frac <= 1.0:
        raise ValueError("occlusion fraction must be in [0, 1], got %r"
                         % (frac,))
    if mode not in OCCLUSION_MODES:
        raise ValueError("unknown occlusion mode %r; expected one of %s"
                         % (mode, list(OCCLUSION_MODES)))
    n1, n2, n3 = dims
    lin = np.sqrt(frac) if mode == "area" else frac
    h = int(np.floor(lin * n1))
    w = int(np.floor(lin * n2))
    g = _generator(seed)
    mask = np.ones(dims, dtype=bool)
    for k in range(n3):
        i0 = int(g.integers(0, n1 - h + 1))
        j0 = int(g.integers(0, n2 - w + 1))
        mask[i0:i0 + h, j0:j0 + w, k] = False
    return mask


def synth_low_multirank(dims, rank, seed=0, scale=1.0):
    """Random tensor whose every Fourier slice has rank ``rank``.

    Built as the circular convolution product of two Gaussian factor
    tensors of inner size ``rank``; each factor's entries are drawn as
    one flat stream in storage order (first factor, then second).
    """
    dims = _check_dims(dims)
    n1, n2, n3 = dims
    if not 1 <= rank <= min(n1, n2):
        raise ValueError("rank must be in [1, min(n1, n2)], got %r" % (rank,))
    g = _generator(seed)
    a = g.standard_normal(n1 * rank * n3).reshape((n1, rank, n3), order="F")
    b = g.standard_normal(rank * n2 * n3).reshape((rank, n2, n3), order="F")
    return scale * t_product(a, b)


def panning_tensor(base, n3):
    """Stack ``n3`` copies of a 2-D frame, each circularly shifted one
    more column to the right: slice k holds ``base[i, (j - k) mod n2]``.

    Mimics a camera panning across a periodic scene.  Its twist tensor
    has multi-rank one in every Fourier slice, so penalties built on the
    mode-swapped spectrum recover it from few samples while a flat
    unfolding cannot.
    """
    base = np.asarray(base, dtype=np.float64)
    if base.ndim != 2:
        raise ValueError("base frame must be 2-D, got %d-D" % base.ndim)
    if n3 < 1:
        raise ValueError("n3 must be positive")
    return np.stack([np.roll(base, k, axis=1) for k in range(n3)], axis=2)


@dataclasses.dataclass
class MaskSpec:
    """Parsed mask recipe: a kind plus its keyword parameters."""

    kind: str
    params: dict

    def realize(self, dims):
        """Materialize the boolean mask for the given tensor shape."""
        if self.kind == "bernoulli":
            return bernoulli_mask(dims, **self.params)
        if self.kind == "occlusion":
            return occlusion_mask(dims, **self.params)
        raise ValueError("unknown mask kind %r" % self.kind)


_MASK_PARAMS = {
    "bernoulli": {"p": float, "seed": int},
    "occlusion": {"frac": float, "seed": int, "mode": str},
}
_MASK_REQUIRED = {"bernoulli": ("p",), "occlusion": ("frac",)}


def parse_mask_spec(spec):
    """Parse a mask recipe string like ``bernoulli:p=0.3,seed=7`` or
    ``occlusion:frac=0.3,seed=7,mode=area``.

    Returns
    -------
    MaskSpec

    Raises
    ------
    ValueError
        On an unknown kind, unknown or repeated key, missing required
        key, or a value that does not parse.
    """
    kind, sep, rest = spec.partition(":")
    kind = kind.strip()
    if kind not in _MASK_PARAMS:
        raise ValueError("unknown mask kind %r; expected one of %s"
                         % (kind, sorted(_MASK_PARAMS)))
    legal = _MASK_PARAMS[kind]
    params = {}
    if sep and rest.strip():
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            key, value = key.strip(), value.strip()
            if not eq or not key or not value:
                raise ValueError("bad mask parameter %r; expected key=value"
                                 % item.strip())
            if key not in legal:
                raise ValueError("unknown %s mask parameter %r; expected "
                                 "one of %s" % (kind, key, sorted(legal)))
            if key in params:
                raise ValueError("repeated mask parameter %r" % key)
            try:
                params[key] = legal[key](value)
            except ValueError:
                raise ValueError("bad value %r for mask parameter %r"
                                 % (value, key)) from None
    missing = [k for k in _MASK_REQUIRED[kind] if k not in params]
    if missing:
        raise ValueError("mask kind %r requires parameter(s): %s"
                         % (kind, ", ".join(missing)))
    # the grammar promises non-degenerate masks; the library functions
    # themselves also accept the closed endpoints
    for key in ("p", "frac"):
        if key in params and not 0.0 < params[key] < 1.0:
            raise ValueError("mask parameter %s=%r must lie strictly "
                             "between 0 and 1" % (key, params[key]))
    if "mode" in params and params["mode"] not in OCCLUSION_MODES:
        raise ValueError("unknown occlusion mode %r; expected one of %s"
                         % (params["mode"], list(OCCLUSION_MODES)))
    return MaskSpec(kind, params)
