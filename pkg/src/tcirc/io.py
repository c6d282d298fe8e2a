"""File formats: binary tensor/mask containers and image-sequence I/O.

Tensor container (``.tt3d``): magic ``TT3D``, one version byte (0x01),
three little-endian uint32 dimensions, then float64 little-endian
entries with the first index fastest and the last slowest.  Mask
container (``.ttm1``): magic ``TTM1``, same header, one byte per entry
(0 or 1) in the same order.

Image sequences are read in lexicographic filename order and converted
to grayscale in [0, 1] with luma weights 0.299 / 0.587 / 0.114.
"""

import os
import struct

import numpy as np
from PIL import Image

from .validation import as_mask3, as_tensor3

__all__ = [
    "TensorFileError",
    "read_mask",
    "read_tensor",
    "write_mask",
    "write_tensor",
    "rgb_to_gray",
    "load_frames",
    "load_frames_rgb",
    "dump_frames",
    "list_frame_files",
]

TENSOR_MAGIC = b"TT3D"
MASK_MAGIC = b"TTM1"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<4sBIII")

IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff", ".gif")


class TensorFileError(Exception):
    """Raised when a tensor or mask file is malformed."""


def _write_payload(path, magic, dims, payload):
    n1, n2, n3 = dims
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(magic, FORMAT_VERSION, n1, n2, n3))
        fh.write(payload)


def write_tensor(path, t):
    """Serialize a float tensor to a ``TT3D`` container."""
    t = as_tensor3(t, "tensor")
    _write_payload(path, TENSOR_MAGIC, t.shape,
                   t.flatten(order="F").astype("<f8").tobytes())


def write_mask(path, m):
    """Serialize a boolean mask to a ``TTM1`` container."""
    m = as_mask3(m, "mask")
    _write_payload(path, MASK_MAGIC, m.shape,
                   m.flatten(order="F").astype(np.uint8).tobytes())


def _read_payload(path, magic):
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise TensorFileError("%s: truncated header" % path)
        got_magic, version, n1, n2, n3 = _HEADER.unpack(header)
        if got_magic != magic:
            raise TensorFileError("%s: bad magic %r (expected %r)"
                                  % (path, got_magic, magic))
        if version != FORMAT_VERSION:
            raise TensorFileError("%s: unsupported version %d"
                                  % (path, version))
        if min(n1, n2, n3) < 1:
            raise TensorFileError("%s: non-positive dimension (%d, %d, %d)"
                                  % (path, n1, n2, n3))
        return (n1, n2, n3), fh.read()


def read_tensor(path):
    """Load a ``TT3D`` container as a float64 array of shape (n1, n2, n3)."""
    dims, payload = _read_payload(path, TENSOR_MAGIC)
    count = dims[0] * dims[1] * dims[2]
    if len(payload) != 8 * count:
        raise TensorFileError("%s: expected %d bytes of entries, found %d"
                              % (path, 8 * count, len(payload)))
    flat = np.frombuffer(payload, dtype="<f8")
    return flat.reshape(dims, order="F").astype(np.float64)


def read_mask(path):
    """Load a ``TTM1`` container as a boolean array of shape (n1, n2, n3)."""
    dims, payload = _read_payload(path, MASK_MAGIC)
    count = dims[0] * dims[1] * dims[2]
    if len(payload) != count:
        raise TensorFileError("%s: expected %d bytes of entries, found %d"
                              % (path, count, len(payload)))
    flat = np.frombuffer(payload, dtype=np.uint8)
    bad = ~np.isin(flat, (0, 1))
    if bad.any():
        raise TensorFileError("%s: mask byte %d at entry %d is not 0 or 1"
                              % (path, flat[bad.argmax()], bad.argmax()))
    return flat.reshape(dims, order="F").astype(bool)


def rgb_to_gray(rgb):
    """Luma conversion of an (h, w, 3) array in [0, 255] to [0, 1]."""
    rgb = np.asarray(rgb, dtype=np.float64)
    return rgb @ np.array([0.299, 0.587, 0.114]) / 255.0


def list_frame_files(directory):
    """Image files in a directory, sorted by filename."""
    try:
        names = sorted(os.listdir(directory))
    except OSError as e:
        raise TensorFileError("cannot list %s: %s" % (directory, e)) from e
    return [os.path.join(directory, n) for n in names
            if n.lower().endswith(IMAGE_EXTENSIONS)]


def _load_stack(directory):
    paths = list_frame_files(directory)
    if not paths:
        raise TensorFileError("no image files found in %s" % directory)
    frames = []
    for p in paths:
        with Image.open(p) as img:
            frames.append(np.asarray(img.convert("RGB"), dtype=np.float64))
    shapes = {f.shape for f in frames}
    if len(shapes) > 1:
        raise TensorFileError("frames in %s differ in size: %s"
                              % (directory, sorted(shapes)))
    return np.stack(frames, axis=3)  # (h, w, 3, n_frames)


def load_frames(directory):
    """Read an image sequence as a grayscale tensor (h, w, n_frames) in
    [0, 1].  Frames are taken in lexicographic filename order.
    """
    stack = _load_stack(directory)
    h, w, _, n = stack.shape
    out = np.empty((h, w, n))
    for k in range(n):
        out[:, :, k] = rgb_to_gray(stack[:, :, :, k])
    return out


def load_frames_rgb(directory):
    """Read an image sequence as three tensors (R, G, B), each
    (h, w, n_frames) scaled to [0, 1].
    """
    stack = _load_stack(directory) / 255.0
    return tuple(np.ascontiguousarray(stack[:, :, c, :]) for c in range(3))


def dump_frames(directory, t, prefix="frame", ext="png"):
    """Write each frontal slice as an 8-bit grayscale image.

    Values are clipped to [0, 1] and scaled to 0..255.  Filenames are
    zero-padded (``frame_00000.png``, ...) so lexicographic order is
    frame order.  Returns the list of paths written.
    """
    t = as_tensor3(t, "tensor")
    os.makedirs(directory, exist_ok=True)
    paths = []
    data = np.clip(t, 0.0, 1.0)
    for k in range(t.shape[2]):
        img = Image.fromarray(
            np.rint(data[:, :, k] * 255.0).astype(np.uint8), mode="L")
        path = os.path.join(directory, "%s_%05d.%s" % (prefix, k, ext))
        img.save(path)
        paths.append(path)
    return paths


def dump_frames_rgb(directory, r, g, b, prefix="frame", ext="png"):
    """Recombine per-channel tensors (each in [0, 1]) into 8-bit color
    frames; same naming scheme as :func:`dump_frames`.
    """
    chans = [np.clip(as_tensor3(c, n), 0.0, 1.0)
             for c, n in ((r, "r"), (g, "g"), (b, "b"))]
    if len({c.shape for c in chans}) > 1:
        raise ValueError("channel tensors differ in shape")
    os.makedirs(directory, exist_ok=True)
    paths = []
    for k in range(chans[0].shape[2]):
        rgb = np.stack([np.rint(c[:, :, k] * 255.0).astype(np.uint8)
                        for c in chans], axis=2)
        path = os.path.join(directory, "%s_%05d.%s" % (prefix, k, ext))
        Image.fromarray(rgb, mode="RGB").save(path)
        paths.append(path)
    return paths
