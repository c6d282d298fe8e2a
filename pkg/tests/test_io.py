import struct

import numpy as np
import pytest
from PIL import Image

from tcirc.io import (
    FORMAT_VERSION,
    MASK_MAGIC,
    TENSOR_MAGIC,
    TensorFileError,
    dump_frames,
    dump_frames_rgb,
    list_frame_files,
    load_frames,
    load_frames_rgb,
    read_mask,
    read_tensor,
    rgb_to_gray,
    write_mask,
    write_tensor,
)

HEADER = struct.Struct("<4sBIII")


# ---------------------------------------------------------------- binary


def test_tensor_round_trip_exact(tmp_path):
    rng = np.random.default_rng(0)
    t = rng.standard_normal((4, 5, 3))
    path = tmp_path / "t.tt3d"
    write_tensor(path, t)
    assert np.array_equal(read_tensor(path), t)


def test_tensor_round_trip_byte_identical(tmp_path):
    rng = np.random.default_rng(1)
    t = rng.standard_normal((5, 4, 6))
    a = tmp_path / "a.tt3d"
    b = tmp_path / "b.tt3d"
    write_tensor(a, t)
    write_tensor(b, read_tensor(a))
    assert a.read_bytes() == b.read_bytes()


def test_tensor_file_layout(tmp_path):
    t = np.arange(8.0).reshape((2, 2, 2), order="F")
    path = tmp_path / "t.tt3d"
    write_tensor(path, t)
    raw = path.read_bytes()
    magic, version, n1, n2, n3 = HEADER.unpack(raw[:HEADER.size])
    assert magic == TENSOR_MAGIC == b"TT3D"
    assert version == FORMAT_VERSION == 1
    assert (n1, n2, n3) == (2, 2, 2)
    payload = np.frombuffer(raw[HEADER.size:], dtype="<f8")
    # entries in storage order: first index fastest
    assert np.array_equal(payload, np.arange(8.0))


def test_mask_round_trip(tmp_path):
    rng = np.random.default_rng(2)
    m = rng.random((6, 3, 4)) < 0.5
    path = tmp_path / "m.ttm1"
    write_mask(path, m)
    got = read_mask(path)
    assert got.dtype == bool
    assert np.array_equal(got, m)


def test_mask_file_layout(tmp_path):
    m = np.zeros((2, 1, 2), dtype=bool)
    m[0, 0, 0] = True
    m[1, 0, 1] = True
    path = tmp_path / "m.ttm1"
    write_mask(path, m)
    raw = path.read_bytes()
    magic, version, n1, n2, n3 = HEADER.unpack(raw[:HEADER.size])
    assert magic == MASK_MAGIC == b"TTM1"
    assert (n1, n2, n3) == (2, 1, 2)
    assert list(raw[HEADER.size:]) == [1, 0, 0, 1]


def test_read_tensor_errors(tmp_path):
    path = tmp_path / "bad.tt3d"

    path.write_bytes(b"TT3")
    with pytest.raises(TensorFileError, match="truncated header"):
        read_tensor(path)

    path.write_bytes(HEADER.pack(b"NOPE", 1, 1, 1, 1) + b"\0" * 8)
    with pytest.raises(TensorFileError, match="bad magic"):
        read_tensor(path)

    path.write_bytes(HEADER.pack(b"TT3D", 9, 1, 1, 1) + b"\0" * 8)
    with pytest.raises(TensorFileError, match="version"):
        read_tensor(path)

    path.write_bytes(HEADER.pack(b"TT3D", 1, 0, 1, 1))
    with pytest.raises(TensorFileError, match="dimension"):
        read_tensor(path)

    path.write_bytes(HEADER.pack(b"TT3D", 1, 2, 1, 1) + b"\0" * 8)
    with pytest.raises(TensorFileError, match="expected 16 bytes"):
        read_tensor(path)

    path.write_bytes(HEADER.pack(b"TT3D", 1, 1, 1, 1) + b"\0" * 16)
    with pytest.raises(TensorFileError, match="expected 8 bytes"):
        read_tensor(path)


def test_read_mask_errors(tmp_path):
    path = tmp_path / "bad.ttm1"

    path.write_bytes(HEADER.pack(b"TT3D", 1, 1, 1, 1) + b"\0")
    with pytest.raises(TensorFileError, match="bad magic"):
        read_mask(path)

    path.write_bytes(HEADER.pack(b"TTM1", 1, 2, 1, 1) + bytes([1, 2]))
    with pytest.raises(TensorFileError, match="not 0 or 1"):
        read_mask(path)

    path.write_bytes(HEADER.pack(b"TTM1", 1, 2, 2, 1) + bytes([1]))
    with pytest.raises(TensorFileError, match="expected 4 bytes"):
        read_mask(path)


def test_read_missing_file():
    with pytest.raises((TensorFileError, OSError)):
        read_tensor("/nonexistent/path/t.tt3d")


def test_write_tensor_rejects_non_3d(tmp_path):
    with pytest.raises(ValueError):
        write_tensor(tmp_path / "x.tt3d", np.zeros((2, 2)))


# ---------------------------------------------------------------- frames


def test_rgb_to_gray_weights():
    red = np.zeros((1, 1, 3))
    red[..., 0] = 255.0
    green = np.zeros((1, 1, 3))
    green[..., 1] = 255.0
    blue = np.zeros((1, 1, 3))
    blue[..., 2] = 255.0
    assert abs(rgb_to_gray(red)[0, 0] - 0.299) <= 1e-12
    assert abs(rgb_to_gray(green)[0, 0] - 0.587) <= 1e-12
    assert abs(rgb_to_gray(blue)[0, 0] - 0.114) <= 1e-12
    white = np.full((1, 1, 3), 255.0)
    assert abs(rgb_to_gray(white)[0, 0] - 1.0) <= 1e-12


def test_list_frame_files_sorted_and_filtered(tmp_path):
    for name in ("b.png", "a.png", "notes.txt", "c.JPG"):
        (tmp_path / name).write_bytes(b"")
    got = [p.split("/")[-1] for p in list_frame_files(tmp_path)]
    assert got == ["a.png", "b.png", "c.JPG"]


def test_list_frame_files_missing_directory():
    with pytest.raises(TensorFileError):
        list_frame_files("/nonexistent/frames")


def test_load_frames_empty_directory(tmp_path):
    (tmp_path / "notes.txt").write_text("not an image")
    with pytest.raises(TensorFileError, match="no image files"):
        load_frames(tmp_path)


def test_dump_load_frames_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    t = rng.random((8, 6, 4))
    paths = dump_frames(tmp_path / "frames", t)
    assert len(paths) == 4
    assert paths[0].endswith("frame_00000.png")
    back = load_frames(tmp_path / "frames")
    assert back.shape == (8, 6, 4)
    # 8-bit quantization: worst case half a level
    assert np.abs(back - t).max() <= 0.5 / 255.0 + 1e-12


def test_dump_frames_clips(tmp_path):
    t = np.array([[[-0.5, 2.0]]])
    dump_frames(tmp_path / "f", t)
    back = load_frames(tmp_path / "f")
    assert back[0, 0, 0] == 0.0
    # 1.0 up to the luma weight sum (0.299 + 0.587 + 0.114)
    assert abs(back[0, 0, 1] - 1.0) <= 1e-12


def test_load_frames_rejects_mixed_sizes(tmp_path):
    d = tmp_path / "frames"
    d.mkdir()
    Image.new("L", (4, 4)).save(d / "a.png")
    Image.new("L", (5, 4)).save(d / "b.png")
    with pytest.raises(TensorFileError, match="differ in size"):
        load_frames(d)


def test_load_frames_order_is_lexicographic(tmp_path):
    d = tmp_path / "frames"
    d.mkdir()
    for name, level in (("10.png", 100), ("2.png", 200)):
        Image.new("L", (2, 2), color=level).save(d / name)
    t = load_frames(d)
    # "10.png" sorts before "2.png"
    assert abs(t[0, 0, 0] - 100 / 255.0) <= 1e-12
    assert abs(t[0, 0, 1] - 200 / 255.0) <= 1e-12


def test_rgb_round_trip(tmp_path):
    rng = np.random.default_rng(4)
    r, g, b = (rng.random((5, 7, 3)) for _ in range(3))
    dump_frames_rgb(tmp_path / "rgb", r, g, b)
    r2, g2, b2 = load_frames_rgb(tmp_path / "rgb")
    for orig, back in ((r, r2), (g, g2), (b, b2)):
        assert back.shape == (5, 7, 3)
        assert np.abs(back - orig).max() <= 0.5 / 255.0 + 1e-12


def test_dump_frames_rgb_rejects_mismatched_channels(tmp_path):
    with pytest.raises(ValueError):
        dump_frames_rgb(tmp_path / "x", np.zeros((2, 2, 2)),
                        np.zeros((2, 2, 2)), np.zeros((2, 2, 3)))
