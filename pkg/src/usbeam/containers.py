"""Binary file formats: the RF channel-data container, the reconstructed
image container, and portable graymap rendering.

Both binary containers use a fixed 64-byte little-endian header followed
by a float32 payload; doubles in memory are quantized to float32 exactly
once, at write time. Writes go to a temporary file in the target
directory and are renamed into place.
"""

from __future__ import annotations

import os
import struct

import numpy as np

from .dsp import DbImage
from .geometry import ImageGrid
from .rfmodel import RfFrame

RF_MAGIC = b"URF1"
IMAGE_MAGIC = b"UIM1"
FORMAT_VERSION = 1

# magic, version, count16, count32, four f64 fields, reserved -> 64 bytes.
_HEADER = struct.Struct("<4sHHI4d20s")
_RESERVED = b"\x00" * 20
assert _HEADER.size == 64


def atomic_write(path: str, payload: bytes) -> None:
    """Write bytes to a temporary file beside the target, then rename."""
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(payload)
    os.replace(tmp, path)


def write_rf(path: str, frame: RfFrame, pitch: float) -> None:
    """Write a frame as an RF container (header + float32 channel-major body)."""
    m, k = frame.element_count, frame.sample_count
    if m > 0xFFFF:
        raise ValueError("element count exceeds the container's 16-bit field")
    header = _HEADER.pack(RF_MAGIC, FORMAT_VERSION, m, k, frame.fs, frame.f0, frame.c, pitch, _RESERVED)
    body = frame.samples.astype("<f4").tobytes(order="C")
    atomic_write(path, header + body)


def read_rf(path: str) -> tuple[RfFrame, float]:
    """Read an RF container; returns the frame and the element pitch."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated RF container header")
    magic, version, m, k, fs, f0, c, pitch, _ = _HEADER.unpack_from(raw)
    if magic != RF_MAGIC:
        raise ValueError(f"{path}: not an RF container (bad magic)")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported RF container version {version}")
    expected = _HEADER.size + 4 * m * k
    if len(raw) != expected:
        raise ValueError(f"{path}: RF container size {len(raw)} != expected {expected}")
    samples = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).astype(float).reshape(m, k)
    return RfFrame(samples=samples, fs=fs, f0=f0, c=c), pitch


def write_image(path: str, image: np.ndarray, grid: ImageGrid) -> None:
    """Write a reconstructed image (rows along depth) with its grid extents."""
    img = np.asarray(image, dtype=float)
    if img.shape != (grid.nz, grid.nx):
        raise ValueError("image shape must match the grid (nz rows, nx columns)")
    if grid.nx > 0xFFFF:
        raise ValueError("grid width exceeds the container's 16-bit field")
    header = _HEADER.pack(
        IMAGE_MAGIC, FORMAT_VERSION, grid.nx, grid.nz, grid.x_min, grid.x_max, grid.z_min, grid.z_max, _RESERVED
    )
    atomic_write(path, header + img.astype("<f4").tobytes(order="C"))


def read_image(path: str) -> tuple[np.ndarray, ImageGrid]:
    """Read an image container; returns the image and its grid."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated image container header")
    magic, version, nx, nz, x_min, x_max, z_min, z_max, _ = _HEADER.unpack_from(raw)
    if magic != IMAGE_MAGIC:
        raise ValueError(f"{path}: not an image container (bad magic)")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported image container version {version}")
    expected = _HEADER.size + 4 * nx * nz
    if len(raw) != expected:
        raise ValueError(f"{path}: image container size {len(raw)} != expected {expected}")
    image = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).astype(float).reshape(nz, nx)
    return image, ImageGrid(x_min=x_min, x_max=x_max, z_min=z_min, z_max=z_max, nx=nx, nz=nz)


def db_to_gray(image: DbImage) -> np.ndarray:
    """Map a dB image to 8-bit grayscale: 0 dB -> 255, the dynamic-range
    floor -> 0, rounding halves up."""
    dr = image.dynamic_range
    levels = np.floor(255.0 * (image.values + dr) / dr + 0.5)
    return np.clip(levels, 0, 255).astype(np.uint8)


def write_pgm(path: str, gray: np.ndarray) -> None:
    """Write 8-bit grayscale pixels as a binary portable graymap (P5)."""
    g = np.asarray(gray)
    if g.ndim != 2 or g.dtype != np.uint8:
        raise ValueError("gray must be a 2-D uint8 array")
    header = f"P5\n{g.shape[1]} {g.shape[0]}\n255\n".encode("ascii")
    atomic_write(path, header + g.tobytes(order="C"))
