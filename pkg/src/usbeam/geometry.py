"""Transducer geometry, image grids, and round-trip delay computation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Tolerance on element-spacing uniformity, in meters.
_SPACING_TOL = 1e-12


@dataclass(frozen=True)
class ArrayGeometry:
    """Linear transducer array.

    Parameters
    ----------
    element_count : int
        Number of elements, at least 2.
    pitch : float
        Center-to-center element spacing in meters.
    element_x : np.ndarray
        Lateral element positions in meters, strictly increasing with
        uniform spacing equal to ``pitch``.
    sound_speed : float
        Propagation speed in m/s.
    """

    element_count: int
    pitch: float
    element_x: np.ndarray
    sound_speed: float

    def __post_init__(self):
        if self.element_count < 2:
            raise ValueError("element_count must be >= 2")
        if not self.pitch > 0:
            raise ValueError("pitch must be positive")
        if not self.sound_speed > 0:
            raise ValueError("sound_speed must be positive")
        x = np.asarray(self.element_x, dtype=float)
        if x.shape != (self.element_count,):
            raise ValueError("element_x must hold element_count positions")
        gaps = np.diff(x)
        if np.any(gaps <= 0):
            raise ValueError("element_x must be strictly increasing")
        if np.any(np.abs(gaps - self.pitch) > _SPACING_TOL):
            raise ValueError("element spacing must be uniform and equal to pitch")
        object.__setattr__(self, "element_x", x)


def linear_array(element_count: int, pitch: float, sound_speed: float = 1540.0) -> ArrayGeometry:
    """Build a uniform linear array centered on x = 0."""
    idx = np.arange(element_count, dtype=float)
    x = (idx - (element_count - 1) / 2.0) * pitch
    return ArrayGeometry(element_count, pitch, x, sound_speed)


@dataclass(frozen=True)
class ImageGrid:
    """Rectangular pixel lattice to reconstruct, extents in meters.

    Depth (z) increases away from the array face; z_min must be strictly
    positive so the grid starts below the transducer.
    """

    x_min: float
    x_max: float
    z_min: float
    z_max: float
    nx: int
    nz: int

    def __post_init__(self):
        if self.nx < 1 or self.nz < 1:
            raise ValueError("nx and nz must be >= 1")
        if not self.z_min > 0:
            raise ValueError("z_min must be positive (imaging starts below the array face)")
        if self.x_max < self.x_min or self.z_max < self.z_min:
            raise ValueError("grid extents must satisfy x_min <= x_max and z_min <= z_max")

    @property
    def x_axis(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def z_axis(self) -> np.ndarray:
        return np.linspace(self.z_min, self.z_max, self.nz)

    @property
    def dz(self) -> float:
        if self.nz < 2:
            raise ValueError("axial spacing is undefined for a single-row grid")
        return (self.z_max - self.z_min) / (self.nz - 1)


@dataclass(frozen=True)
class DelayTable:
    """Per-pixel, per-element fractional sample delays.

    values has shape (nz, nx, element_count) and holds real-valued sample
    indices; fs is the sampling rate the delays were scaled with.
    """

    values: np.ndarray
    fs: float


def compute_delays(geometry: ArrayGeometry, grid: ImageGrid, fs: float) -> DelayTable:
    """Round-trip delays, in samples, for dynamically focused reconstruction.

    Transmit travel to a pixel is modeled as straight axial propagation
    (z / c); receive travel is the exact Euclidean distance from the pixel
    back to each element. The sum is scaled by the sampling rate, so the
    resulting table addresses fractional sample positions directly.

    Parameters
    ----------
    geometry : ArrayGeometry
    grid : ImageGrid
    fs : float
        Sampling rate in Hz. Doubling fs exactly doubles every delay.

    Returns
    -------
    DelayTable
        Delay values of shape (nz, nx, element_count).
    """
    if not fs > 0:
        raise ValueError("fs must be positive")
    if not grid.z_min > 0:
        raise ValueError("grid must start below the array face (z_min > 0)")
    c = geometry.sound_speed
    x = grid.x_axis
    z = grid.z_axis
    dx = x[None, :, None] - geometry.element_x[None, None, :]
    zz = z[:, None, None]
    # One large allocation: receive path, then add transmit time, then scale.
    travel = np.sqrt(dx * dx + zz * zz)
    travel /= c
    travel += zz / c
    travel *= fs
    return DelayTable(values=travel, fs=float(fs))
