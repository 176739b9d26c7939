"""Image-quality metrics: region SNR, FWHM, contrast ratio, lateral
profiles and sidelobe levels.

Region metrics (SNR, CR) operate on the envelope-domain image, before log
compression; profile metrics operate on normalized dB profiles.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dsp import DbImage
from .geometry import ImageGrid


class RegionShape(Enum):
    RECT = "rect"
    DISC = "disc"


@dataclass(frozen=True)
class RegionSpec:
    """Axis-aligned region of interest, in meters.

    For RECT, half_x / half_z are the half-widths; for DISC, half_x is the
    radius and half_z is ignored.
    """

    shape: RegionShape
    center_x: float
    center_z: float
    half_x: float
    half_z: float = 0.0

    @classmethod
    def rect(cls, center_x, center_z, half_x, half_z):
        return cls(RegionShape.RECT, center_x, center_z, half_x, half_z)

    @classmethod
    def disc(cls, center_x, center_z, radius):
        return cls(RegionShape.DISC, center_x, center_z, radius, radius)

    def mask(self, grid: ImageGrid) -> np.ndarray:
        """Boolean pixel mask on a grid; the region must lie inside it."""
        hx = self.half_x
        hz = self.half_z if self.shape is RegionShape.RECT else self.half_x
        if (
            self.center_x - hx < grid.x_min
            or self.center_x + hx > grid.x_max
            or self.center_z - hz < grid.z_min
            or self.center_z + hz > grid.z_max
        ):
            raise ValueError("region extends outside the image grid")
        x = grid.x_axis[None, :] - self.center_x
        z = grid.z_axis[:, None] - self.center_z
        if self.shape is RegionShape.RECT:
            return (np.abs(x) <= hx) & (np.abs(z) <= hz)
        return x**2 + z**2 <= hx**2


def snr_region(image, region: RegionSpec, grid: ImageGrid) -> float:
    """Region SNR in dB: 20 log10((max - min) / std) over the region's
    pixels of a pre-log-compression intensity image."""
    img = np.asarray(image, dtype=float)
    pixels = img[region.mask(grid)]
    if pixels.size < 2:
        raise ValueError("region must contain at least 2 pixels")
    spread = float(np.max(pixels) - np.min(pixels))
    std = float(np.std(pixels))
    if not std > 0:
        raise ValueError("region has zero variance")
    return 20.0 * np.log10(spread / std)


def cr(image, cyst: RegionSpec, background: RegionSpec, grid: ImageGrid) -> float:
    """Contrast ratio in dB: 20 log10(mean cyst / mean background) on the
    pre-log-compression intensity image. More negative is better anechoic
    contrast; an exactly empty cyst reports -inf."""
    img = np.asarray(image, dtype=float)
    mu_cyst = float(np.mean(img[cyst.mask(grid)]))
    mu_bck = float(np.mean(img[background.mask(grid)]))
    if not mu_bck > 0:
        raise ValueError("background region has zero mean intensity")
    if mu_cyst == 0.0:
        return float("-inf")
    return 20.0 * np.log10(mu_cyst / mu_bck)


@dataclass(frozen=True)
class LateralProfile:
    """Lateral cut through an image at one depth.

    x holds the lateral positions in meters; value_db is normalized so its
    maximum is 0 dB. depth is the actual row depth and depth_offset the
    distance to the requested depth.
    """

    depth: float
    x: np.ndarray
    value_db: np.ndarray
    depth_offset: float = 0.0


def lateral_profile(image: DbImage, depth: float, grid: ImageGrid) -> LateralProfile:
    """Extract the image row nearest a depth, renormalized to 0 dB max."""
    if depth < grid.z_min or depth > grid.z_max:
        raise ValueError("requested depth lies outside the grid")
    z = grid.z_axis
    row = int(np.argmin(np.abs(z - depth)))
    values = image.values[row, :].astype(float)
    return LateralProfile(
        depth=float(z[row]),
        x=grid.x_axis,
        value_db=values - values.max(),
        depth_offset=float(abs(z[row] - depth)),
    )


def _crossing(x0, a0, x1, a1, level):
    return x0 + (x1 - x0) * (level - a0) / (a1 - a0)


def fwhm(profile: LateralProfile) -> float:
    """Full width at half maximum of the profile's mainlobe, in mm.

    Width between the two half-amplitude crossings (-6.02 dB, i.e. half of
    the peak intensity) nearest the peak, with linear interpolation of the
    amplitude between samples. The peak must not sit on either profile
    boundary and both crossings must exist.
    """
    amp = 10.0 ** (np.asarray(profile.value_db, dtype=float) / 20.0)
    if amp.size < 3:
        raise ValueError("profile too short")
    peak = int(np.argmax(amp))
    if peak == 0 or peak == amp.size - 1:
        raise ValueError("profile peak sits on the boundary; mainlobe truncated")
    half = 0.5 * amp[peak]
    x = np.asarray(profile.x, dtype=float)

    left = None
    for k in range(peak - 1, -1, -1):
        if amp[k] < half:
            left = _crossing(x[k], amp[k], x[k + 1], amp[k + 1], half)
            break
    right = None
    for k in range(peak + 1, amp.size):
        if amp[k] < half:
            right = _crossing(x[k - 1], amp[k - 1], x[k], amp[k], half)
            break
    if left is None or right is None:
        raise ValueError("no half-maximum crossing on one side; mainlobe truncated")
    return float((right - left) * 1e3)


def _smooth3(v: np.ndarray) -> np.ndarray:
    padded = np.pad(v, 1, mode="edge")
    return (padded[:-2] + padded[1:-1] + padded[2:]) / 3.0


def sidelobe_level(profile: LateralProfile) -> float:
    """Peak profile value outside the mainlobe, in dB relative to the peak.

    The mainlobe region is bounded by the first local minima flanking the
    global peak, found on a 3-sample moving average of the profile so that
    noise-induced micro-minima do not end the mainlobe early. Returns -inf
    when no sample lies outside the mainlobe (single-lobe profile).
    """
    fwhm(profile)  # mainlobe must be detectable
    v = np.asarray(profile.value_db, dtype=float)
    s = _smooth3(v)
    # Walk outward on the smoothed curve from its own maximum; smoothing can
    # shift the apex a sample off the raw peak, which must not end the walk.
    peak = int(np.argmax(s))

    lo = peak
    while lo > 0 and s[lo - 1] <= s[lo]:
        lo -= 1
    hi = peak
    while hi < v.size - 1 and s[hi + 1] <= s[hi]:
        hi += 1

    outside = []
    if lo > 0:
        outside.append(np.max(v[:lo]))
    if hi < v.size - 1:
        outside.append(np.max(v[hi + 1 :]))
    if not outside:
        return float("-inf")
    return float(max(outside) - v.max())
