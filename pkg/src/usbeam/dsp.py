"""Post-beamforming signal chain: band-pass filtering, envelope detection,
log compression."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FilterSpec:
    """Linear-phase FIR band-pass description.

    center and half_bandwidth are in Hz; taps must be odd so the group
    delay is an integer number of samples. The passband must stay clear of
    DC; the Nyquist side is checked against the sampling rate when the
    filter is designed.
    """

    center: float
    half_bandwidth: float
    taps: int = 63

    def __post_init__(self):
        if self.taps < 3 or self.taps % 2 == 0:
            raise ValueError("taps must be an odd integer >= 3")
        if not (self.center > 0 and self.half_bandwidth > 0):
            raise ValueError("center and half_bandwidth must be positive")
        if not self.center - self.half_bandwidth > 0:
            raise ValueError("passband must not reach DC")

    def validate_rate(self, fs: float) -> None:
        if not fs > 0:
            raise ValueError("sampling rate must be positive")
        if not self.center + self.half_bandwidth < fs / 2.0:
            raise ValueError(
                f"passband edge {self.center + self.half_bandwidth:.6g} Hz reaches "
                f"the Nyquist limit for fs={fs:.6g} Hz"
            )


def design_bandpass(spec: FilterSpec, fs: float) -> np.ndarray:
    """Design the band-pass taps for a given sampling rate.

    Hann-windowed ideal band-pass, with the DC response then nulled exactly
    and the gain at the center frequency normalized to one. The taps stay
    symmetric, so the filter is linear-phase with group delay
    (taps - 1) / 2 samples.
    """
    spec.validate_rate(fs)
    n = spec.taps
    mid = (n - 1) // 2
    t = np.arange(n, dtype=float) - mid
    f_lo = spec.center - spec.half_bandwidth
    f_hi = spec.center + spec.half_bandwidth
    h = (2 * f_hi / fs) * np.sinc(2 * f_hi * t / fs) - (2 * f_lo / fs) * np.sinc(2 * f_lo * t / fs)
    h *= np.hanning(n)
    h -= h.mean()
    gain = np.abs(np.sum(h * np.exp(-2j * np.pi * spec.center / fs * np.arange(n))))
    if not gain > 1e-12:
        raise ValueError("degenerate filter design: no gain at the center frequency")
    h /= gain
    return h


def _filter_line(x: np.ndarray, h: np.ndarray) -> np.ndarray:
    # Edge-replicate so boundary samples see a settled filter; the valid
    # convolution of the padded signal is exactly group-delay aligned.
    mid = (h.size - 1) // 2
    padded = np.concatenate([np.full(mid, x[0]), x, np.full(mid, x[-1])])
    return np.convolve(padded, h, mode="valid")


def bandpass(signal, spec: FilterSpec, fs: float) -> np.ndarray:
    """Band-pass filter a sequence, compensating the group delay.

    The output has the same length as the input and is aligned to it
    (symmetric taps, integer group delay removed); boundaries are handled
    by edge replication. DC is rejected exactly by construction and the
    gain at spec.center is one.
    """
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise ValueError("signal must be 1-D")
    if x.size <= spec.taps:
        raise ValueError("signal must be longer than the filter")
    return _filter_line(x, design_bandpass(spec, fs))


def bandpass_image(image, spec: FilterSpec, axial_rate: float) -> np.ndarray:
    """Filter every image column (one reconstructed line) along depth.

    axial_rate is the line's equivalent sampling rate in Hz: c / (2 dz)
    for a grid with axial pixel spacing dz.
    """
    img = np.asarray(image, dtype=float)
    if img.ndim != 2:
        raise ValueError("image must be 2-D")
    if img.shape[0] <= spec.taps:
        raise ValueError("image has fewer axial samples than filter taps")
    h = design_bandpass(spec, axial_rate)
    out = np.empty_like(img)
    for j in range(img.shape[1]):
        out[:, j] = _filter_line(img[:, j], h)
    return out


def _analytic_weights(nfft: int) -> np.ndarray:
    w = np.zeros(nfft)
    w[0] = 1.0
    w[nfft // 2] = 1.0
    w[1 : nfft // 2] = 2.0
    return w


def envelope(signal) -> np.ndarray:
    """Envelope of a real sequence via the analytic signal.

    Frequency-domain construction: zero the negative frequencies, double
    the positive ones, inverse-transform and take the magnitude. The
    transform runs at the next power-of-two length; the first and last few
    percent of samples carry edge transients.
    """
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise ValueError("signal must be 1-D")
    if x.size < 4:
        raise ValueError("signal too short for envelope detection")
    nfft = 1 << (x.size - 1).bit_length()
    spectrum = np.fft.fft(x, nfft)
    analytic = np.fft.ifft(spectrum * _analytic_weights(nfft))
    return np.abs(analytic[: x.size])


def envelope_image(image) -> np.ndarray:
    """Per-column envelope along the axial axis."""
    img = np.asarray(image, dtype=float)
    if img.ndim != 2:
        raise ValueError("image must be 2-D")
    if img.shape[0] < 4:
        raise ValueError("image too short for envelope detection")
    nfft = 1 << (img.shape[0] - 1).bit_length()
    spectrum = np.fft.fft(img, nfft, axis=0)
    analytic = np.fft.ifft(spectrum * _analytic_weights(nfft)[:, None], axis=0)
    return np.abs(analytic[: img.shape[0], :])


@dataclass(frozen=True)
class DbImage:
    """Log-compressed image in dB relative to its own maximum.

    The maximum pixel is exactly 0 dB; all values lie in
    [-dynamic_range, 0].
    """

    values: np.ndarray
    dynamic_range: float


def log_compress(envelope_img, dynamic_range: float) -> DbImage:
    """Normalize an envelope image to its maximum and log-compress.

    Values map to 20 log10(v / max), floored at -dynamic_range dB; the
    result is invariant to a global positive scaling of the input.
    """
    env = np.asarray(envelope_img, dtype=float)
    if np.any(env < 0):
        raise ValueError("envelope image must be nonnegative")
    if not dynamic_range > 0:
        raise ValueError("dynamic_range must be positive")
    peak = env.max() if env.size else 0.0
    if not peak > 0:
        raise ValueError("cannot normalize an all-zero image")
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(env / peak)
    return DbImage(values=np.maximum(db, -float(dynamic_range)), dynamic_range=float(dynamic_range))
