"""Fourier diagnostics of stroboscopic signals.

The period-doubling diagnostic is the relative subharmonic spectral
weight: the fraction of a signal's oscillatory power sitting in a narrow
band around f = 1/(2T) after the transient is discarded and the mean
removed. The analysis window length is kept a power of two so the
subharmonic frequency falls exactly on a bin and no peak interpolation
is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import TimeSeries

# below this total oscillatory power (relative to the window length) a
# signal is treated as static and assigned weight 0
STATIC_POWER_CUTOFF = 1e-12


def _series_values(series) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return np.asarray(series.values, dtype=float)
    return np.asarray(series, dtype=float)


def dynamic_signal(series, discard: int) -> np.ndarray:
    """Drop the first `discard` samples and subtract the remaining mean."""
    values = _series_values(series)
    if discard < 0:
        raise ValueError(f"discard must be >= 0, got {discard}")
    if len(values) <= discard:
        raise ValueError(f"series of length {len(values)} is too short to discard {discard}")
    tail = values[discard:]
    return tail - tail.mean()


@dataclass
class PowerSpectrum:
    """P_k = |DFT_k|^2 of a real signal; bin frequencies f_k = k/(M T)."""

    powers: np.ndarray
    period: float = 1.0

    @property
    def sample_count(self) -> int:
        return len(self.powers)

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(self.sample_count) / (self.sample_count * self.period)


def power_spectrum(signal: np.ndarray, period: float = 1.0) -> PowerSpectrum:
    """Dense power spectrum of a real signal of even length >= 4.

    Computed from the half spectrum and mirrored, so the real-signal
    symmetry P_k = P_{M-k} holds exactly.
    """
    x = np.asarray(signal, dtype=float)
    m = len(x)
    if m < 4 or m % 2:
        raise ValueError(f"signal length must be even and >= 4, got {m}")
    half = np.abs(np.fft.rfft(x)) ** 2  # bins 0..M/2
    powers = np.concatenate([half, half[-2:0:-1]])
    return PowerSpectrum(powers=powers, period=period)


# halfwidth of the subharmonic band as a fraction of the sampling rate 1/T.
# Robust period doubling with a slow beat envelope puts its power in
# sidebands a few bins around f = 1/2T rather than in the single Nyquist
# bin, so the diagnostic integrates a narrow band: +-2 bins at the default
# 512-sample window. Below 250 samples this floors to the single f = 1/2T
# bin.
SUBHARMONIC_BAND_FRACTION = 0.004


def subharmonic_band(samples: int, band_fraction: float = SUBHARMONIC_BAND_FRACTION) -> tuple[int, int]:
    """Inclusive bin range [lo, hi] counted as the subharmonic response."""
    radius = int(band_fraction * samples)
    return max(1, samples // 2 - radius), samples // 2 + radius


@dataclass
class SubharmonicDiagnostic:
    """Relative spectral weight near f = 1/(2T), bounded in [0, 1]."""

    weight: float
    transient_discard: int = 50
    sample_count: int = 512
    band: tuple[int, int] = (256, 256)


def subharmonic_weight(
    series,
    discard: int = 50,
    samples: int = 512,
    period: float | None = None,
    band_fraction: float = SUBHARMONIC_BAND_FRACTION,
) -> SubharmonicDiagnostic:
    """Fraction of oscillatory power in the subharmonic (f = 1/2T) band.

    Uses the mean-subtracted window values[discard : discard + samples].
    A static signal (negligible total power in the nonzero bins) gets
    weight 0 by convention.
    """
    values = _series_values(series)
    if samples < 4 or samples % 2:
        raise ValueError(f"samples must be even and >= 4, got {samples}")
    if len(values) < discard + samples:
        raise ValueError(
            f"series of length {len(values)} cannot provide {discard} transient + {samples} analysis samples"
        )
    if period is None:
        period = series.period if isinstance(series, TimeSeries) else 1.0
    window = values[discard : discard + samples]
    window = window - window.mean()
    spectrum = power_spectrum(window, period=period)
    total = float(spectrum.powers[1:].sum())
    lo, hi = subharmonic_band(samples, band_fraction)
    if total < STATIC_POWER_CUTOFF * samples:
        weight = 0.0
    else:
        weight = float(spectrum.powers[lo : hi + 1].sum() / total)
    return SubharmonicDiagnostic(
        weight=weight, transient_discard=discard, sample_count=samples, band=(lo, hi)
    )
