"""AWGN, flat Rayleigh and exponential-PDP frequency-selective Rayleigh channels.

Fading is block fading: a realisation is drawn per block and held constant
across it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal import ConfigurationError, SampleBuffer


@dataclass(frozen=True)
class PdpProfile:
    tap_count: int
    decay: float
    avg_powers: np.ndarray


@dataclass(frozen=True)
class ChannelRealization:
    taps: np.ndarray
    tap_spacing: float

    def spacing_samples(self, sample_rate: float) -> int:
        n = self.tap_spacing * sample_rate
        k = int(round(n))
        if abs(n - k) > 1e-6 or k < 1:
            raise ConfigurationError(f"tap spacing is {n:.4f} samples at {sample_rate} Hz (need an integer >= 1)")
        return k


def exp_pdp_profile(j_count: int = 5, decay: float = 0.2) -> PdpProfile:
    """Tap powers ``E_h * exp(-j * decay)``, ``j = 0..J-1``, normalised to sum 1."""
    if j_count < 1:
        raise ValueError("j_count must be >= 1")
    if decay < 0:
        raise ValueError("decay must be >= 0")
    p = np.exp(-decay * np.arange(j_count))
    return PdpProfile(j_count, decay, p / p.sum())


def complex_gaussian(rng, size=None, variance=1.0):
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def draw_realization(profile: PdpProfile, tap_spacing: float, rng) -> ChannelRealization:
    """Independent CN(0, avg_powers[j]) taps on the delay grid ``j * tap_spacing``."""
    if tap_spacing <= 0:
        raise ValueError("tap_spacing must be > 0")
    taps = complex_gaussian(rng, profile.tap_count) * np.sqrt(profile.avg_powers)
    return ChannelRealization(taps, tap_spacing)


def flat_rayleigh(rng) -> complex:
    """One CN(0, 1) gain."""
    return complex(complex_gaussian(rng))


def sparse_filter(taps, spacing: int) -> np.ndarray:
    h = np.zeros((len(taps) - 1) * spacing + 1, dtype=complex)
    h[::spacing] = taps
    return h


def apply_multipath(sig: SampleBuffer, ch: ChannelRealization) -> SampleBuffer:
    """Linear convolution with the tap-delay line; output grows by the delay spread."""
    s = ch.spacing_samples(sig.sample_rate)
    x = sig.samples
    out = np.zeros(x.size + (len(ch.taps) - 1) * s, dtype=complex)
    for j, h in enumerate(ch.taps):
        out[j * s: j * s + x.size] += h * x
    return sig.with_samples(out)


def apply_awgn(sig: SampleBuffer, noise_psd: float, rng) -> SampleBuffer:
    """Add circular white Gaussian noise of variance ``noise_psd * sample_rate`` per sample."""
    var = noise_psd * sig.sample_rate
    if var < 0:
        raise ValueError("noise variance must be >= 0")
    if var == 0:
        return sig
    return sig.with_samples(sig.samples + complex_gaussian(rng, len(sig), var))
