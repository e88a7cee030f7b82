"""Narrow-band single-carrier QPSK transceiver with RRC pulse shaping.

The transmitted waveform is ``sum_k b_k p(t - kT - xi)`` with a unit-energy
RRC pulse ``p``. On a grid with ``sps`` samples per symbol the pulse of symbol
``k`` is centred on sample ``k*sps + span*sps/2 + xi*fs``; the buffer starts
where the first (truncated) pulse starts.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy import signal as sps_

from .ofdm import demap_symbols, map_bits
from .signal import ConfigurationError, DomainError, SampleBuffer, rrc_taps


@dataclass(frozen=True)
class NbConfig:
    """NB system: occupied bandwidth ``bw`` (Hz), RRC roll-off ``alpha``,
    symbol power ``sigma_b2`` and RRC span in symbols."""

    bw: float = 15e3
    alpha: float = 0.35
    sigma_b2: float = 1.0
    span: int = 24
    modulation: str = "qpsk"

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError(f"alpha must satisfy 0 <= alpha <= 1, got {self.alpha}")
        if self.bw <= 0 or self.sigma_b2 <= 0:
            raise ConfigurationError("bw and sigma_b2 must be > 0")
        if self.modulation != "qpsk":
            raise ConfigurationError("only QPSK is supported for the NB system")

    @property
    def symbol_rate(self) -> float:
        return self.bw / (1.0 + self.alpha)

    @property
    def symbol_period(self) -> float:
        return (1.0 + self.alpha) / self.bw

    @property
    def bits_per_symbol(self) -> int:
        return 2

    def samples_per_symbol(self, sample_rate: float) -> int:
        n = sample_rate * self.symbol_period
        k = int(round(n))
        if abs(n - k) > 1e-6 or k < 2:
            raise ConfigurationError(f"{sample_rate} Hz gives {n:.6f} samples per NB symbol (need an integer >= 2)")
        return k

    def draw_xi(self, rng) -> float:
        """Timing offset, uniform on ``[0, T)``."""
        return float(rng.uniform(0.0, self.symbol_period))

    def with_(self, **changes) -> "NbConfig":
        return replace(self, **changes)


def _split_delay(xi, sample_rate, sps):
    if not 0.0 <= xi < sps / sample_rate + 1e-15:
        raise DomainError("xi must lie in [0, T)")
    pos = xi * sample_rate
    if abs(pos - round(pos)) < 1e-9:
        pos = float(round(pos))
    whole = int(np.floor(pos))
    return whole, pos - whole


def nb_modulate(symbols, cfg: NbConfig, sample_rate: float, xi: float = 0.0) -> SampleBuffer:
    """RRC-shaped pulse train, leading and trailing transients included.

    The fractional part of ``xi`` is realised by evaluating the pulse on a
    shifted grid, the integer part by leading zeros.
    """
    sps = cfg.samples_per_symbol(sample_rate)
    whole, frac = _split_delay(xi, sample_rate, sps)
    taps = rrc_taps(cfg.alpha, cfg.span, sps, offset=frac)
    y = sps_.upfirdn(taps, np.asarray(symbols, dtype=complex), up=sps)
    y = y[: (len(symbols) - 1) * sps + taps.size]
    if whole:
        y = np.concatenate([np.zeros(whole, dtype=complex), y])
    return SampleBuffer(y, sample_rate)


def nb_decision_statistics(rx: SampleBuffer, cfg: NbConfig, xi: float = 0.0, n_symbols: int | None = None):
    """Matched-filter output sampled at the symbol instants (no gain correction)."""
    sps = cfg.samples_per_symbol(rx.sample_rate)
    whole, frac = _split_delay(xi, rx.sample_rate, sps)
    taps = rrc_taps(cfg.alpha, cfg.span, sps, offset=frac)
    x = rx.samples[whole:]
    # full convolution with the matched filter peaks for symbol k at k*sps + span*sps
    y = sps_.upfirdn(np.conj(taps[::-1]), x, down=sps)[cfg.span:]
    available = (x.size - taps.size) // sps + 1
    if n_symbols is None:
        n_symbols = available
    if n_symbols > available:
        raise ValueError(f"buffer holds {available} complete symbols, {n_symbols} requested")
    return y[:n_symbols]


def nb_receive(rx: SampleBuffer, cfg: NbConfig, xi: float = 0.0, flat_gain=1.0, n_symbols: int | None = None):
    """Matched filter, symbol-rate sampling, gain correction and hard QPSK decisions.

    ``flat_gain`` is a scalar or one complex gain per symbol (genie CSI).
    """
    gain = np.asarray(flat_gain, dtype=complex)
    if np.any(gain == 0):
        raise ZeroDivisionError("flat_gain must be non-zero")
    z = nb_decision_statistics(rx, cfg, xi, n_symbols)
    return demap_symbols(z / gain, "qpsk")


def matched_filter_output(rx: SampleBuffer, cfg: NbConfig) -> np.ndarray:
    """Full-rate matched-filter output (steady-state part only)."""
    sps = cfg.samples_per_symbol(rx.sample_rate)
    taps = rrc_taps(cfg.alpha, cfg.span, sps)
    return sps_.oaconvolve(rx.samples, np.conj(taps[::-1]), mode="valid")


def nb_mf_power_theory(cfg: NbConfig) -> float:
    """Mean matched-filter output power ``sigma_b2 * (1 - alpha/4)``."""
    return cfg.sigma_b2 * (1.0 - cfg.alpha / 4.0)


def random_qpsk(cfg: NbConfig, n_symbols: int, rng):
    bits = rng.integers(0, 2, size=2 * n_symbols, dtype=np.int8)
    return bits, map_bits(bits, "qpsk", cfg.sigma_b2)
