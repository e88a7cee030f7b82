"""OFDM transmitter/receiver with cyclic prefix, postfix, raised-cosine windowing
and edge-subcarrier nulling, plus PAPR and spectral efficiency.

Conventions
-----------
* Subcarrier index ``k`` in ``0..N-1`` sits at baseband frequency
  ``(k - N/2) * delta_f``; the *high* edge of the band is therefore the index
  ``N-1`` at ``(N/2 - 1) * delta_f``.
* One OFDM symbol spans ``T_o = (1 + beta) * T_s`` with ``T_s = T_u + T_cp``:
  ``[CP | useful part | postfix]``, multiplied by the raised-cosine window whose
  rise lies on the CP head and whose fall is the postfix.
* Amplitude: the continuous model carries a ``1/sqrt(T_o)`` factor. Samples
  produced here are ``sqrt(T_o) * s(t)``, i.e. every active subcarrier is a
  tone of amplitude ``|a_k|``. With that scale the mean power of a symbol is
  exactly ``(1 - beta/4) / (1 + beta) * N_u * sigma_a2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .signal import ConfigurationError, DomainError, SampleBuffer, sampled_window

BITS_PER_SYMBOL = {"bpsk": 1, "qpsk": 2}


def _as_int_samples(duration, rate, what):
    n = duration * rate
    k = int(round(n))
    if abs(n - k) > 1e-6:
        raise ConfigurationError(f"{what} is {n:.6f} samples, not an integer at {rate} Hz")
    return k


@dataclass(frozen=True)
class OfdmConfig:
    """Parameters of one OFDM transceiver.

    ``active_set`` defaults to all ``n_total`` subcarriers. Sample counts
    (CP, postfix, symbol) must come out as integers at the simulation rate
    ``oversampling * n_total * delta_f``.
    """

    n_total: int = 128
    delta_f: float = 1.25e6 / 128
    t_cp: float | None = None
    beta: float = 0.0
    modulation: str = "qpsk"
    sigma_a2: float = 1.0
    oversampling: int = 4
    active_set: tuple = field(default=None)

    def __post_init__(self):
        if self.n_total < 1 or self.n_total % 2:
            raise ConfigurationError("n_total must be a positive even integer")
        if self.modulation not in BITS_PER_SYMBOL:
            raise ConfigurationError(f"modulation must be one of {sorted(BITS_PER_SYMBOL)}")
        if not 0.0 <= self.beta < 1.0:
            raise DomainError(f"beta must satisfy 0 <= beta < 1, got {self.beta}")
        if self.oversampling < 1:
            raise ConfigurationError("oversampling must be >= 1")
        if self.sigma_a2 <= 0:
            raise ConfigurationError("sigma_a2 must be > 0")
        if self.t_cp is None:
            object.__setattr__(self, "t_cp", 0.25 / self.delta_f)
        if self.active_set is None:
            active = tuple(range(self.n_total))
        else:
            active = tuple(sorted(set(int(k) for k in self.active_set)))
        if not active:
            raise ConfigurationError("active set is empty")
        if active[0] < 0 or active[-1] >= self.n_total:
            raise ConfigurationError("active set indices must lie in 0..n_total-1")
        object.__setattr__(self, "active_set", active)
        # validate the sample grid eagerly
        self.n_cp, self.n_postfix  # noqa: B018

    @classmethod
    def from_bandwidth(cls, bandwidth: float, n_total: int, **kw) -> "OfdmConfig":
        """Config with ``delta_f = bandwidth / n_total`` and a quarter-length CP."""
        delta_f = bandwidth / n_total
        kw.setdefault("t_cp", 0.25 / delta_f)
        return cls(n_total=n_total, delta_f=delta_f, **kw)

    # durations ---------------------------------------------------------
    @property
    def t_u(self) -> float:
        return 1.0 / self.delta_f

    @property
    def t_s(self) -> float:
        return self.t_u + self.t_cp

    @property
    def t_p(self) -> float:
        return self.beta * self.t_s

    @property
    def t_o(self) -> float:
        return (1.0 + self.beta) * self.t_s

    @property
    def bandwidth(self) -> float:
        return self.n_total * self.delta_f

    @property
    def n_active(self) -> int:
        return len(self.active_set)

    @property
    def bits_per_symbol(self) -> int:
        return BITS_PER_SYMBOL[self.modulation]

    @property
    def bits_per_ofdm_symbol(self) -> int:
        return self.n_active * self.bits_per_symbol

    # sample grid -------------------------------------------------------
    @property
    def sample_rate(self) -> float:
        return self.oversampling * self.n_total * self.delta_f

    @property
    def n_fft(self) -> int:
        return self.oversampling * self.n_total

    @property
    def n_cp(self) -> int:
        return _as_int_samples(self.t_cp, self.sample_rate, "T_cp")

    @property
    def n_base(self) -> int:
        """Samples in ``T_s``."""
        return self.n_fft + self.n_cp

    @property
    def n_postfix(self) -> int:
        return _as_int_samples(self.beta * self.n_base, 1.0, "T_p")

    @property
    def n_symbol(self) -> int:
        """Samples in ``T_o``."""
        return self.n_base + self.n_postfix

    def subcarrier_freqs(self) -> np.ndarray:
        """Baseband frequency (Hz) of each active subcarrier."""
        return (np.asarray(self.active_set) - self.n_total // 2) * self.delta_f

    def fft_bins(self) -> np.ndarray:
        return (np.asarray(self.active_set) - self.n_total // 2) % self.n_fft

    def window(self) -> np.ndarray:
        return sampled_window(self.n_symbol, self.n_base, self.beta)

    def with_(self, **changes) -> "OfdmConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class OfdmFrame:
    """Data symbols (``n_symbols x N_u``, ordered like ``active_set``) and their bits."""

    data_symbols: np.ndarray
    bits: np.ndarray

    @property
    def n_symbols(self) -> int:
        return self.data_symbols.shape[0]


def map_bits(bits, modulation: str, sigma2: float = 1.0) -> np.ndarray:
    """Gray-mapped PSK points of power ``sigma2``.

    BPSK: ``0 -> +1``, ``1 -> -1``. QPSK: the first bit of each pair drives the
    in-phase sign and the second the quadrature sign, so ``00 -> (+1+1j)/sqrt(2)``.
    """
    bits = np.asarray(bits, dtype=np.int8)
    m = BITS_PER_SYMBOL[modulation]
    if bits.size % m:
        raise ValueError(f"bit count {bits.size} not divisible by {m}")
    amp = np.sqrt(sigma2)
    if m == 1:
        return amp * (1.0 - 2.0 * bits).astype(complex)
    pairs = bits.reshape(-1, 2)
    return amp / np.sqrt(2) * ((1.0 - 2.0 * pairs[:, 0]) + 1j * (1.0 - 2.0 * pairs[:, 1]))


def demap_symbols(symbols, modulation: str) -> np.ndarray:
    """Hard decisions, inverse of :func:`map_bits`."""
    y = np.asarray(symbols).ravel()
    if BITS_PER_SYMBOL[modulation] == 1:
        return (y.real < 0).astype(np.int8)
    out = np.empty((y.size, 2), dtype=np.int8)
    out[:, 0] = y.real < 0
    out[:, 1] = y.imag < 0
    return out.ravel()


def random_frame(cfg: OfdmConfig, n_symbols: int, rng) -> OfdmFrame:
    bits = rng.integers(0, 2, size=n_symbols * cfg.bits_per_ofdm_symbol, dtype=np.int8)
    data = map_bits(bits, cfg.modulation, cfg.sigma_a2).reshape(n_symbols, cfg.n_active)
    return OfdmFrame(data, bits)


def modulate_symbols(data: np.ndarray, cfg: OfdmConfig) -> np.ndarray:
    """Windowed time-domain symbols, shape ``(n_symbols, n_symbol)``."""
    data = np.atleast_2d(data)
    if data.shape[1] != cfg.n_active:
        raise ValueError(f"expected {cfg.n_active} values per symbol, got {data.shape[1]}")
    spectrum = np.zeros((data.shape[0], cfg.n_fft), dtype=complex)
    spectrum[:, cfg.fft_bins()] = data
    core = np.fft.ifft(spectrum, axis=1) * cfg.n_fft
    parts = [core[:, cfg.n_fft - cfg.n_cp:], core]
    if cfg.n_postfix:
        parts.append(core[:, : cfg.n_postfix])
    sym = np.concatenate(parts, axis=1)
    if cfg.beta > 0:
        sym *= cfg.window()
    return sym


def ofdm_modulate(frame: OfdmFrame, cfg: OfdmConfig) -> SampleBuffer:
    """Concatenate windowed symbols at stride ``T_o`` (no overlap)."""
    return SampleBuffer(modulate_symbols(frame.data_symbols, cfg).ravel(), cfg.sample_rate)


def channel_response(taps, tap_spacing_samples: int, cfg: OfdmConfig) -> np.ndarray:
    """Per-active-subcarrier frequency response of a sparse tap-delay line."""
    taps = np.asarray(taps, dtype=complex)
    delays = np.arange(taps.size) * tap_spacing_samples / cfg.sample_rate
    return np.exp(-2j * np.pi * np.outer(cfg.subcarrier_freqs(), delays)) @ taps


def ofdm_equalized_symbols(rx, cfg: OfdmConfig, csi=None, n_symbols: int | None = None) -> np.ndarray:
    """Strip CP/postfix, FFT the useful part, divide by ``csi``.

    ``csi`` is one gain per active subcarrier or an ``(n_symbols, N_u)`` array.
    Trailing samples past the last complete symbol (channel tails) are ignored.
    """
    x = rx.samples if isinstance(rx, SampleBuffer) else np.asarray(rx)
    if n_symbols is None:
        n_symbols = x.size // cfg.n_symbol
    if n_symbols * cfg.n_symbol > x.size:
        raise ValueError("buffer shorter than the requested number of symbols")
    sym = x[: n_symbols * cfg.n_symbol].reshape(n_symbols, cfg.n_symbol)
    core = sym[:, cfg.n_cp: cfg.n_cp + cfg.n_fft]
    y = np.fft.fft(core, axis=1)[:, cfg.fft_bins()] / cfg.n_fft
    if csi is not None:
        csi = np.asarray(csi, dtype=complex)
        if np.any(np.abs(csi) == 0):
            raise ZeroDivisionError("csi has a zero gain on an active subcarrier")
        y = y / csi
    return y


def ofdm_demodulate(rx, cfg: OfdmConfig, csi=None, n_symbols: int | None = None) -> np.ndarray:
    """Recovered bits for the active subcarriers (perfect timing assumed)."""
    return demap_symbols(ofdm_equalized_symbols(rx, cfg, csi, n_symbols), cfg.modulation)


def null_edge_subcarriers(cfg: OfdmConfig, count: int, edge: str = "high") -> OfdmConfig:
    """Drop the ``count`` active subcarriers nearest to the given band edge."""
    if count < 0:
        raise ValueError("count must be >= 0")
    if count >= cfg.n_active:
        raise ValueError(f"cannot null {count} of {cfg.n_active} active subcarriers")
    if count == 0:
        return cfg
    if edge == "high":
        keep = cfg.active_set[:-count]
    elif edge == "low":
        keep = cfg.active_set[count:]
    else:
        raise ValueError("edge must be 'low' or 'high'")
    return cfg.with_(active_set=keep)


def papr(symbol_samples) -> float:
    """Peak over mean instantaneous power (linear) of one symbol's ``[0, T_s)`` core."""
    x = symbol_samples.samples if isinstance(symbol_samples, SampleBuffer) else np.asarray(symbol_samples)
    if x.size == 0:
        raise ValueError("empty symbol")
    p = x.real**2 + x.imag**2
    mean = p.mean()
    if mean == 0:
        raise ZeroDivisionError("zero mean power")
    return float(p.max() / mean)


def symbol_paprs(data: np.ndarray, cfg: OfdmConfig) -> np.ndarray:
    """Vectorised :func:`papr` for every symbol of ``data`` (over ``[0, T_s)``)."""
    core = modulate_symbols(data, cfg)[:, : cfg.n_base]
    p = core.real**2 + core.imag**2
    return p.max(axis=1) / p.mean(axis=1)


def spectral_efficiency(cfg: OfdmConfig) -> float:
    """``m N_u / (T_s (1 + beta))`` bits/s over the ``N delta_f`` bandwidth, in (bit/s)/Hz."""
    rate = cfg.bits_per_symbol * cfg.n_active / (cfg.t_s * (1.0 + cfg.beta))
    return rate / cfg.bandwidth
