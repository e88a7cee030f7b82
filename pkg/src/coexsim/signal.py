"""Complex-baseband DSP primitives shared by the OFDM and NB transceivers.

Everything here is a pure function of its inputs. Waveforms travel as
:class:`SampleBuffer` objects (samples + sample rate); the arrays inside are
never modified in place.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import signal as sps


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ConfigurationError(ValueError):
    """A parameter combination cannot be realised (e.g. non-integer sample counts)."""


@dataclass(frozen=True)
class SampleBuffer:
    """Uniformly sampled complex baseband signal."""

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        if not self.sample_rate > 0:
            raise DomainError(f"sample_rate must be > 0, got {self.sample_rate}")
        x = np.asarray(self.samples, dtype=complex)
        if x.ndim != 1:
            raise DomainError("samples must be one-dimensional")
        if not np.all(np.isfinite(x)):
            raise DomainError("samples must be finite")
        x.flags.writeable = False
        object.__setattr__(self, "samples", x)

    def __len__(self):
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    def with_samples(self, samples) -> "SampleBuffer":
        return SampleBuffer(samples, self.sample_rate)


@dataclass(frozen=True)
class WindowSpec:
    """Raised-cosine window: roll-off ``beta`` over a base duration ``t_s`` (seconds)."""

    beta: float
    t_s: float

    def __post_init__(self):
        if not 0.0 <= self.beta < 1.0:
            raise DomainError(f"beta must satisfy 0 <= beta < 1, got {self.beta}")
        if not self.t_s > 0:
            raise DomainError(f"t_s must be > 0, got {self.t_s}")

    @property
    def length(self) -> float:
        return (1.0 + self.beta) * self.t_s


def _window_values(t, beta, t_s):
    t = np.asarray(t, dtype=float)
    out = np.ones_like(t)
    if beta == 0.0:
        return out
    ramp = beta * t_s
    rise = t < ramp
    fall = t >= t_s
    out[rise] = 0.5 + 0.5 * np.cos(np.pi + np.pi * t[rise] / ramp)
    out[fall] = 0.5 + 0.5 * np.cos(np.pi * (t[fall] - t_s) / ramp)
    return out


def raised_cosine_window(t, spec: WindowSpec):
    """Evaluate the three-branch raised-cosine window at time(s) ``t``.

    The rise occupies ``[0, beta*t_s)``, the flat part ``[beta*t_s, t_s)`` and
    the fall ``[t_s, (1+beta)*t_s)``. The fall is the time-mirrored rise, so the
    window is continuous everywhere. Scalars in, scalar out.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(arr >= spec.length):
        raise DomainError(f"t outside window support [0, {spec.length})")
    values = _window_values(np.atleast_1d(arr), spec.beta, spec.t_s)
    return float(values[0]) if arr.ndim == 0 else values


def sampled_window(n_samples: int, n_base: int, beta: float) -> np.ndarray:
    """Raised-cosine window on the grid ``t = n / fs`` with ``t_s = n_base / fs``."""
    return _window_values(np.arange(n_samples, dtype=float), beta, float(n_base))


def rrc_pulse(t, alpha: float, symbol_period: float) -> np.ndarray:
    """Root-raised-cosine impulse response (un-normalised, peak ~ 1 - a + 4a/pi).

    The removable singularities at ``t = 0`` and ``|t| = T/(4 alpha)`` are
    replaced by their limits. ``alpha = 0`` gives the sinc pulse.
    """
    x = np.asarray(t, dtype=float) / symbol_period
    out = np.empty_like(x)
    at_zero = np.isclose(x, 0.0, atol=1e-9)
    if alpha > 0:
        at_sing = np.isclose(np.abs(x), 1.0 / (4.0 * alpha), rtol=0, atol=1e-9)
    else:
        at_sing = np.zeros_like(at_zero)
    regular = ~(at_zero | at_sing)
    xr = x[regular]
    num = np.sin(np.pi * xr * (1 - alpha)) + 4 * alpha * xr * np.cos(np.pi * xr * (1 + alpha))
    den = np.pi * xr * (1 - (4 * alpha * xr) ** 2)
    out[regular] = num / den
    out[at_zero] = 1 - alpha + 4 * alpha / np.pi
    if np.any(at_sing):
        q = np.pi / (4 * alpha)
        out[at_sing] = alpha / np.sqrt(2) * ((1 + 2 / np.pi) * np.sin(q) + (1 - 2 / np.pi) * np.cos(q))
    return out


def rrc_taps(alpha: float, span_symbols: int, samples_per_symbol: int, offset: float = 0.0) -> np.ndarray:
    """Unit-energy, symmetric RRC taps of length ``span_symbols*samples_per_symbol + 1``.

    ``offset`` (fraction of a sample, ``0 <= offset < 1``) evaluates the same
    continuous pulse on a grid delayed by ``offset`` samples; the normalisation
    constant is that of the centred pulse so delayed copies stay the same
    continuous waveform. A non-zero offset breaks the exact tap symmetry.
    """
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must satisfy 0 <= alpha <= 1, got {alpha}")
    if span_symbols < 8:
        raise DomainError("span_symbols must be >= 8")
    if samples_per_symbol < 2:
        raise DomainError("samples_per_symbol must be >= 2")
    n = span_symbols * samples_per_symbol + 1
    half = (n - 1) / 2
    grid = np.arange(n, dtype=float) - half
    centred = rrc_pulse(grid, alpha, samples_per_symbol)
    norm = np.sqrt(np.sum(centred**2))
    if offset == 0.0:
        return centred / norm
    return rrc_pulse(grid - offset, alpha, samples_per_symbol) / norm


def frequency_shift(sig: SampleBuffer, f: float) -> SampleBuffer:
    """Multiply sample ``n`` by ``exp(i 2 pi f n / fs)``."""
    if abs(f) >= sig.sample_rate / 2:
        raise DomainError(f"|f|={abs(f)} Hz is not below Nyquist ({sig.sample_rate / 2} Hz)")
    if f == 0:
        return sig
    return sig.with_samples(sig.samples * phasor(f, sig.sample_rate, len(sig)))


def phasor(f: float, sample_rate: float, n: int) -> np.ndarray:
    return np.exp(2j * np.pi * (f / sample_rate) * np.arange(n))


def rational_ratio(source_rate: float, target_rate: float, max_term: int = 100_000):
    """Return ``(up, down)`` with ``target/source == up/down`` exactly (to 1e-12)."""
    ratio = Fraction(target_rate / source_rate).limit_denominator(max_term)
    if abs(float(ratio) * source_rate - target_rate) > 1e-9 * target_rate:
        raise ConfigurationError(f"no rational ratio for {source_rate} -> {target_rate} Hz")
    if ratio.numerator > max_term:
        raise ConfigurationError(f"resampling ratio {ratio} too large")
    return ratio.numerator, ratio.denominator


def design_resampler(up: int, down: int, passband: float | None = None, attenuation_db: float = 100.0):
    """Unit-DC-gain low-pass prototype (at ``up`` times the source rate) for ``resample_poly``.

    Frequencies are normalised to the source rate. Without ``passband`` the
    filter keeps 80 % of the narrower Nyquist band and stops at its edge. With
    ``passband`` (one-sided, normalised) the stopband starts where aliases would
    first land inside ``passband``, which allows much shorter filters.
    """
    out_nyq = min(0.5, 0.5 * up / down)
    if passband is None:
        f_pass = 0.8 * out_nyq
        f_stop = out_nyq
    else:
        f_pass = passband
        f_stop = min(2 * out_nyq - passband, 2 * out_nyq) if up < down else out_nyq
        f_stop = max(f_stop, f_pass * 1.05)
    width = (f_stop - f_pass) / up
    numtaps, beta = sps.kaiserord(attenuation_db, 2 * width)
    numtaps |= 1
    cutoff = 0.5 * (f_pass + f_stop) / up
    # resample_poly applies the factor `up` itself
    return sps.firwin(numtaps, 2 * cutoff, window=("kaiser", beta))


def resample(sig: SampleBuffer, target_rate: float, passband: float | None = None) -> SampleBuffer:
    """Band-limited rational-ratio resampling (polyphase).

    ``passband`` is the one-sided bandwidth in Hz that must survive unaliased;
    by default 80 % of the narrower Nyquist band is preserved.
    """
    if not target_rate > 0:
        raise DomainError("target_rate must be > 0")
    up, down = rational_ratio(sig.sample_rate, target_rate)
    if up == down:
        return sig
    norm_pass = None if passband is None else passband / sig.sample_rate
    h = _cached_resampler(up, down, norm_pass)
    y = sps.resample_poly(sig.samples, up, down, window=h)
    return SampleBuffer(y, target_rate)


_RESAMPLER_CACHE: dict = {}


def _cached_resampler(up, down, passband):
    key = (up, down, passband)
    if key not in _RESAMPLER_CACHE:
        _RESAMPLER_CACHE[key] = design_resampler(up, down, passband)
    return _RESAMPLER_CACHE[key]


def measure_power(sig) -> float:
    """Mean squared magnitude; 0 for an empty buffer. Accepts buffers or arrays."""
    x = sig.samples if isinstance(sig, SampleBuffer) else np.asarray(sig)
    if x.size == 0:
        return 0.0
    return float(np.mean(x.real**2 + x.imag**2))
