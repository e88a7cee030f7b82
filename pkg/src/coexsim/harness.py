"""Experiment runner: BER sweeps, threshold searches, PSD estimates and CSV output."""

from __future__ import annotations

import io
import logging
import math
from dataclasses import dataclass, field, fields, is_dataclass
from importlib import metadata
from pathlib import Path

import numpy as np
from scipy import signal as sps_

from .coexist import ScenarioConfig, calibrate_scenario, simulate_ber
from .metrics import BerEstimate, StopRule, meets_target
from .nb import NbConfig, nb_modulate, random_qpsk
from .ofdm import OfdmConfig, modulate_symbols, random_frame
from .signal import ConfigurationError, DomainError, SampleBuffer

log = logging.getLogger(__name__)

AXES = ("f_n", "sir_db", "beta", "nulled_count", "cu_subcarriers", "eb_no_db")
CSV_COLUMNS = ("bits", "errors", "ber", "ci_low", "ci_high", "note")


@dataclass(frozen=True)
class SweepSpec:
    """A scenario template swept along one axis.

    ``cu_hold`` decides what stays fixed on the ``cu_subcarriers`` axis:
    ``"bandwidth"`` (subcarrier spacing scales as BW/N) or ``"spacing"``.
    """

    scenario: ScenarioConfig
    axis: str
    grid: tuple
    seed: int = 0
    stop_rule: StopRule = field(default_factory=StopRule)
    name: str = "sweep"
    cu_hold: str = "bandwidth"

    def __post_init__(self):
        if self.axis not in AXES:
            raise ConfigurationError(f"axis must be one of {AXES}, got {self.axis!r}")
        grid = tuple(float(v) for v in self.grid)
        if not grid:
            raise ConfigurationError("grid must not be empty")
        d = np.diff(grid)
        if not (np.all(d > 0) or np.all(d < 0)):
            raise ConfigurationError("grid must be strictly monotone")
        if self.axis in ("nulled_count", "cu_subcarriers") and any(v != int(v) for v in grid):
            raise ConfigurationError(f"{self.axis} grid values must be integers")
        if self.cu_hold not in ("bandwidth", "spacing"):
            raise ConfigurationError("cu_hold must be 'bandwidth' or 'spacing'")
        if self.seed < 0:
            raise ConfigurationError("seed must be >= 0")
        object.__setattr__(self, "grid", grid)


@dataclass(frozen=True)
class PointResult:
    value: float
    estimate: BerEstimate | None
    note: str = ""

    @property
    def feasible(self) -> bool:
        return self.estimate is not None


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a grid search for the first point meeting the target BER.

    ``threshold_value`` is ``None`` when no evaluated grid point passes.
    """

    threshold_value: float | None
    ber_at_threshold: BerEstimate | None
    full_curve: tuple
    target: float
    violations: tuple = ()

    @property
    def reachable(self) -> bool:
        return self.threshold_value is not None


def scenario_at(spec: SweepSpec, value: float) -> ScenarioConfig:
    """The template scenario with the swept parameter set to ``value``."""
    scn = spec.scenario
    if spec.axis == "f_n":
        return scn.with_(f_n=value)
    if spec.axis == "sir_db":
        return scn.with_(sir_db=value)
    if spec.axis == "eb_no_db":
        return scn.with_(eb_no_db=value)
    if spec.axis == "beta":
        return scn.with_(cu=scn.cu.with_(beta=value))
    if spec.axis == "nulled_count":
        return scn.with_(cu_nulled=int(value))
    n = int(value)
    cu = scn.cu
    common = dict(beta=cu.beta, modulation=cu.modulation, sigma_a2=cu.sigma_a2)
    if spec.cu_hold == "bandwidth":
        new = OfdmConfig.from_bandwidth(cu.bandwidth, n, oversampling=cu.oversampling, **common)
    else:
        ratio = scn.composite_rate / (n * cu.delta_f)
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ConfigurationError(f"N={n} at fixed spacing does not fit the composite rate")
        new = OfdmConfig(n_total=n, delta_f=cu.delta_f, oversampling=int(round(ratio)), **common)
    return scn.with_(cu=new)


def evaluate_point(spec: SweepSpec, index: int, threads: int = 1, stop: StopRule | None = None) -> PointResult:
    value = spec.grid[index]
    try:
        scn = scenario_at(spec, value)
        cal = calibrate_scenario(scn, spec.seed)
    except (ConfigurationError, DomainError) as exc:
        return PointResult(value, None, f"infeasible: {exc}")
    est = simulate_ber(scn, cal, spec.seed, stop or spec.stop_rule, point=index, threads=threads)
    log.info("%s=%g: %d/%d errors, ber=%.3e", spec.axis, value, est.bit_errors, est.bits_total, est.ber)
    return PointResult(value, est)


def run_ber_sweep(spec: SweepSpec, threads: int = 1) -> list[PointResult]:
    """BER at every grid point; infeasible points are reported, not raised."""
    return [evaluate_point(spec, i, threads) for i in range(len(spec.grid))]


def _monotonicity_violations(curve) -> tuple:
    """Grid values where the BER rises with CI separation from an earlier point."""
    out = []
    best_high = math.inf
    for pt in curve:
        if pt.estimate is None:
            continue
        if pt.estimate.ci_low > best_high:
            out.append(pt.value)
        best_high = min(best_high, pt.estimate.ci_high)
    return tuple(out)


def _search(spec: SweepSpec, target: float, threads: int, exhaustive: bool) -> SearchResult:
    stop = StopRule(spec.stop_rule.min_errors, spec.stop_rule.max_bits, target, spec.stop_rule.decisive_z)
    curve = []
    found = None
    for i in range(len(spec.grid)):
        pt = evaluate_point(spec, i, threads, stop)
        curve.append(pt)
        if found is None and pt.estimate is not None and meets_target(pt.estimate, target):
            found = pt
            if not exhaustive:
                break
    violations = _monotonicity_violations(curve)
    if violations:
        log.warning("BER not monotone along %s at %s", spec.axis, violations)
    if found is None:
        return SearchResult(None, None, tuple(curve), target, violations)
    return SearchResult(found.value, found.estimate, tuple(curve), target, violations)


def find_min_separation(spec: SweepSpec, target_ber: float = 1e-4, threads: int = 1, exhaustive: bool = False):
    """Smallest ``F_n`` on the grid whose BER passes the target test.

    The grid is scanned in order and, unless ``exhaustive``, the scan stops at
    the first passing point.
    """
    if spec.axis != "f_n":
        raise ConfigurationError("find_min_separation needs an f_n axis")
    return _search(spec, target_ber, threads, exhaustive)


def find_min_nulled(spec: SweepSpec, target_ber: float = 1e-4, threads: int = 1, exhaustive: bool = False):
    """Smallest number of nulled CU edge subcarriers passing the target test."""
    if spec.axis != "nulled_count":
        raise ConfigurationError("find_min_nulled needs a nulled_count axis")
    return _search(spec, target_ber, threads, exhaustive)


# -- CSV ------------------------------------------------------------------


def _fmt_value(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def sweep_csv(axis: str, results) -> str:
    """CSV text: ``<axis>,bits,errors,ber,ci_low,ci_high,note``."""
    buf = io.StringIO()
    buf.write(",".join((axis,) + CSV_COLUMNS) + "\n")
    for pt in results:
        if pt.estimate is None:
            buf.write(f"{_fmt_value(pt.value)},,,,,,{pt.note.replace(',', ';')}\n")
            continue
        e = pt.estimate
        buf.write(
            f"{_fmt_value(pt.value)},{e.bits_total},{e.bit_errors},{e.ber:.6e},{e.ci_low:.6e},{e.ci_high:.6e},{pt.note}\n"
        )
    return buf.getvalue()


def search_csv(axis: str, result: SearchResult) -> str:
    text = sweep_csv(axis, result.full_curve)
    thr = "unreachable" if result.threshold_value is None else _fmt_value(result.threshold_value)
    return text + f"# threshold={thr} target={result.target:.6e}\n"


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(text.encode())
    return path


# -- PSD ------------------------------------------------------------------


def psd_of(sig: SampleBuffer, nperseg: int = 4096, averaging: int | None = None):
    """Two-sided Welch PSD (non-overlapping Hann segments), normalised to a 0 dB peak."""
    x = sig.samples
    if averaging is not None:
        x = x[: averaging * nperseg]
    if x.size < nperseg:
        raise ValueError(f"need at least {nperseg} samples, got {x.size}")
    f, p = sps_.welch(x, fs=sig.sample_rate, window="hann", nperseg=nperseg, noverlap=0, return_onesided=False)
    f = np.fft.fftshift(f)
    p = np.fft.fftshift(p)
    p_db = 10.0 * np.log10(np.maximum(p / p.max(), 1e-30))
    return f, p_db


def emit_psd(cfg, averaging: int = 64, seed: int = 0, sample_rate: float = 5e6, nperseg: int = 4096):
    """Averaged periodogram of a random OFDM or NB waveform.

    Returns ``(freq_hz, psd_db)`` normalised to 0 dB peak. OFDM waveforms use
    their own sample rate; NB waveforms are generated at ``sample_rate``.
    """
    if averaging < 1:
        raise ValueError("averaging must be >= 1")
    rng = np.random.default_rng(seed)
    n = averaging * nperseg
    if isinstance(cfg, OfdmConfig):
        n_sym = -(-n // cfg.n_symbol)
        x = modulate_symbols(random_frame(cfg, n_sym, rng).data_symbols, cfg).ravel()
        buf = SampleBuffer(x[:n], cfg.sample_rate)
    elif isinstance(cfg, NbConfig):
        sps = cfg.samples_per_symbol(sample_rate)
        n_sym = -(-n // sps) + cfg.span
        _, b = random_qpsk(cfg, n_sym, rng)
        x = nb_modulate(b, cfg, sample_rate).samples
        start = cfg.span * sps // 2
        buf = SampleBuffer(x[start: start + n], sample_rate)
    else:
        raise TypeError("cfg must be an OfdmConfig or NbConfig")
    return psd_of(buf, nperseg, averaging)


def psd_csv(freqs, psd_db) -> str:
    lines = ["freq_hz,psd_db"] + [f"{f:.6e},{p:.6e}" for f, p in zip(freqs, psd_db)]
    return "\n".join(lines) + "\n"


# -- manifest -------------------------------------------------------------


def code_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def _describe(obj, indent: str = "") -> list[str]:
    lines = []
    for f in fields(obj):
        v = getattr(obj, f.name)
        if is_dataclass(v):
            lines.append(f"{indent}{f.name}: {type(v).__name__}")
            lines.extend(_describe(v, indent + "  "))
        else:
            lines.append(f"{indent}{f.name} = {v!r}")
    return lines


def manifest_text(obj, seed: int, extra: dict | None = None) -> str:
    """Human-readable record of the resolved configuration, seed and versions."""
    lines = [
        f"artifact {code_version()}",
        f"numpy {np.__version__}",
        f"scipy {__import__('scipy').__version__}",
        f"seed = {seed}",
    ]
    for k, v in (extra or {}).items():
        lines.append(f"{k} = {v}")
    lines.append(f"[{type(obj).__name__}]")
    lines.extend(_describe(obj))
    return "\n".join(lines) + "\n"
