"""Coexistence scenarios: an OFDM cognitive user (CU) next to a primary user (PU).

The PU is either a narrow-band (NB) QPSK link or another OFDM link, and either
side can be the victim. The victim always sits at baseband; the interferer is
frequency shifted by the carrier separation, scaled to the requested SIR and
added together with white noise at the victim's Eb/N0.

Geometry
--------
``F_n`` counts subcarrier spacings between the CU band edge (``+BW/2``) and
the PU:

* NB PU, ``f_n_mode="edge"``: PU centre at ``BW/2 + F_n * dF``.
* OFDM PU (and ``f_n_mode="literal"``): PU centre at ``BW + F_n * dF``, which
  for two equal-bandwidth OFDM systems is an edge-to-edge gap of ``F_n * dF``.

``dF`` is the PU subcarrier spacing for an OFDM PU, otherwise the CU's.

SIR reference points
--------------------
* NB victim: time-averaged matched-filter output powers. The interferer gain is
  calibrated with the CU placed at ``sir_ref_f_n`` (default ``F_n = 0``) and then
  held fixed, so moving the CU away lowers the interference. ``sir_ref_f_n=None``
  calibrates at the scenario's own ``F_n``.
* OFDM victim: mean powers at the receiver input.

CU edge nulling (``cu_nulled``) is applied after calibration: the reference
power is measured with every CU subcarrier active and nulling only switches
subcarriers off.

Eb/N0
-----
``Eb`` is the unfaded received signal energy per bit inside the detector's
integration window: the whole pulse for NB, the useful ``T_u`` part for OFDM
(cyclic prefix and postfix excluded).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy import signal as sps_

from .channel import complex_gaussian, exp_pdp_profile, sparse_filter
from .metrics import BerEstimate, StopRule, db2lin, lin2db
from .nb import NbConfig, matched_filter_output, nb_decision_statistics, nb_mf_power_theory, nb_modulate, random_qpsk
from .ofdm import (
    OfdmConfig,
    channel_response,
    demap_symbols,
    modulate_symbols,
    null_edge_subcarriers,
    ofdm_equalized_symbols,
    random_frame,
)
from .signal import ConfigurationError, SampleBuffer, _cached_resampler, phasor, rational_ratio

CHANNELS = ("awgn", "fading")


@dataclass(frozen=True)
class ScenarioConfig:
    """One coexistence experiment.

    ``frame_symbols`` (victim symbols per Monte Carlo trial) and
    ``fading_block`` (victim symbols per fading realisation) default to
    1024 / 16 for an NB victim and 32 / 10 for an OFDM victim.
    """

    cu: OfdmConfig = field(default_factory=OfdmConfig)
    pu: NbConfig | OfdmConfig = field(default_factory=NbConfig)
    victim: str = "pu"
    f_n: float = 10.0
    sir_db: float = 0.0
    eb_no_db: float = 10.0
    channel: str = "awgn"
    composite_rate: float = 5e6
    f_n_mode: str = "edge"
    cu_nulled: int = 0
    sir_ref_f_n: float | None = 0.0
    interferer_fading: bool = True
    nb_rx_sps: int = 8
    frame_symbols: int | None = None
    fading_block: int | None = None
    pdp_taps: int = 5
    pdp_decay: float = 0.2
    tap_spacing: float = 0.8e-6
    shift_victim: bool = False

    def __post_init__(self):
        if self.victim not in ("pu", "cu"):
            raise ConfigurationError("victim must be 'pu' or 'cu'")
        if self.channel not in CHANNELS:
            raise ConfigurationError(f"channel must be one of {CHANNELS}")
        if self.f_n_mode not in ("edge", "literal"):
            raise ConfigurationError("f_n_mode must be 'edge' or 'literal'")
        if self.cu_nulled < 0:
            raise ConfigurationError("cu_nulled must be >= 0")
        for name, cfg in (("cu", self.cu), ("pu", self.pu)):
            if isinstance(cfg, OfdmConfig) and abs(cfg.sample_rate - self.composite_rate) > 1e-6:
                raise ConfigurationError(
                    f"{name} OFDM rate {cfg.sample_rate} Hz differs from composite rate {self.composite_rate} Hz"
                )
        if self.pu_is_nb:
            self.pu.samples_per_symbol(self.composite_rate)
            self.pu.samples_per_symbol(self.nb_rx_rate)
        null_edge_subcarriers(self.cu, self.cu_nulled, "high")
        if self.shift_victim and abs(self.victim_rate - self.composite_rate) > 1e-6 * self.composite_rate:
            raise ConfigurationError("shift_victim needs the victim processed at the composite rate (nb_rx_sps at full rate)")
        self.check_nyquist(self.f_n)

    # roles -------------------------------------------------------------
    @property
    def pu_is_nb(self) -> bool:
        return isinstance(self.pu, NbConfig)

    @property
    def victim_is_nb(self) -> bool:
        return self.victim == "pu" and self.pu_is_nb

    @property
    def cu_effective(self) -> OfdmConfig:
        return null_edge_subcarriers(self.cu, self.cu_nulled, "high")

    @property
    def victim_cfg(self):
        return self.pu if self.victim == "pu" else self.cu_effective

    @property
    def interferer_cfg(self):
        return self.cu_effective if self.victim == "pu" else self.pu

    @property
    def reference_interferer_cfg(self):
        """Interferer used for SIR calibration (CU without nulling)."""
        return self.cu if self.victim == "pu" else self.pu

    @property
    def nb_rx_rate(self) -> float:
        return self.nb_rx_sps * self.pu.symbol_rate if self.pu_is_nb else self.composite_rate

    @property
    def victim_rate(self) -> float:
        return self.nb_rx_rate if self.victim_is_nb else self.composite_rate

    @property
    def frame(self) -> int:
        if self.frame_symbols is not None:
            return self.frame_symbols
        return 1024 if self.victim_is_nb else 32

    @property
    def block(self) -> int:
        if self.fading_block is not None:
            return self.fading_block
        return 16 if self.victim_is_nb else 10

    # geometry ----------------------------------------------------------
    @property
    def f_n_unit(self) -> float:
        return self.pu.delta_f if isinstance(self.pu, OfdmConfig) else self.cu.delta_f

    def carrier_offset(self, f_n: float | None = None) -> float:
        """PU centre frequency relative to the CU centre, Hz."""
        f_n = self.f_n if f_n is None else f_n
        bw = self.cu.bandwidth
        if self.f_n_mode == "literal" or not self.pu_is_nb:
            return bw + f_n * self.f_n_unit
        return bw / 2 + f_n * self.f_n_unit

    def interferer_shift(self, f_n: float | None = None) -> float:
        """Frequency shift applied to the interferer (victim stays at baseband)."""
        fc = self.carrier_offset(f_n)
        return -fc if self.victim == "pu" else fc

    def check_nyquist(self, f_n):
        half_bw = self.interferer_cfg.bandwidth / 2 if isinstance(self.interferer_cfg, OfdmConfig) else self.pu.bw / 2
        if abs(self.carrier_offset(f_n)) + half_bw >= self.composite_rate / 2:
            raise ConfigurationError(
                f"interferer at F_n={f_n} extends past the composite Nyquist frequency {self.composite_rate / 2} Hz"
            )

    def with_(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class Calibration:
    """Interferer amplitude gain and per-sample noise variance at the victim rate."""

    gain: float
    noise_var: float
    victim_power: float
    interferer_power: float
    reference_f_n: float | None


@dataclass(frozen=True)
class SirBreakdown:
    victim_power_measured: float
    interferer_power_measured: float
    sir_measured_db: float
    sir_theory_db: float | None = None
    c_constant: float | None = None


@dataclass(frozen=True)
class ComposedFrame:
    """Victim receiver input plus everything the genie receiver and the scorer need."""

    rx: SampleBuffer
    bits: np.ndarray
    n_symbols: int
    xi: float = 0.0
    gains: np.ndarray | None = None


# -- waveform helpers ---------------------------------------------------


def _block_gains(rng, n_symbols, block):
    n_blocks = -(-n_symbols // block)
    return np.repeat(complex_gaussian(rng, n_blocks), block)[:n_symbols]


def _faded_symbols(sym: np.ndarray, block: int, scn: ScenarioConfig, rng, sample_rate):
    """Pass a ``(n_symbols, n)`` symbol matrix through block-wise multipath.

    Returns the serialised waveform (tails overlap-added, final tail dropped)
    and the tap vector of every block.
    """
    spacing = int(round(scn.tap_spacing * sample_rate))
    profile = exp_pdp_profile(scn.pdp_taps, scn.pdp_decay)
    n_sym, n = sym.shape
    n_blocks = -(-n_sym // block)
    taps = complex_gaussian(rng, (n_blocks, profile.tap_count)) * np.sqrt(profile.avg_powers)
    out = np.zeros(n_sym * n + (profile.tap_count - 1) * spacing, dtype=complex)
    for b in range(n_blocks):
        seg = sym[b * block: (b + 1) * block].ravel()
        start = b * block * n
        y = np.convolve(seg, sparse_filter(taps[b], spacing))
        out[start: start + y.size] += y
    return out[: n_sym * n], taps


def _ofdm_stream(cfg: OfdmConfig, n_samples: int, rng, fading: bool, scn: ScenarioConfig, block: int = 10):
    """Random OFDM waveform of ``n_samples`` starting at a random symbol phase."""
    offset = int(rng.integers(0, cfg.n_symbol))
    n_sym = -(-(n_samples + offset) // cfg.n_symbol)
    frame = random_frame(cfg, n_sym, rng)
    sym = modulate_symbols(frame.data_symbols, cfg)
    if fading:
        wave, _ = _faded_symbols(sym, block, scn, rng, cfg.sample_rate)
    else:
        wave = sym.ravel()
    return wave[offset: offset + n_samples]


def _nb_stream(cfg: NbConfig, n_samples: int, rate: float, rng, fading: bool, block: int = 16):
    """Steady-state NB waveform of ``n_samples`` with a random timing offset."""
    sps = cfg.samples_per_symbol(rate)
    n_sym = -(-n_samples // sps) + cfg.span + 2
    _, b = random_qpsk(cfg, n_sym, rng)
    if fading:
        b = b * _block_gains(rng, n_sym, block)
    wave = nb_modulate(b, cfg, rate, cfg.draw_xi(rng)).samples
    start = cfg.span * sps
    return wave[start: start + n_samples]


def _front_end(scn: ScenarioConfig):
    """(up, down, margin_out) of the composite -> NB receiver resampler."""
    up, down = rational_ratio(scn.composite_rate, scn.nb_rx_rate)
    if up == down:
        return up, down, 0
    h = _cached_resampler(up, down, 1.02 * scn.pu.bw / 2 / scn.composite_rate)
    margin = math.ceil(h.size / (2 * down)) + 2
    margin = up * math.ceil(margin / up)
    return up, down, margin


def interferer_waveform(scn: ScenarioConfig, n_out: int, rng, *, f_n=None, cfg=None, fading=None, shift=None):
    """Unit-gain interferer as seen at the victim's processing rate.

    For an NB victim the composite-rate interferer is shifted and passed through
    the receiver's band-limiting front end (rational resampler) to the NB
    processing rate; otherwise it stays at the composite rate.
    """
    cfg = scn.interferer_cfg if cfg is None else cfg
    if fading is None:
        fading = scn.channel == "fading" and scn.interferer_fading
    shift = scn.interferer_shift(f_n) if shift is None else shift
    scn.check_nyquist(scn.f_n if f_n is None else f_n)
    if scn.victim_is_nb:
        up, down, margin = _front_end(scn)
        n_comp = (n_out + 2 * margin) * down // up
    else:
        n_comp = n_out
    if isinstance(cfg, OfdmConfig):
        x = _ofdm_stream(cfg, n_comp, rng, fading, scn)
    else:
        x = _nb_stream(cfg, n_comp, scn.composite_rate, rng, fading)
    x = x * phasor(shift, scn.composite_rate, x.size)
    if scn.victim_is_nb and up != down:
        h = _cached_resampler(up, down, 1.02 * scn.pu.bw / 2 / scn.composite_rate)
        x = sps_.resample_poly(x, up, down, window=h)[margin: margin + n_out]
    return x


# -- calibration ----------------------------------------------------------


def _seeded(seed, *key):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key)))


CALIBRATION_KEY = 2**31 - 1


def reference_powers(scn: ScenarioConfig, rng, *, f_n=None, cfg=None, n_symbols: int = 20000):
    """Unit-gain victim and interferer powers at the SIR reference point.

    NB victim: time-averaged matched-filter outputs (``n_symbols`` NB symbols).
    OFDM victim: mean powers at the receiver input (``n_symbols / 100`` OFDM symbols,
    at least 200).
    """
    if scn.victim_is_nb:
        nb = scn.pu
        fs = scn.nb_rx_rate
        sps = nb.samples_per_symbol(fs)
        chunk = 2000
        rho = rho_i = 0.0
        n_chunks = max(1, n_symbols // chunk)
        for _ in range(n_chunks):
            _, b = random_qpsk(nb, chunk, rng)
            tx = nb_modulate(b, nb, fs, nb.draw_xi(rng))
            rho += _steady_mf_power(tx, nb)
            x = interferer_waveform(scn, chunk * sps + 2 * nb.span * sps, rng, f_n=f_n, cfg=cfg, fading=False)
            rho_i += _steady_mf_power(SampleBuffer(x, fs), nb)
        return rho / n_chunks, rho_i / n_chunks
    victim = scn.victim_cfg
    n_sym = max(200, n_symbols // 100)
    if isinstance(victim, OfdmConfig):
        frame = random_frame(victim, n_sym, rng)
        rho = float(np.mean(np.abs(modulate_symbols(frame.data_symbols, victim)) ** 2))
        n = n_sym * victim.n_symbol
    else:
        raise ConfigurationError("unsupported victim")
    x = interferer_waveform(scn, n, rng, f_n=f_n, cfg=cfg, fading=False)
    return rho, float(np.mean(np.abs(x) ** 2))


def _steady_mf_power(buf: SampleBuffer, nb: NbConfig) -> float:
    y = matched_filter_output(buf, nb)
    sps = nb.samples_per_symbol(buf.sample_rate)
    # drop one span of transient on each side, keep whole symbols
    core = y[nb.span * sps // 2: y.size - nb.span * sps // 2]
    core = core[: (core.size // sps) * sps]
    return float(np.mean(np.abs(core) ** 2))


def noise_variance(scn: ScenarioConfig, rng, n_symbols: int = 4000) -> float:
    """Per-sample complex noise variance at the victim processing rate for ``eb_no_db``."""
    gamma = db2lin(scn.eb_no_db)
    if scn.victim_is_nb:
        nb = scn.pu
        fs = scn.nb_rx_rate
        sps = nb.samples_per_symbol(fs)
        _, b = random_qpsk(nb, n_symbols, rng)
        tx = nb_modulate(b, nb, fs).samples
        steady = tx[nb.span * sps: (n_symbols - nb.span) * sps]
        power = float(np.mean(np.abs(steady) ** 2))
        return power * sps / (nb.bits_per_symbol * gamma)
    cfg = scn.victim_cfg
    n_sym = max(50, n_symbols // 20)
    sym = modulate_symbols(random_frame(cfg, n_sym, rng).data_symbols, cfg)
    core = sym[:, cfg.n_cp: cfg.n_cp + cfg.n_fft]
    power = float(np.mean(np.abs(core) ** 2))
    return power * cfg.n_fft / (cfg.bits_per_symbol * cfg.n_active * gamma)


def _calibration_key(scn: ScenarioConfig) -> ScenarioConfig:
    """Scenario stripped of fields that cannot influence the calibration."""
    scn = scn.with_(frame_symbols=None, fading_block=None, shift_victim=False, channel="awgn")
    if scn.victim_is_nb and scn.sir_ref_f_n is not None:
        scn = scn.with_(f_n=scn.sir_ref_f_n, cu_nulled=0)
    return scn


@lru_cache(maxsize=256)
def _calibrate_cached(scn: ScenarioConfig, seed: int, n_symbols: int) -> Calibration:
    return _calibrate(scn, seed, n_symbols)


def calibrate_scenario(scn: ScenarioConfig, seed: int = 0, n_symbols: int = 40000) -> Calibration:
    """Measure reference powers, derive the interferer gain and the noise level.

    Results are cached on the calibration-relevant part of the scenario, so a
    sweep over ``F_n`` with a fixed reference location calibrates once.
    """
    return _calibrate_cached(_calibration_key(scn), int(seed), int(n_symbols))


def _calibrate(scn: ScenarioConfig, seed: int, n_symbols: int) -> Calibration:
    rng = _seeded(seed, CALIBRATION_KEY)
    ref_f_n = scn.sir_ref_f_n if scn.victim_is_nb else None
    rho, rho_i = reference_powers(scn, rng, f_n=ref_f_n, cfg=scn.reference_interferer_cfg, n_symbols=n_symbols)
    if math.isinf(scn.sir_db) and scn.sir_db > 0:
        gain = 0.0
    else:
        if rho_i <= 0 or not np.isfinite(rho_i):
            raise RuntimeError(f"interferer reference power not measurable (got {rho_i})")
        gain = math.sqrt(rho / (rho_i * db2lin(scn.sir_db)))
    return Calibration(gain, noise_variance(scn, rng), rho, rho_i, ref_f_n)


def calibrate_interferer_gain(scn: ScenarioConfig, seed: int = 0) -> float:
    """Linear amplitude gain putting the interferer at ``sir_db`` at the reference point."""
    return calibrate_scenario(scn, seed).gain


def measure_sir(scn: ScenarioConfig, gain: float, seed: int = 1, *, f_n=None, n_symbols: int = 40000) -> SirBreakdown:
    """SIR at the victim's reference point for a given interferer gain.

    ``f_n`` defaults to the scenario's own location; the interferer is the
    scenario's effective (possibly nulled) one.
    """
    rng = _seeded(seed, CALIBRATION_KEY - 1)
    rho, rho_i = reference_powers(scn, rng, f_n=f_n, n_symbols=n_symbols)
    rho_i *= gain**2
    return SirBreakdown(rho, rho_i, float(lin2db(rho / rho_i)) if rho_i > 0 else math.inf)


# -- composition and reception --------------------------------------------


def _interferer_shift(scn):
    return 0.0 if scn.shift_victim else scn.interferer_shift()


def _place_victim(scn, x):
    """Copy of the victim waveform, moved by the opposite shift when ``shift_victim`` is set."""
    if scn.shift_victim:
        return x * phasor(-scn.interferer_shift(), scn.victim_rate, x.size)
    return x.copy()


def compose_scenario(scn: ScenarioConfig, cal: Calibration, rng) -> ComposedFrame:
    """One frame of victim + calibrated interferer + AWGN at the victim receiver input."""
    fading = scn.channel == "fading"
    if scn.victim_is_nb:
        nb = scn.pu
        fs = scn.nb_rx_rate
        k = scn.frame
        bits, b = random_qpsk(nb, k, rng)
        gains = _block_gains(rng, k, scn.block) if fading else None
        xi = nb.draw_xi(rng)
        tx = nb_modulate(b if gains is None else b * gains, nb, fs, xi).samples
        x = _place_victim(scn, tx)
        if cal.gain:
            x += cal.gain * interferer_waveform(scn, tx.size, rng, shift=_interferer_shift(scn))
        x += complex_gaussian(rng, tx.size, cal.noise_var)
        return ComposedFrame(SampleBuffer(x, fs), bits, k, xi, gains)

    cfg = scn.victim_cfg
    n_sym = scn.frame
    frame = random_frame(cfg, n_sym, rng)
    sym = modulate_symbols(frame.data_symbols, cfg)
    n = sym.size
    if fading:
        victim, taps = _faded_symbols(sym, scn.block, scn, rng, cfg.sample_rate)
        spacing = int(round(scn.tap_spacing * cfg.sample_rate))
        csi = np.stack([channel_response(t, spacing, cfg) for t in taps])
        gains = np.repeat(csi, scn.block, axis=0)[:n_sym]
    else:
        victim, gains = sym.ravel(), None
    x = _place_victim(scn, victim)
    if cal.gain:
        x += cal.gain * interferer_waveform(scn, n, rng, shift=_interferer_shift(scn))
    x += complex_gaussian(rng, n, cal.noise_var)
    return ComposedFrame(SampleBuffer(x, cfg.sample_rate), frame.bits, n_sym, 0.0, gains)


def receive(scn: ScenarioConfig, frame: ComposedFrame) -> np.ndarray:
    """Genie-synchronised victim receiver; returns the detected bits."""
    if scn.shift_victim:
        rx = frame.rx.samples * phasor(scn.interferer_shift(), scn.victim_rate, len(frame.rx))
        frame = replace(frame, rx=frame.rx.with_samples(rx))
    if scn.victim_is_nb:
        z = nb_decision_statistics(frame.rx, scn.pu, frame.xi, frame.n_symbols)
        if frame.gains is not None:
            z = z / frame.gains
        return demap_symbols(z, "qpsk")
    cfg = scn.victim_cfg
    y = ofdm_equalized_symbols(frame.rx, cfg, frame.gains, frame.n_symbols)
    return demap_symbols(y, cfg.modulation)


def run_trial(scn: ScenarioConfig, cal: Calibration, rng) -> BerEstimate:
    frame = compose_scenario(scn, cal, rng)
    rx_bits = receive(scn, frame)
    return BerEstimate(frame.bits.size, int(np.count_nonzero(rx_bits != frame.bits)))


def fading_cluster_bits(scn: ScenarioConfig) -> int:
    """Bits whose errors are treated as one burst under block fading.

    NB victim: one flat-fading block. OFDM victim: one block of symbols divided
    by the number of multipath taps (roughly the independent frequency-domain
    diversity branches).
    """
    if scn.victim_is_nb:
        return scn.block * scn.pu.bits_per_symbol
    cfg = scn.victim_cfg
    return max(1, scn.block * cfg.bits_per_ofdm_symbol // scn.pdp_taps)


def simulate_ber(
    scn: ScenarioConfig,
    cal: Calibration,
    seed: int,
    stop: StopRule,
    point: int = 0,
    threads: int = 1,
) -> BerEstimate:
    """Monte Carlo BER with per-trial seeds ``(seed, point, trial)``.

    Trials are merged strictly in index order and the stopping rule is checked
    after every trial, so the result does not depend on ``threads``. In fading
    scenarios the rule's ``cluster_bits`` is raised to :func:`fading_cluster_bits`.
    """
    if scn.channel == "fading":
        stop = replace(stop, cluster_bits=max(stop.cluster_bits, fading_cluster_bits(scn)))
    est = BerEstimate()
    trial = 0

    def one(t):
        return run_trial(scn, cal, _seeded(seed, point, t))

    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while not stop.done(est):
            idx = range(trial, trial + max(1, threads))
            results = pool.map(one, idx) if pool else map(one, idx)
            for r in results:
                est = est.merge(r)
                trial += 1
                if stop.done(est):
                    break
    finally:
        if pool:
            pool.shutdown(cancel_futures=True)
    return est


# -- closed forms ---------------------------------------------------------


def ofdm_mean_power_theory(cfg: OfdmConfig) -> float:
    """Mean power of a windowed OFDM symbol: ``(1 - beta/4) / (1 + beta) * N_u * sigma_a2``."""
    return (1.0 - cfg.beta / 4.0) / (1.0 + cfg.beta) * cfg.n_active * cfg.sigma_a2


def sir_ofdm_ofdm_theory(cu: OfdmConfig, pu: OfdmConfig) -> float:
    """Linear SIR at the OFDM PU: PU power over CU power."""
    return ofdm_mean_power_theory(pu) / ofdm_mean_power_theory(cu)


def sir_nb_ofdm_theory(nb: NbConfig, ofdm: OfdmConfig, c: float) -> float:
    """Linear SIR at the NB matched filter given the geometry constant ``c``."""
    return nb_mf_power_theory(nb) / (ofdm.sigma_a2 / ofdm.t_o) * c


def estimate_c_constant(
    nb: NbConfig,
    ofdm: OfdmConfig,
    f_c: float,
    n_realizations: int = 8,
    seed: int = 0,
    *,
    fading: bool = False,
    n_symbols: int = 4000,
    nb_rx_sps: int = 8,
):
    """Monte Carlo estimate of the geometry constant in the NB-victim SIR formula.

    Each realisation measures the matched-filter SIR with the OFDM signal
    ``f_c`` Hz below the NB carrier and converts it into
    ``C = SIR * (sigma_a2 / T_o) / (sigma_b2 (1 - alpha/4))``.
    Returns ``(mean, standard error)``.
    """
    if n_realizations < 2:
        raise ValueError("need at least two realisations for a standard error")
    scn = ScenarioConfig(
        cu=ofdm, pu=nb, victim="pu", f_n=(f_c - ofdm.bandwidth / 2) / ofdm.delta_f, sir_db=0.0,
        channel="fading" if fading else "awgn", composite_rate=ofdm.sample_rate, nb_rx_sps=nb_rx_sps,
    )
    rng = _seeded(seed, CALIBRATION_KEY - 2)
    cs = []
    for _ in range(n_realizations):
        rho, rho_i = reference_powers(scn, rng, n_symbols=n_symbols)
        cs.append(rho / rho_i * (ofdm.sigma_a2 / ofdm.t_o) / nb_mf_power_theory(nb))
    cs = np.asarray(cs)
    return float(cs.mean()), float(cs.std(ddof=1) / np.sqrt(cs.size))
