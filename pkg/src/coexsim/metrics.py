"""BER bookkeeping with Wilson intervals, theoretical QPSK references and PAPR CCDFs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

Z95 = 1.959963984540054


def wilson_interval(errors: int, total: int, z: float = Z95):
    """Two-sided Wilson score interval for a binomial proportion."""
    if total == 0:
        return 0.0, 1.0
    if errors > total:
        raise ValueError("errors exceed total")
    p = errors / total
    denom = 1.0 + z * z / total
    centre = (p + z * z / (2 * total)) / denom
    half = z * np.sqrt(p * (1 - p) / total + z * z / (4 * total * total)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class BerEstimate:
    bits_total: int = 0
    bit_errors: int = 0

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits_total if self.bits_total else 0.0

    @property
    def ci_low(self) -> float:
        return min(wilson_interval(self.bit_errors, self.bits_total)[0], self.ber)

    @property
    def ci_high(self) -> float:
        return max(wilson_interval(self.bit_errors, self.bits_total)[1], self.ber)

    def interval(self, z: float = Z95):
        return wilson_interval(self.bit_errors, self.bits_total, z)

    def merge(self, other: "BerEstimate") -> "BerEstimate":
        return BerEstimate(self.bits_total + other.bits_total, self.bit_errors + other.bit_errors)

    def contains(self, value: float) -> bool:
        return self.ci_low <= value <= self.ci_high


def ber_accumulate(est: BerEstimate, tx_bits, rx_bits) -> BerEstimate:
    tx = np.asarray(tx_bits)
    rx = np.asarray(rx_bits)
    if tx.shape != rx.shape:
        raise ValueError(f"length mismatch: {tx.shape} vs {rx.shape}")
    return BerEstimate(est.bits_total + tx.size, est.bit_errors + int(np.count_nonzero(tx != rx)))


def meets_target(est: BerEstimate, target: float = 1e-4) -> bool:
    """Point estimate at or below target, and the lower 95 % bound not above it."""
    return est.bits_total > 0 and est.ber <= target and est.ci_low <= target


@dataclass(frozen=True)
class StopRule:
    """Monte Carlo stopping rule.

    Stop once ``min_errors`` errors or ``max_bits`` bits are reached. With a
    ``target``, also stop as soon as a Wilson interval at ``decisive_z``
    (99.9 % two-sided by default) lies entirely on one side of the target:
    the pass/fail verdict can no longer change in practice.

    ``cluster_bits`` > 1 evaluates that interval as if every group of
    ``cluster_bits`` bits were one observation, a conservative allowance for
    errors that arrive in bursts (block fading).
    """

    min_errors: int = 100
    max_bits: int = 20_000_000
    target: float | None = None
    decisive_z: float = 3.2905267314919255
    cluster_bits: int = 1

    def done(self, est: BerEstimate) -> bool:
        if est.bit_errors >= self.min_errors or est.bits_total >= self.max_bits:
            return True
        if self.target is not None and est.bits_total:
            c = self.cluster_bits
            lo, hi = wilson_interval(est.bit_errors / c, est.bits_total / c, self.decisive_z)
            return hi < self.target or lo > self.target
        return False


def q_function(x):
    return 0.5 * erfc(np.asarray(x) / np.sqrt(2.0))


def qpsk_awgn_ber_theory(eb_no_linear):
    """Gray QPSK in AWGN: ``Q(sqrt(2 Eb/N0))``."""
    g = np.asarray(eb_no_linear, dtype=float)
    if np.any(g < 0):
        raise ValueError("Eb/N0 must be >= 0")
    out = q_function(np.sqrt(2.0 * g))
    return float(out) if out.ndim == 0 else out


def qpsk_rayleigh_ber_theory(eb_no_linear):
    """Gray QPSK in flat Rayleigh fading: ``(1 - sqrt(g / (g + 1))) / 2``."""
    g = np.asarray(eb_no_linear, dtype=float)
    if np.any(g < 0):
        raise ValueError("Eb/N0 must be >= 0")
    out = 0.5 * (1.0 - np.sqrt(g / (g + 1.0)))
    return float(out) if out.ndim == 0 else out


def db2lin(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def lin2db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class PaprCcdf:
    thresholds: np.ndarray
    exceedance_prob: np.ndarray


def papr_ccdf(papr_values, grid_db) -> PaprCcdf:
    """Empirical ``P(PAPR > threshold)`` on a dB grid."""
    values = np.asarray(papr_values, dtype=float)
    if values.size == 0:
        raise ValueError("no PAPR values")
    grid = np.asarray(grid_db, dtype=float)
    sorted_db = np.sort(lin2db(values))
    above = values.size - np.searchsorted(sorted_db, grid, side="right")
    return PaprCcdf(grid, above / values.size)
