"""Experiment configuration files.

INI-style text with five sections; every key is optional except ``axis`` and
``grid`` in ``[sweep]``. Unknown sections or keys are errors.

.. code-block:: ini

    [sweep]
    name = fig2_sir0        ; output file stem
    axis = f_n              ; f_n | sir_db | beta | nulled_count | cu_subcarriers | eb_no_db
    grid = 0:20:1           ; comma list, or start:stop:step (inclusive)
    seed = 1
    target_ber = 1e-4       ; used by min-sep / min-null
    cu_hold = bandwidth     ; cu_subcarriers axis: bandwidth | spacing

    [scenario]
    victim = pu             ; pu | cu
    f_n = 10
    sir_db = 0              ; may be negative; "inf" disables the interferer
    eb_no_db = 10
    channel = awgn          ; awgn | fading
    composite_rate = 5e6
    f_n_mode = edge         ; edge | literal
    cu_nulled = 0
    sir_ref_f_n = 0         ; number, or "actual" to calibrate at the scenario F_n
    interferer_fading = true
    nb_rx_sps = 8
    frame_symbols = 1024
    fading_block = 16
    pdp_taps = 5
    pdp_decay = 0.2
    tap_spacing = 0.8e-6

    [cu]                    ; OFDM cognitive user
    n_total = 128
    bandwidth = 1.25e6      ; sets delta_f = bandwidth / n_total
    t_cp = 25.6e-6
    beta = 0
    modulation = qpsk       ; qpsk | bpsk
    sigma_a2 = 1
    oversampling = 4

    [pu]
    kind = nb               ; nb | ofdm (ofdm accepts the [cu] keys)
    bw = 15e3
    alpha = 0.35
    sigma_b2 = 1
    span = 24

    [stop]
    min_errors = 100
    max_bits = 20000000
    decisive_z = 3.29
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass

import numpy as np

from .coexist import ScenarioConfig
from .harness import AXES, SweepSpec
from .metrics import StopRule
from .nb import NbConfig
from .ofdm import OfdmConfig
from .signal import ConfigurationError

_OFDM_KEYS = {
    "n_total": int, "bandwidth": float, "delta_f": float, "t_cp": float, "beta": float,
    "modulation": str, "sigma_a2": float, "oversampling": int,
}
_NB_KEYS = {"bw": float, "alpha": float, "sigma_b2": float, "span": int}
_SECTIONS = {
    "sweep": {"name": str, "axis": str, "grid": str, "seed": int, "target_ber": float, "cu_hold": str},
    "scenario": {
        "victim": str, "f_n": float, "sir_db": float, "eb_no_db": float, "channel": str,
        "composite_rate": float, "f_n_mode": str, "cu_nulled": int, "sir_ref_f_n": str,
        "interferer_fading": bool, "nb_rx_sps": int, "frame_symbols": int, "fading_block": int,
        "pdp_taps": int, "pdp_decay": float, "tap_spacing": float,
    },
    "cu": _OFDM_KEYS,
    "pu": {"kind": str, **_OFDM_KEYS, **_NB_KEYS},
    "stop": {"min_errors": int, "max_bits": int, "decisive_z": float},
}


@dataclass(frozen=True)
class ConfigIssue:
    section: str
    key: str | None
    line: int | None
    reason: str

    def __str__(self):
        where = f"line {self.line}: " if self.line else ""
        key = f"[{self.section}] {self.key}" if self.key else f"[{self.section}]"
        return f"{where}{key}: {self.reason}"


class ConfigErrors(ConfigurationError):
    """All problems found in one configuration file."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("\n".join(str(i) for i in self.issues))


@dataclass(frozen=True)
class ExperimentConfig:
    sweep: SweepSpec
    target_ber: float = 1e-4


def _line_index(text: str) -> dict:
    """Map ``(section, key)`` and ``(section, None)`` to 1-based line numbers."""
    index = {}
    section = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        m = re.match(r"\[([^\]]+)\]", line)
        if m:
            section = m.group(1).strip().lower()
            index.setdefault((section, None), no)
            continue
        m = re.match(r"([^=:\s]+)\s*[=:]", line)
        if m and section is not None:
            index.setdefault((section, m.group(1).lower()), no)
    return index


def _convert(kind, raw: str):
    raw = raw.strip()
    if kind is bool:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    if kind is int:
        value = float(raw)
        if not value.is_integer():
            raise ValueError(f"expected an integer, got {raw!r}")
        return int(value)
    if kind is float:
        return float(raw)
    return raw


def parse_grid(raw: str) -> tuple:
    """``"0, 1, 2.5"`` or inclusive ``"start:stop:step"``."""
    raw = raw.strip()
    if ":" in raw:
        parts = [float(p) for p in raw.split(":")]
        if len(parts) != 3 or parts[2] == 0:
            raise ValueError("range grid must be start:stop:step with step != 0")
        start, stop, step = parts
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        if n < 1:
            raise ValueError("range grid is empty")
        return tuple(float(round(start + i * step, 12)) for i in range(n))
    values = tuple(float(v) for v in raw.split(",") if v.strip())
    if not values:
        raise ValueError("grid is empty")
    return values


def parse_config(text: str) -> ExperimentConfig:
    """Parse and fully validate a configuration; raise :class:`ConfigErrors` listing every problem."""
    lines = _line_index(text)
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    parser.optionxform = str.lower
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigErrors([ConfigIssue("?", None, getattr(exc, "lineno", None), str(exc).splitlines()[0])]) from exc

    issues: list[ConfigIssue] = []
    values: dict[str, dict] = {s: {} for s in _SECTIONS}

    def issue(section, key, reason):
        issues.append(ConfigIssue(section, key, lines.get((section, key)), reason))

    for section in parser.sections():
        sec = section.lower()
        if sec not in _SECTIONS:
            issue(sec, None, f"unknown section (expected one of {sorted(_SECTIONS)})")
            continue
        for key, raw in parser.items(section):
            if key not in _SECTIONS[sec]:
                issue(sec, key, "unknown key")
                continue
            try:
                values[sec][key] = _convert(_SECTIONS[sec][key], raw)
            except ValueError as exc:
                issue(sec, key, str(exc))

    sw = values["sweep"]
    for key in ("axis", "grid"):
        if key not in sw:
            issues.append(ConfigIssue("sweep", key, lines.get(("sweep", None)), "required key missing"))
    if "axis" in sw and sw["axis"] not in AXES:
        issue("sweep", "axis", f"must be one of {', '.join(AXES)}")
    grid = None
    if "grid" in sw:
        try:
            grid = parse_grid(sw["grid"])
        except ValueError as exc:
            issue("sweep", "grid", str(exc))
    if grid and sw.get("axis") == "beta" and not all(0.0 <= b < 1.0 for b in grid):
        issue("sweep", "grid", "beta must satisfy 0 <= beta < 1")
    if grid and sw.get("axis") in ("nulled_count", "cu_subcarriers") and any(g != int(g) or g < 0 for g in grid):
        issue("sweep", "grid", "values must be non-negative integers")

    cu = _build_ofdm("cu", values["cu"], issue)
    pu_vals = values["pu"]
    kind = pu_vals.pop("kind", "nb")
    if kind == "nb":
        for key in sorted(set(pu_vals) - set(_NB_KEYS)):
            issue("pu", key, "not valid for kind = nb")
            pu_vals.pop(key)
        pu = _build_nb(pu_vals, issue)
    elif kind == "ofdm":
        for key in sorted(set(pu_vals) - set(_OFDM_KEYS)):
            issue("pu", key, "not valid for kind = ofdm")
            pu_vals.pop(key)
        pu = _build_ofdm("pu", pu_vals, issue)
    else:
        issue("pu", "kind", "must be nb or ofdm")
        pu = None

    stop = StopRule()
    try:
        stop = StopRule(**values["stop"])
        if stop.min_errors < 1 or stop.max_bits < 1:
            raise ValueError("min_errors and max_bits must be >= 1")
    except (TypeError, ValueError) as exc:
        issue("stop", None, str(exc))

    scn = None
    sc = dict(values["scenario"])
    if "sir_ref_f_n" in sc:
        raw = sc["sir_ref_f_n"].strip().lower()
        try:
            sc["sir_ref_f_n"] = None if raw == "actual" else float(raw)
        except ValueError:
            issue("scenario", "sir_ref_f_n", "expected a number or 'actual'")
            sc.pop("sir_ref_f_n")
    for key in ("eb_no_db", "composite_rate", "f_n"):
        if key in sc and not np.isfinite(sc[key]):
            issue("scenario", key, "must be finite")
    if cu is not None and pu is not None and not issues:
        try:
            scn = ScenarioConfig(cu=cu, pu=pu, **sc)
        except (ConfigurationError, ValueError) as exc:
            issue("scenario", None, str(exc))

    spec = None
    if scn is not None and grid is not None and not issues:
        try:
            spec = SweepSpec(
                scn, sw["axis"], grid, seed=sw.get("seed", 0), stop_rule=stop,
                name=sw.get("name", "sweep"), cu_hold=sw.get("cu_hold", "bandwidth"),
            )
        except (ConfigurationError, ValueError) as exc:
            issue("sweep", None, str(exc))
    target = sw.get("target_ber", 1e-4)
    if not 0 < target < 1:
        issue("sweep", "target_ber", "must lie in (0, 1)")
    if issues:
        raise ConfigErrors(issues)
    return ExperimentConfig(spec, target)


def _build_ofdm(section, vals, issue):
    vals = dict(vals)
    ok = True
    if "beta" in vals and not 0.0 <= vals["beta"] < 1.0:
        issue(section, "beta", "beta must satisfy 0 <= beta < 1")
        ok = False
    if "bandwidth" in vals and "delta_f" in vals:
        issue(section, "bandwidth", "give either bandwidth or delta_f, not both")
        ok = False
    if not ok:
        return None
    try:
        if "bandwidth" in vals:
            bw = vals.pop("bandwidth")
            return OfdmConfig.from_bandwidth(bw, vals.pop("n_total", 128), **vals)
        if "delta_f" not in vals:
            vals["delta_f"] = 1.25e6 / vals.get("n_total", 128)
        return OfdmConfig(**vals)
    except (ConfigurationError, ValueError) as exc:
        issue(section, None, str(exc))
        return None


def _build_nb(vals, issue):
    if "alpha" in vals and not 0.0 <= vals["alpha"] <= 1.0:
        issue("pu", "alpha", "alpha must satisfy 0 <= alpha <= 1")
        return None
    try:
        return NbConfig(**vals)
    except (ConfigurationError, ValueError) as exc:
        issue("pu", None, str(exc))
        return None


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
