"""Coexistence simulator for an OFDM cognitive user next to narrow-band or OFDM primary users."""

from .coexist import ScenarioConfig, calibrate_scenario, compose_scenario, simulate_ber
from .metrics import BerEstimate, StopRule
from .nb import NbConfig
from .ofdm import OfdmConfig

__all__ = [
    "BerEstimate",
    "NbConfig",
    "OfdmConfig",
    "ScenarioConfig",
    "StopRule",
    "calibrate_scenario",
    "compose_scenario",
    "simulate_ber",
]
