"""Named experiment recipes, one per result figure.

Every recipe is a list of jobs (a BER sweep or a threshold search) that share
a master seed. ``fig9`` is the PAPR CCDF comparison of windowing and nulling.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .coexist import ScenarioConfig
from .harness import (
    SweepSpec,
    find_min_nulled,
    find_min_separation,
    manifest_text,
    run_ber_sweep,
    scenario_at,
    search_csv,
    sweep_csv,
    write_text,
)
from .metrics import StopRule, papr_ccdf
from .ofdm import OfdmConfig, null_edge_subcarriers, random_frame, symbol_paprs

TARGET_BER = 1e-4

FINE_F_N = (0, 0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4) + tuple(range(5, 25))
COARSE_F_N = tuple(range(0, 31, 2))
BETAS = (0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5)


@dataclass(frozen=True)
class RecipeJob:
    name: str
    spec: SweepSpec
    kind: str  # "sweep", "min-sep" or "min-null"


def _stop(bit_budget):
    return StopRule(max_bits=bit_budget or 20_000_000, target=TARGET_BER)


def _jobs_fig2(seed, stop):
    return [
        RecipeJob(f"fig2_sir{sir}", SweepSpec(ScenarioConfig(sir_db=sir, eb_no_db=10), "f_n", FINE_F_N, seed, stop), "min-sep")
        for sir in (0, 10)
    ]


def _jobs_fig3(seed, stop):
    return [
        RecipeJob(
            f"fig3_sir{sir}",
            SweepSpec(ScenarioConfig(victim="cu", sir_db=sir, eb_no_db=10), "f_n", FINE_F_N, seed, stop),
            "min-sep",
        )
        for sir in (24, 44)
    ]


def _jobs_fig4(seed, stop):
    return [
        RecipeJob(
            f"fig4_sir{sir}",
            SweepSpec(ScenarioConfig(sir_db=sir, eb_no_db=35, channel="fading"), "f_n", COARSE_F_N, seed, stop),
            "min-sep",
        )
        for sir in (30, 20)
    ]


def _jobs_fig5(seed, stop):
    return [
        RecipeJob(
            f"fig5_sir{sir}",
            SweepSpec(ScenarioConfig(pu=OfdmConfig(), sir_db=sir, eb_no_db=10), "f_n", FINE_F_N, seed, stop),
            "min-sep",
        )
        for sir in (0, 10)
    ]


def fig6_scenario(n_cu: int, cu_hold: str = "bandwidth") -> ScenarioConfig:
    base = ScenarioConfig(pu=OfdmConfig(), sir_db=0, eb_no_db=10)
    return scenario_at(SweepSpec(base, "cu_subcarriers", (n_cu,), cu_hold=cu_hold), n_cu)


def _jobs_fig6(seed, stop):
    return [
        RecipeJob(f"fig6_n{n}", SweepSpec(fig6_scenario(n), "f_n", COARSE_F_N, seed, stop), "min-sep")
        for n in (64, 128, 256)
    ]


def _jobs_fig7(seed, stop):
    return [
        RecipeJob(f"fig7_fn{fn}", SweepSpec(ScenarioConfig(sir_db=0, eb_no_db=10, f_n=fn), "beta", BETAS, seed, stop), "sweep")
        for fn in (0, 2, 4)
    ]


def _jobs_fig8(seed, stop):
    return [
        RecipeJob(
            f"fig8_fn{fn}",
            SweepSpec(ScenarioConfig(sir_db=0, eb_no_db=10, f_n=fn), "nulled_count", tuple(range(0, 11)), seed, stop),
            "min-null",
        )
        for fn in (0, 2)
    ]


RECIPES = {
    "fig2": _jobs_fig2,
    "fig3": _jobs_fig3,
    "fig4": _jobs_fig4,
    "fig5": _jobs_fig5,
    "fig6": _jobs_fig6,
    "fig7": _jobs_fig7,
    "fig8": _jobs_fig8,
}
RECIPE_NAMES = tuple(RECIPES) + ("fig9",)


def recipe_jobs(name: str, seed: int = 1, bit_budget: int | None = None) -> list[RecipeJob]:
    if name not in RECIPES:
        raise KeyError(f"unknown recipe {name!r}; choose from {', '.join(RECIPE_NAMES)}")
    return RECIPES[name](seed, _stop(bit_budget))


def run_job(job: RecipeJob, threads: int = 1, exhaustive: bool = True):
    """Run one job; returns ``(csv_text, result)``."""
    if job.kind == "sweep":
        res = run_ber_sweep(job.spec, threads)
        return sweep_csv(job.spec.axis, res), res
    search = find_min_separation if job.kind == "min-sep" else find_min_nulled
    res = search(job.spec, TARGET_BER, threads, exhaustive=exhaustive)
    return search_csv(job.spec.axis, res), res


def papr_table(n_symbols: int = 10_000, seed: int = 1, grid_db=None):
    """PAPR CCDFs of the full CU, the windowed CU (beta=0.15) and the CU with three nulled edge subcarriers."""
    grid = np.arange(0.0, 14.01, 0.25) if grid_db is None else np.asarray(grid_db, dtype=float)
    base = OfdmConfig()
    configs = {
        "full": base,
        "beta_0.15": base.with_(beta=0.15),
        "nulled_3": null_edge_subcarriers(base, 3, "high"),
    }
    curves = {}
    for label, cfg in configs.items():
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(9,)))
        values = symbol_paprs(random_frame(cfg, n_symbols, rng).data_symbols, cfg)
        curves[label] = papr_ccdf(values, grid)
    return grid, curves


def papr_csv(grid, curves) -> str:
    labels = list(curves)
    rows = ["papr_db," + ",".join(labels)]
    for i, g in enumerate(grid):
        rows.append(f"{g:.6e}," + ",".join(f"{curves[lab].exceedance_prob[i]:.6e}" for lab in labels))
    return "\n".join(rows) + "\n"


def run_recipe(name: str, out_dir, seed: int = 1, threads: int = 1, bit_budget: int | None = None) -> list[Path]:
    """Run a named recipe and write one CSV plus one manifest per job."""
    out = Path(out_dir)
    written = []
    if name == "fig9":
        grid, curves = papr_table(seed=seed)
        written.append(write_text(out / "fig9_papr_ccdf.csv", papr_csv(grid, curves)))
        return written
    for job in recipe_jobs(name, seed, bit_budget):
        text, _ = run_job(job, threads)
        written.append(write_text(out / f"{job.name}.csv", text))
        written.append(write_text(out / f"{job.name}.manifest.txt", manifest_text(job.spec, seed, {"kind": job.kind})))
    return written
