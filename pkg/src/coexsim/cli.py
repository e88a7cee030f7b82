"""Command-line entry point: ``coexsim <subcommand> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .coexist import (
    calibrate_scenario,
    estimate_c_constant,
    measure_sir,
    ofdm_mean_power_theory,
    sir_nb_ofdm_theory,
    sir_ofdm_ofdm_theory,
)
from .config import ConfigErrors, load_config
from .harness import (
    emit_psd,
    find_min_nulled,
    find_min_separation,
    manifest_text,
    psd_csv,
    run_ber_sweep,
    search_csv,
    sweep_csv,
    write_text,
)
from .metrics import lin2db
from .nb import NbConfig, nb_mf_power_theory
from .recipes import RECIPE_NAMES, run_recipe
from .signal import ConfigurationError


def _add_common(p, config_required=True):
    p.add_argument("--config", type=Path, required=config_required, help="experiment configuration file")
    p.add_argument("--seed", type=int, default=None, help="master seed (overrides the config)")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    p.add_argument("--threads", type=int, default=1, help="worker threads for Monte Carlo trials")
    p.add_argument("--bit-budget", type=int, default=None, help="maximum simulated bits per point")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coexsim", description="OFDM / narrow-band coexistence BER simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("sweep", help="BER along the configured axis"))
    _add_common(sub.add_parser("min-sep", help="smallest F_n meeting the target BER"))
    _add_common(sub.add_parser("min-null", help="fewest nulled CU subcarriers meeting the target BER"))
    p = sub.add_parser("psd", help="averaged periodogram of the CU or PU waveform")
    _add_common(p)
    p.add_argument("--system", choices=("cu", "pu"), default="cu")
    p.add_argument("--averaging", type=int, default=64)
    _add_common(sub.add_parser("sir-calc", help="closed-form powers and SIRs next to measured values"))
    p = sub.add_parser("recipe", help="reproduce one result figure")
    p.add_argument("name", choices=RECIPE_NAMES)
    _add_common(p, config_required=False)
    return parser


def _experiment(args):
    cfg = load_config(args.config)
    spec = cfg.sweep
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    if args.bit_budget is not None:
        spec = replace(spec, stop_rule=replace(spec.stop_rule, max_bits=args.bit_budget))
    return spec, cfg.target_ber


def _write_outputs(args, spec, text, kind):
    csv_path = write_text(args.out / f"{spec.name}.csv", text)
    write_text(args.out / f"{spec.name}.manifest.txt", manifest_text(spec, spec.seed, {"command": kind}))
    return csv_path


def cmd_sweep(args):
    spec, _ = _experiment(args)
    path = _write_outputs(args, spec, sweep_csv(spec.axis, run_ber_sweep(spec, args.threads)), "sweep")
    print(path)


def cmd_search(args):
    spec, target = _experiment(args)
    search = find_min_separation if args.command == "min-sep" else find_min_nulled
    res = search(spec, target, args.threads)
    path = _write_outputs(args, spec, search_csv(spec.axis, res), args.command)
    if res.reachable:
        print(f"threshold {spec.axis} = {res.threshold_value:g} (ber {res.ber_at_threshold.ber:.3e})")
    else:
        print(f"target {target:g} not reachable on the grid")
    print(path)


def cmd_psd(args):
    spec, _ = _experiment(args)
    scn = spec.scenario
    cfg = scn.cu_effective if args.system == "cu" else scn.pu
    freqs, psd = emit_psd(cfg, args.averaging, seed=spec.seed, sample_rate=scn.composite_rate)
    path = write_text(args.out / f"{spec.name}_{args.system}_psd.csv", psd_csv(freqs, psd))
    print(path)


def cmd_sir_calc(args):
    spec, _ = _experiment(args)
    scn = spec.scenario
    seed = spec.seed
    cu = scn.cu_effective
    print(f"CU mean symbol power (closed form): {ofdm_mean_power_theory(cu):.6g}")
    if isinstance(scn.pu, NbConfig):
        nb = scn.pu
        print(f"NB matched-filter power (closed form): {nb_mf_power_theory(nb):.6g}")
        fc = scn.carrier_offset()
        c, se = estimate_c_constant(nb, cu, fc, seed=seed)
        print(f"C at f_c = {fc:.6g} Hz: {c:.6g} +/- {se:.2g}")
        print(f"NB-victim SIR at unit gains (closed form with C): {lin2db(sir_nb_ofdm_theory(nb, cu, c)):.3f} dB")
    else:
        print(f"PU mean symbol power (closed form): {ofdm_mean_power_theory(scn.pu):.6g}")
        print(f"OFDM-victim SIR at unit gains (closed form): {lin2db(sir_ofdm_ofdm_theory(cu, scn.pu)):.3f} dB")
    cal = calibrate_scenario(scn, seed)
    ref = measure_sir(scn, cal.gain, seed, f_n=cal.reference_f_n)
    here = measure_sir(scn, cal.gain, seed)
    print(f"calibrated interferer gain: {cal.gain:.6g}")
    print(f"measured SIR at the reference point: {ref.sir_measured_db:.3f} dB (target {scn.sir_db:g} dB)")
    print(f"measured SIR at F_n = {scn.f_n:g}: {here.sir_measured_db:.3f} dB")


def cmd_recipe(args):
    seed = 1 if args.seed is None else args.seed
    for path in run_recipe(args.name, args.out, seed, args.threads, args.bit_budget):
        print(path)


COMMANDS = {
    "sweep": cmd_sweep,
    "min-sep": cmd_search,
    "min-null": cmd_search,
    "psd": cmd_psd,
    "sir-calc": cmd_sir_calc,
    "recipe": cmd_recipe,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        COMMANDS[args.command](args)
    except ConfigErrors as exc:
        print(f"configuration errors:\n{exc}", file=sys.stderr)
        return 2
    except (ConfigurationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0
