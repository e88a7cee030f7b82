import math

import numpy as np
import pytest

from coexsim.cli import main
from coexsim.coexist import ScenarioConfig
from coexsim.config import ConfigErrors, parse_config, parse_grid
from coexsim.harness import (
    SweepSpec,
    emit_psd,
    find_min_nulled,
    find_min_separation,
    manifest_text,
    psd_of,
    run_ber_sweep,
    search_csv,
    sweep_csv,
)
from coexsim.metrics import StopRule, meets_target, qpsk_awgn_ber_theory
from coexsim.nb import NbConfig
from coexsim.ofdm import OfdmConfig, null_edge_subcarriers
from coexsim.recipes import RECIPE_NAMES, fig6_scenario, papr_table, recipe_jobs
from coexsim.signal import ConfigurationError, SampleBuffer

NB_VICTIM = ScenarioConfig(sir_db=0.0, eb_no_db=10.0)


# -- SweepSpec -----------------------------------------------------------------


@pytest.mark.parametrize("grid", [(), (0, 2, 1), (1, 1)])
def test_sweepspec_rejects_bad_grids(grid):
    with pytest.raises(ConfigurationError):
        SweepSpec(NB_VICTIM, "f_n", grid)


def test_sweepspec_rejects_fractional_counts_and_unknown_axis():
    with pytest.raises(ConfigurationError):
        SweepSpec(NB_VICTIM, "nulled_count", (0, 1.5))
    with pytest.raises(ConfigurationError):
        SweepSpec(NB_VICTIM, "alpha", (0.1,))


def test_descending_grid_allowed():
    assert SweepSpec(NB_VICTIM, "sir_db", (10, 0, -5)).grid == (10.0, 0.0, -5.0)


# -- sweeps ----------------------------------------------------------------------


def test_single_point_interference_free_sweep():
    scn = NB_VICTIM.with_(sir_db=math.inf, eb_no_db=4.0)
    (pt,) = run_ber_sweep(SweepSpec(scn, "f_n", (5,), seed=3, stop_rule=StopRule(min_errors=200)))
    assert pt.estimate.contains(qpsk_awgn_ber_theory(10 ** 0.4))


def test_sweep_csv_is_reproducible_and_thread_independent():
    spec = SweepSpec(NB_VICTIM, "f_n", (0, 2, 4), seed=9, stop_rule=StopRule(min_errors=40, max_bits=60_000))
    a = sweep_csv("f_n", run_ber_sweep(spec))
    b = sweep_csv("f_n", run_ber_sweep(spec))
    c = sweep_csv("f_n", run_ber_sweep(spec, threads=3))
    assert a == b == c
    lines = a.splitlines()
    assert lines[0] == "f_n,bits,errors,ber,ci_low,ci_high,note"
    assert len(lines) == 4
    assert lines[1].startswith("0,")


def test_infeasible_point_is_reported_not_raised():
    spec = SweepSpec(NB_VICTIM, "f_n", (0, 500), stop_rule=StopRule(min_errors=20, max_bits=20_000))
    ok, bad = run_ber_sweep(spec)
    assert ok.feasible and not bad.feasible
    assert "Nyquist" in bad.note
    assert sweep_csv("f_n", [ok, bad]).splitlines()[-1].startswith("500,,,,,,infeasible")


def test_sir10_fine_separation_point():
    scn = NB_VICTIM.with_(sir_db=10.0)
    spec = SweepSpec(scn, "f_n", (0, 1, 1.5, 2, 4), seed=1, stop_rule=StopRule(target=1e-4))
    res = run_ber_sweep(SweepSpec(scn, "f_n", (1.5,), seed=1, stop_rule=spec.stop_rule))
    assert res[0].estimate.ber <= 1e-4


# -- searches ------------------------------------------------------------------


def _assert_consistent(res):
    assert res.reachable
    for pt in res.full_curve:
        if pt.value == res.threshold_value:
            assert meets_target(pt.estimate, res.target)
            break
        assert pt.estimate is None or not meets_target(pt.estimate, res.target)


def test_search_result_consistency():
    spec = SweepSpec(NB_VICTIM.with_(sir_db=10.0), "f_n", (0, 2, 4, 8), seed=2)
    res = find_min_separation(spec, 1e-4)
    _assert_consistent(res)
    assert res.full_curve[-1].value == res.threshold_value
    assert "# threshold=" in search_csv("f_n", res).splitlines()[-1]


def test_unreachable_grid_reports_none():
    spec = SweepSpec(NB_VICTIM.with_(sir_db=-5.0), "f_n", (0, 0.5), seed=2)
    res = find_min_separation(spec, 1e-4)
    assert not res.reachable and res.ber_at_threshold is None
    assert len(res.full_curve) == 2
    assert "threshold=unreachable" in search_csv("f_n", res)


def test_no_nulling_needed_far_away():
    spec = SweepSpec(NB_VICTIM.with_(f_n=40.0), "nulled_count", (0, 1, 2), seed=2)
    res = find_min_nulled(spec, 1e-4)
    assert res.threshold_value == 0


def test_search_axis_checked():
    with pytest.raises(ConfigurationError):
        find_min_nulled(SweepSpec(NB_VICTIM, "f_n", (0,)))
    with pytest.raises(ConfigurationError):
        find_min_separation(SweepSpec(NB_VICTIM, "beta", (0,)))


# -- PSD -----------------------------------------------------------------------


def test_psd_single_tone():
    fs, f0 = 1e6, 123_046.875
    n = np.arange(4096 * 8)
    f, p = psd_of(SampleBuffer(np.exp(2j * np.pi * f0 * n / fs), fs))
    assert f[np.argmax(p)] == pytest.approx(f0, abs=fs / 4096)
    assert p.max() == 0.0


def _level_at(freqs, psd, f):
    return psd[np.argmin(np.abs(freqs - f))]


def test_psd_windowing_lowers_out_of_band():
    base = OfdmConfig()
    f_probe = base.bandwidth / 2 + 5 * base.delta_f
    levels = {}
    for beta in (0.0, 0.3):
        f, p = emit_psd(base.with_(beta=beta), averaging=32, seed=1)
        band = np.abs(f - f_probe) < base.delta_f / 2
        levels[beta] = np.mean(p[band])
    assert levels[0.3] < levels[0.0] - 3


def test_psd_nulling_clears_vacated_band():
    base = OfdmConfig()
    nulled = null_edge_subcarriers(base, 4, "high")
    f_full, p_full = emit_psd(base, averaging=32, seed=1)
    f_null, p_null = emit_psd(nulled, averaging=32, seed=1)
    edge = base.bandwidth / 2
    band = (f_full > edge - 3.5 * base.delta_f) & (f_full < edge - 0.5 * base.delta_f)
    drop = np.mean(p_full[band]) - np.mean(p_null[band])
    assert drop >= 10


def test_psd_nb_and_bad_averaging():
    f, p = emit_psd(NbConfig(), averaging=4, seed=0)
    assert abs(f[np.argmax(p)]) < 15e3
    with pytest.raises(ValueError):
        emit_psd(OfdmConfig(), averaging=0)


# -- config --------------------------------------------------------------------

MINIMAL = "[sweep]\naxis = f_n\ngrid = 0:4:2\n"


def test_parse_grid_forms():
    assert parse_grid("0:4:2") == (0.0, 2.0, 4.0)
    assert parse_grid("1, 2.5,4") == (1.0, 2.5, 4.0)
    assert parse_grid("0:1:0.5") == (0.0, 0.5, 1.0)
    with pytest.raises(ValueError):
        parse_grid("0:4:0")


def test_minimal_config_gets_defaults():
    cfg = parse_config(MINIMAL)
    spec = cfg.sweep
    assert spec.grid == (0.0, 2.0, 4.0)
    assert spec.scenario == ScenarioConfig()
    assert spec.stop_rule == StopRule()
    assert spec.seed == 0 and cfg.target_ber == 1e-4


def test_negative_sir_accepted():
    cfg = parse_config("[sweep]\naxis = sir_db\ngrid = -10, -5, 0\n[scenario]\nsir_db = -3\n")
    assert cfg.sweep.grid[0] == -10.0
    assert cfg.sweep.scenario.sir_db == -3.0


def test_beta_out_of_range_names_bound():
    with pytest.raises(ConfigErrors) as info:
        parse_config(MINIMAL + "[cu]\nbeta = 1.5\n")
    (issue,) = info.value.issues
    assert issue.key == "beta" and issue.line == 5
    assert "0 <= beta < 1" in issue.reason


def test_unknown_key_and_all_errors_reported():
    text = "[sweep]\naxis = f_n\ngrid = 0,1\nsede = 3\n[pu]\nalfa = 0.3\n[plot]\nx = 1\n"
    with pytest.raises(ConfigErrors) as info:
        parse_config(text)
    got = {(i.section, i.key, i.line) for i in info.value.issues}
    assert ("sweep", "sede", 4) in got
    assert ("pu", "alfa", 6) in got
    assert ("plot", None, 7) in got


def test_ofdm_pu_and_actual_reference():
    cfg = parse_config(MINIMAL + "[scenario]\nsir_ref_f_n = actual\n[pu]\nkind = ofdm\nn_total = 128\n")
    scn = cfg.sweep.scenario
    assert isinstance(scn.pu, OfdmConfig) and scn.sir_ref_f_n is None


def test_wrong_key_for_pu_kind():
    with pytest.raises(ConfigErrors, match="alpha"):
        parse_config(MINIMAL + "[pu]\nkind = ofdm\nalpha = 0.3\n")


# -- recipes -------------------------------------------------------------------


def test_recipe_names():
    assert RECIPE_NAMES == ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9")
    for name in RECIPE_NAMES[:-1]:
        assert recipe_jobs(name)
    with pytest.raises(KeyError):
        recipe_jobs("fig1")


def test_fig6_holds_bandwidth():
    for n in (64, 128, 256):
        cu = fig6_scenario(n).cu
        assert cu.n_total == n
        assert cu.bandwidth == pytest.approx(1.25e6)
        assert cu.sample_rate == pytest.approx(5e6)


def test_papr_table_shapes():
    grid, curves = papr_table(n_symbols=500, grid_db=[0, 5, 10])
    assert set(curves) == {"full", "beta_0.15", "nulled_3"}
    for c in curves.values():
        assert c.exceedance_prob[0] == 1.0
        assert np.all(np.diff(c.exceedance_prob) <= 0)


def test_manifest_lists_seed_and_config():
    spec = SweepSpec(NB_VICTIM, "f_n", (0,), seed=17)
    text = manifest_text(spec, 17)
    assert "seed = 17" in text and "sir_db" in text and "alpha" in text


# -- CLI -----------------------------------------------------------------------

CLI_CONFIG = """[sweep]
name = smoke
axis = f_n
grid = 0, 4
seed = 3
[scenario]
sir_db = 10
[stop]
min_errors = 20
max_bits = 30000
"""


@pytest.fixture
def cfg_path(tmp_path):
    p = tmp_path / "exp.ini"
    p.write_text(CLI_CONFIG)
    return p


def test_cli_sweep_writes_csv_and_manifest(cfg_path, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["sweep", "--config", str(cfg_path), "--out", str(out)]) == 0
    first = (out / "smoke.csv").read_bytes()
    assert (out / "smoke.manifest.txt").exists()
    assert main(["sweep", "--config", str(cfg_path), "--out", str(out), "--threads", "2"]) == 0
    assert (out / "smoke.csv").read_bytes() == first


def test_cli_seed_and_budget_flags(cfg_path, tmp_path):
    out = tmp_path / "o"
    assert main(["sweep", "--config", str(cfg_path), "--out", str(out), "--seed", "5", "--bit-budget", "4096"]) == 0
    rows = (out / "smoke.csv").read_text().splitlines()[1:]
    assert all(int(r.split(",")[1]) <= 4096 + 2048 for r in rows)
    assert "seed = 5" in (out / "smoke.manifest.txt").read_text()


def test_cli_min_sep_and_min_null(cfg_path, tmp_path, capsys):
    out = tmp_path / "o"
    assert main(["min-sep", "--config", str(cfg_path), "--out", str(out)]) == 0
    assert "# threshold=" in (out / "smoke.csv").read_text()
    null_cfg = tmp_path / "null.ini"
    null_cfg.write_text(CLI_CONFIG.replace("axis = f_n", "axis = nulled_count").replace("grid = 0, 4", "grid = 0:2:1"))
    assert main(["min-null", "--config", str(null_cfg), "--out", str(out)]) == 0


def test_cli_psd(cfg_path, tmp_path):
    out = tmp_path / "o"
    assert main(["psd", "--config", str(cfg_path), "--out", str(out), "--averaging", "4"]) == 0
    lines = (out / "smoke_cu_psd.csv").read_text().splitlines()
    assert lines[0] == "freq_hz,psd_db" and len(lines) == 4097


def test_cli_sir_calc(cfg_path, capsys):
    assert main(["sir-calc", "--config", str(cfg_path)]) == 0
    text = capsys.readouterr().out
    assert "NB matched-filter power" in text and "measured SIR at the reference point" in text


def test_cli_recipe_fig9(tmp_path):
    assert main(["recipe", "fig9", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "fig9_papr_ccdf.csv").read_text().startswith("papr_db,full,beta_0.15,nulled_3")


def test_cli_bad_config_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[sweep]\naxis = f_n\ngrid = 0\n[cu]\nbeta = 1.5\n")
    assert main(["sweep", "--config", str(bad)]) == 2
    assert "line 5" in capsys.readouterr().err
    assert main(["sweep", "--config", str(tmp_path / "missing.ini")]) == 2
