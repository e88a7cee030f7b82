"""
Calibrating the interferer
==========================

The interferer amplitude is chosen so that the signal-to-interference ratio
at a reference point hits the requested value. For a narrow-band victim
the reference is the matched-filter output with the interferer right at the
band edge. Moving the interferer away then lowers its contribution.
"""

import numpy as np

from coexsim.coexist import ScenarioConfig, calibrate_scenario, estimate_c_constant, measure_sir, sir_nb_ofdm_theory
from coexsim.metrics import lin2db

scn = ScenarioConfig(sir_db=0.0)
cal = calibrate_scenario(scn, seed=1)
print(f"gain for 0 dB at F_n=0: {cal.gain:.4g}")

###############################################################################
# SIR seen by the matched filter as the separation grows, gain held fixed.

for f_n in (0, 1, 2, 5, 10, 20, 40):
    sir = measure_sir(scn, cal.gain, seed=2, f_n=f_n, n_symbols=8000)
    print(f"F_n={f_n:3d}: SIR at the matched filter {sir.sir_measured_db:6.2f} dB")

###############################################################################
# The same power pair seen from the OFDM side. Because the two ratios are
# reciprocal, raising the narrow-band SIR by 10 dB lowers the OFDM-side SIR by
# 10 dB. The full-rate receiver is used so both powers share one sample rate.

from coexsim.nb import nb_modulate, random_qpsk  # noqa: E402
from coexsim.ofdm import ofdm_modulate, random_frame  # noqa: E402

rng = np.random.default_rng(0)
p_cu = np.mean(np.abs(ofdm_modulate(random_frame(scn.cu, 200, rng), scn.cu).samples) ** 2)
_, b = random_qpsk(scn.pu, 2000, rng)
sps = scn.pu.samples_per_symbol(scn.composite_rate)
p_nb = np.mean(np.abs(nb_modulate(b, scn.pu, scn.composite_rate).samples[scn.pu.span * sps: -scn.pu.span * sps]) ** 2)
for sir_db in (0.0, 10.0):
    g = calibrate_scenario(scn.with_(sir_db=sir_db, nb_rx_sps=sps), seed=1).gain
    print(f"{sir_db:4.0f} dB at the NB matched filter = {lin2db(g**2 * p_cu / p_nb):5.1f} dB at the OFDM receiver input")

###############################################################################
# The coupling constant C summarises how much OFDM power leaks into the NB
# matched filter at a given offset. It does not depend on the symbol powers,
# so one estimate predicts the SIR for any power setting.

fc = scn.carrier_offset(5)
c, se = estimate_c_constant(scn.pu, scn.cu, fc, 4, seed=3, n_symbols=4000)
print(f"C at F_n=5: {c:.4g} +/- {se:.2g}; predicted unit-gain SIR {lin2db(sir_nb_ofdm_theory(scn.pu, scn.cu, c)):.2f} dB")
