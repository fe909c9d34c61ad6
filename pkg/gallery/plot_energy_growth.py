"""
Energy growth and power-law exponents
=====================================

The mean kinetic energy ``E(j) = sum n^2 P / 2`` grows as a power of the
step count. A perfectly resonant walk is ballistic and its exponent creeps
up towards 2 as the window moves to later steps. The quasi-momentum spread
slows both walks, the ``Y``-coin walk more than the Hadamard walk.
"""

import numpy as np

from _common import plt, save
from aokrwalk import KickParams, QuasiMomentumEnsemble, RatchetSpec, ensemble_distribution
from aokrwalk.analysis import fit_power_law, mean_energy
from aokrwalk.evolution import original_protocol, swapped_protocol

k, steps = 1.45, 15
spec = RatchetSpec([0, 1])
ens = QuasiMomentumEnsemble(0.025, 1000, seed=2024)

fig, ax = plt.subplots(figsize=(6, 4.5))
for label, proto in (("Hadamard coin", swapped_protocol()), ("Y coin", original_protocol())):
    for fwhm, style in ((0.0, ":"), (0.025, "-")):
        e = QuasiMomentumEnsemble(fwhm, ens.n_samples if fwhm else 1, ens.seed)
        series = mean_energy(ensemble_distribution(proto, spec, steps, KickParams(k), e))
        fit = fit_power_law(series, (2, steps))
        j = series.steps[1:]
        line, = ax.loglog(j, series.values[1:], style, marker="o", ms=3,
                          label=f"{label}, FWHM {fwhm}: {fit.exponent:.2f} +/- {fit.stderr:.2f}")
        if fwhm:
            ax.loglog(j, fit.prefactor * j ** fit.exponent, color=line.get_color(), alpha=0.3, lw=4)
        print(f"{label:14s} fwhm {fwhm:<6} exponent {fit.exponent:.3f} +/- {fit.stderr:.3f}")
ax.set_xlabel("step j")
ax.set_ylabel("mean energy E(j)")
ax.legend(fontsize=8)
save(fig, "energy_growth.png")
