"""
Quasi-momentum spread washes out the side peaks
===============================================

A real condensate has a small spread of quasi-momenta beta. Away from
beta = 0 the free evolution no longer cancels, and each atom's walk
dephases differently. Averaging 1000 walks with Gaussian beta of growing
width fades the ballistic side peaks of both the Hadamard walk and the
light-shift-driven walk with chi = pi.
"""

import math

from _common import plt, save
from aokrwalk import KickParams, QuasiMomentumEnsemble, RatchetSpec, ensemble_distribution
from aokrwalk.analysis import side_peak_bins, side_peak_mass
from aokrwalk.evolution import lightshift_raw_protocol, swapped_protocol

k, steps = 1.45, 15
spec = RatchetSpec([0, 1])
widths = (0.0, 0.01, 0.025)
protocols = {"Hadamard coin": swapped_protocol(), "light shift, chi = pi": lightshift_raw_protocol(math.pi)}

fig, axes = plt.subplots(len(protocols), len(widths), figsize=(12, 6.5), sharex=True, sharey=True)
for row, (name, proto) in zip(axes, protocols.items()):
    bins = None
    for ax, fwhm in zip(row, widths):
        hist = ensemble_distribution(proto, spec, steps, KickParams(k),
                                     QuasiMomentumEnsemble(fwhm, 1000, seed=6))
        if bins is None:
            bins = side_peak_bins(hist.at(steps), hist.momenta)
        mass = side_peak_mass(hist.at(steps), hist.momenta, bins)
        ax.imshow(hist.total, origin="lower", aspect="auto", cmap="magma",
                  extent=[hist.momenta[0] - 0.5, hist.momenta[-1] + 0.5, -0.5, steps + 0.5])
        ax.set_xlim(-30, 30)
        ax.set_title(f"{name}\nFWHM {fwhm}, side peaks {mass:.3f}", fontsize=9)
        print(f"{name:24s} fwhm {fwhm:<6} side-peak mass {mass:.4f}")
for ax in axes[-1]:
    ax.set_xlabel("momentum n")
for ax in axes[:, 0]:
    ax.set_ylabel("step j")
save(fig, "quasimomentum_averaging.png")
