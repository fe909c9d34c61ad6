"""
A thermal background under the walk
===================================

Part of the atoms are not condensed and carry quasi-momenta spread over
the whole Brillouin zone. Mixing 12.5 % uniform draws into a narrow
Gaussian ensemble adds a diffuse, slowly spreading component around the
centre while the walk arms survive.
"""

from _common import plt, save
from aokrwalk import KickParams, QuasiMomentumEnsemble, RatchetSpec, ensemble_distribution
from aokrwalk.analysis import central_fraction
from aokrwalk.evolution import original_protocol

k, steps = 1.45, 15
spec = RatchetSpec([0, 1])

fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
for ax, f in zip(axes, (0.0, 0.125)):
    ens = QuasiMomentumEnsemble(0.025, 1000, seed=11, thermal_fraction=f)
    hist = ensemble_distribution(original_protocol(), spec, steps, KickParams(k), ens)
    ax.imshow(hist.total, origin="lower", aspect="auto", cmap="magma",
              extent=[hist.momenta[0] - 0.5, hist.momenta[-1] + 0.5, -0.5, steps + 0.5])
    ax.set_xlim(-30, 30)
    centre = central_fraction(hist.at(steps), hist.momenta, 2)
    ax.set_title(f"thermal fraction {f}, centre {centre:.3f}")
    ax.set_xlabel("momentum n")
    print(f"thermal fraction {f}: {ens.n_thermal} uniform draws, central fraction {centre:.4f}")
axes[0].set_ylabel("step j")
save(fig, "thermal_cloud.png")
