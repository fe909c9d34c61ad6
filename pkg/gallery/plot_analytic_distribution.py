"""
Closed-form distribution of the Hadamard walk
=============================================

At resonance the propagator is a pair of Laurent polynomials in
``exp(i k cos(theta))``. Their coefficients are exact rationals and the
momentum distribution becomes a sum of squared Bessel sums. Here the
closed form is overlaid on the step-by-step simulation for j = 15 and 25.
"""

import numpy as np

from _common import plt, save
from aokrwalk import KickParams, RatchetSpec, make_lattice, ratchet_state, run_walk
from aokrwalk.analytic import analytic_distribution, coefficients_closed_form
from aokrwalk.evolution import swapped_protocol

k = 1.45
spec = RatchetSpec([0, 1])

# The coefficient table is exact; 2^N a_l are integers.
coef = coefficients_closed_form(4)
print("N = 4, 2^N a1:", coef.scaled_integers()[0])
print("N = 4, 2^N a2:", coef.scaled_integers()[1])

fig, axes = plt.subplots(1, 2, figsize=(11, 4), sharey=True)
for ax, j in zip(axes, (15, 25)):
    lattice = make_lattice(j, k, spec)
    closed = analytic_distribution(j, k, spec, lattice)
    hist = run_walk(swapped_protocol(), ratchet_state(spec, lattice), j, KickParams(k))
    dev = np.max(np.abs(closed - hist.at(j)))
    ax.bar(lattice.momenta, hist.at(j), width=1.0, color="0.8", label="simulation")
    ax.plot(lattice.momenta, closed, "o", ms=3, color="C3", label="closed form")
    ax.set_xlim(-(j + 15), j + 15)
    ax.set_title(f"j = {j}, max deviation {dev:.1e}")
    ax.set_xlabel("momentum n")
axes[0].set_ylabel("P(n)")
axes[0].legend()
save(fig, "analytic_distribution.png")
