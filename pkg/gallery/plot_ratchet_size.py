"""
Wider ratchets empty the centre
===============================

The Hadamard walk's central peak comes from interference between the
ratchet classes. Spreading the initial state over more neighbouring
momenta (S = 2, 3, 5) drains it, which shows up as a falling probability
in ``|n| <= 2``.
"""

from _common import plt, save
from aokrwalk import KickParams, RatchetSpec, make_lattice, ratchet_state, run_walk
from aokrwalk.analysis import central_fraction
from aokrwalk.evolution import swapped_protocol

k, steps = 1.45, 20

fig, ax = plt.subplots(figsize=(7, 4))
for size in (2, 3, 5):
    spec = RatchetSpec(range(size))
    lattice = make_lattice(steps, k, spec)
    hist = run_walk(swapped_protocol(), ratchet_state(spec, lattice), steps, KickParams(k))
    final = hist.at(steps)
    frac = central_fraction(final, lattice.momenta, 2)
    ax.plot(lattice.momenta, final, drawstyle="steps-mid", label=f"S = {size}, centre {frac:.3f}")
    print(f"S = {size}: central fraction {frac:.4f}")

ax.set_xlim(-35, 35)
ax.set_xlabel("momentum n")
ax.set_ylabel(f"P(n) after {steps} steps")
ax.legend()
save(fig, "ratchet_size.png")
