"""Floquet operators of the spinor kicked rotor and walk protocols.

One walk step is a coin followed by ``U = U_free U_kick``. The kick acts
in the momentum basis through the exact Bessel kernel
``<n| exp(-/+ i k cos(theta)) |m> = (-/+ i)^(m-n) J_(m-n)(k)``.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import __version__
from .bessel import bessel_j_orders
from .errors import AliasingError, TruncationError
from .gates import COINS, CoinGate, hadamard_gate, mw_gate, W_COIN, Y_COIN
from .lattice import MomentumLattice, SpinorWavefunction

RESONANT_TAU = 4 * math.pi
LEAKAGE_TOL = 1e-9
EDGE_SITES = 2

BEFORE_KICK = "before-kick"
AFTER_KICK = "after-kick"

_I_POWERS = np.array([1, 1j, -1, -1j])


@dataclass(frozen=True)
class KickParams:
    k: float
    tau: float = RESONANT_TAU
    light_shift: bool = False

    def __post_init__(self):
        if not math.isfinite(self.k) or self.k < 0:
            raise ValueError(f"kick strength k must be finite and >= 0, got {self.k}")
        if not math.isfinite(self.tau) or self.tau <= 0:
            raise ValueError(f"kick period tau must be finite and > 0, got {self.tau}")


@dataclass(frozen=True)
class WalkProtocol:
    init_coin: CoinGate
    step_coin: CoinGate
    light_shift: bool = False
    coin_position: str = BEFORE_KICK
    name: str = "custom"

    def __post_init__(self):
        if self.coin_position not in (BEFORE_KICK, AFTER_KICK):
            raise ValueError(f"coin_position must be {BEFORE_KICK!r} or {AFTER_KICK!r}")

    def describe(self) -> dict:
        return {
            "name": self.name,
            "init_coin": self.init_coin.format(),
            "step_coin": self.step_coin.format(),
            "light_shift": self.light_shift,
            "coin_position": self.coin_position,
        }


def original_protocol() -> WalkProtocol:
    """Initialize with W, step with Y."""
    return WalkProtocol(W_COIN, Y_COIN, name="original")


def swapped_protocol() -> WalkProtocol:
    """Initialize with Y, step with the Hadamard coin."""
    return WalkProtocol(Y_COIN, hadamard_gate(), name="swapped")


def lightshift_raw_protocol(chi: float = math.pi) -> WalkProtocol:
    """Y initialization, MW steps ``M(pi/2, chi)``, uncompensated light shift in every kick."""
    return WalkProtocol(Y_COIN, mw_gate(math.pi / 2, chi), light_shift=True, name="lightshift-raw")


def protocol_by_name(name: str, chi: float = math.pi, init: str = "Y", step: str = "H",
                     light_shift: bool = False) -> WalkProtocol:
    if name == "original":
        return original_protocol()
    if name == "swapped":
        return swapped_protocol()
    if name == "lightshift-raw":
        return lightshift_raw_protocol(chi)
    if name == "custom":
        return WalkProtocol(parse_coin(init), parse_coin(step), light_shift=light_shift, name="custom")
    raise ValueError(f"unknown protocol {name!r}")


def parse_coin(text: str) -> CoinGate:
    """Coin from a short name (W, Y, H, I) or ``mw:alpha,chi`` in radians."""
    if text in COINS:
        return COINS[text]
    if text.startswith("mw:"):
        alpha, chi = (float(v) for v in text[3:].split(","))
        return mw_gate(alpha, chi)
    raise ValueError(f"unknown coin {text!r}")


@lru_cache(maxsize=64)
def kick_kernel(k: float, size: int) -> np.ndarray:
    """Matrix of ``<n| exp(-i k cos(theta)) |m>`` on a lattice of ``size`` sites."""
    d = np.arange(size)[None, :] - np.arange(size)[:, None]  # m - n
    jn = bessel_j_orders(size - 1, k)
    a = np.abs(d)
    vals = jn[a] * np.where((d < 0) & (a % 2 == 1), -1.0, 1.0)
    kern = _I_POWERS[(-d) % 4] * vals
    kern.setflags(write=False)
    return kern


def _edge_mass(p: np.ndarray) -> float:
    return float(p[:EDGE_SITES].sum() + p[-EDGE_SITES:].sum())


def apply_kick(state: SpinorWavefunction, params: KickParams) -> SpinorWavefunction:
    """Kick ``exp(-i sigma_z k cos(theta))``, plus ``exp(-i sigma_z k)`` if the light shift is on.

    Raises TruncationError when more than ``LEAKAGE_TOL`` of probability is
    lost through, or piled up at, the lattice boundary.
    """
    kern = kick_kernel(float(params.k), state.lattice.size)
    amp2 = kern @ state.amp2
    amp1 = kern.conj() @ state.amp1
    if params.light_shift:
        amp2 = amp2 * np.exp(-1j * params.k)
        amp1 = amp1 * np.exp(1j * params.k)
    out = state.replace(amp2, amp1)
    leak = abs(state.norm() - out.norm()) + _edge_mass(out.total_probability())
    if leak > LEAKAGE_TOL:
        raise TruncationError(
            f"edge leakage {leak:.3g} on lattice [{state.lattice.n_min}, {state.lattice.n_max}]"
            f" at k={params.k}"
        )
    return out


def free_phases(lattice: MomentumLattice, tau: float, beta: float) -> np.ndarray:
    if not 0.0 <= beta < 1.0:
        raise ValueError(f"quasimomentum beta must lie in [0, 1), got {beta}")
    if not math.isfinite(tau) or tau <= 0:
        raise ValueError(f"tau must be finite and > 0, got {tau}")
    p = lattice.momenta + beta
    # phase in units of 2pi, reduced before exp() so the Talbot time stays exact on integers
    turns = (tau / RESONANT_TAU) * p * p
    return np.exp(-2j * math.pi * (turns - np.floor(turns)))


def apply_free(state: SpinorWavefunction, tau: float, beta: float) -> SpinorWavefunction:
    ph = free_phases(state.lattice, tau, beta)
    return state.replace(state.amp2 * ph, state.amp1 * ph)


def apply_coin(state: SpinorWavefunction, gate: CoinGate) -> SpinorWavefunction:
    return state.replace(
        gate.m11 * state.amp2 + gate.m12 * state.amp1,
        gate.m21 * state.amp2 + gate.m22 * state.amp1,
    )


def quadrature_kick_oracle(state: SpinorWavefunction, params: KickParams,
                           grid_points: Optional[int] = None) -> SpinorWavefunction:
    """Kick evaluated on an angle grid by direct trapezoidal quadrature.

    Independent of the Bessel kernel: the state is synthesized as
    ``psi(theta) = sum_n a_n e^{i n theta}``, multiplied pointwise by the
    kick, and projected back onto every lattice momentum.
    """
    size = state.lattice.size
    if grid_points is None:
        grid_points = 4 * size
    if grid_points < 4 * size:
        raise AliasingError(f"grid of {grid_points} points is below 4 x lattice size ({4 * size})")
    theta = 2 * math.pi * np.arange(grid_points) / grid_points
    n = state.lattice.momenta
    basis = np.exp(1j * np.outer(theta, n))  # (grid, n)
    kick = np.exp(-1j * params.k * np.cos(theta))
    out = []
    for amp, factor in ((state.amp2, kick), (state.amp1, kick.conj())):
        psi = basis @ amp * factor
        out.append(basis.conj().T @ psi / grid_points)
    amp2, amp1 = out
    if params.light_shift:
        amp2 = amp2 * np.exp(-1j * params.k)
        amp1 = amp1 * np.exp(1j * params.k)
    return state.replace(amp2, amp1)


@dataclass(eq=False)
class DistributionHistory:
    """Momentum distributions after steps ``0..steps``.

    Arrays are indexed ``[j, site]``; ``momenta`` gives the site momenta.
    """

    momenta: np.ndarray
    spin2: np.ndarray
    spin1: np.ndarray
    norms: np.ndarray = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.momenta = np.asarray(self.momenta, dtype=int)
        self.spin2 = np.asarray(self.spin2, dtype=float)
        self.spin1 = np.asarray(self.spin1, dtype=float)
        if self.norms is None:
            self.norms = self.total.sum(axis=1)
        self.norms = np.asarray(self.norms, dtype=float)

    @property
    def total(self) -> np.ndarray:
        return self.spin2 + self.spin1

    @property
    def steps(self) -> int:
        return self.spin2.shape[0] - 1

    def at(self, j: int) -> np.ndarray:
        return self.total[j]

    def to_csv(self, which: str = "total") -> str:
        """Rows are momenta, columns are steps ``0..steps``."""
        data = {"total": self.total, "spin2": self.spin2, "spin1": self.spin1}[which]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n"] + [str(j) for j in range(self.steps + 1)])
        for i, n in enumerate(self.momenta):
            w.writerow([int(n)] + [format(float(v), ".17g") for v in data[:, i]])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, meta: Optional[dict] = None) -> "DistributionHistory":
        """Load a total-distribution CSV; spin components are not recoverable and set to zero for |1>."""
        n, p = read_matrix_csv(text)
        return cls(n, p.T, np.zeros_like(p.T), meta=dict(meta or {}))

    def to_json(self) -> str:
        env = {
            "library_version": __version__,
            **self.meta,
            "lattice": [int(self.momenta[0]), int(self.momenta[-1])],
            "steps": self.steps,
            "spin2": self.spin2.tolist(),
            "spin1": self.spin1.tolist(),
        }
        return json.dumps(env, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "DistributionHistory":
        env = json.loads(text)
        lo, hi = env.pop("lattice")
        spin2 = env.pop("spin2")
        spin1 = env.pop("spin1")
        env.pop("steps", None)
        return cls(np.arange(lo, hi + 1), spin2, spin1, meta=env)


def read_matrix_csv(text: str) -> tuple[np.ndarray, np.ndarray]:
    """Parse a ``n,<col>,<col>...`` CSV into momenta and a ``(rows, cols)`` matrix."""
    rows = list(csv.reader(io.StringIO(text)))
    if len(rows) < 2 or rows[0][0] != "n":
        raise ValueError("matrix CSV needs a header row starting with 'n'")
    body = rows[1:]
    width = len(rows[0])
    if any(len(r) != width for r in body):
        raise ValueError("ragged matrix CSV")
    n = np.array([int(r[0]) for r in body])
    mat = np.array([[float(v) for v in r[1:]] for r in body])
    return n, mat


def run_walk(protocol: WalkProtocol, initial: SpinorWavefunction, steps: int,
             params: KickParams, beta: float = 0.0) -> DistributionHistory:
    """Run ``steps`` walk steps and record the distribution after each one.

    Step 1 applies ``init_coin`` then ``U``; later steps apply ``step_coin``
    then ``U``. With ``coin_position='after-kick'`` each step is ``U`` then
    ``step_coin``, still preceded once by ``init_coin``. The light-shift flag
    of the protocol overrides the one in ``params``.
    """
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    params = dataclasses.replace(params, light_shift=protocol.light_shift)
    free = free_phases(initial.lattice, params.tau, beta)

    def U(st):
        st = apply_kick(st, params)
        return st.replace(st.amp2 * free, st.amp1 * free)

    state = initial
    p2, p1 = state.probabilities()
    spin2, spin1, norms = [p2], [p1], [state.norm()]
    state = apply_coin(state, protocol.init_coin)
    for j in range(1, steps + 1):
        if protocol.coin_position == BEFORE_KICK:
            if j > 1:
                state = apply_coin(state, protocol.step_coin)
            state = U(state)
        else:
            state = apply_coin(U(state), protocol.step_coin)
        p2, p1 = state.probabilities()
        spin2.append(p2)
        spin1.append(p1)
        norms.append(state.norm())

    meta = {
        "protocol": protocol.describe(),
        "k": params.k,
        "tau": params.tau,
        "beta": beta,
    }
    return DistributionHistory(initial.momenta, np.array(spin2), np.array(spin1),
                               np.array(norms), meta)
