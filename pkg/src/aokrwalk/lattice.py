"""Truncated integer-momentum lattice, spinor states and ratchet initial states.

Momenta are integers in units of two photon recoils. Internal states are
ordered as ``|2> = (1, 0)`` and ``|1> = (0, 1)``; ``amp2`` is always the
first spinor component.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

TRUNCATION_MARGIN = 10


@dataclass(frozen=True)
class MomentumLattice:
    n_min: int
    n_max: int

    def __post_init__(self):
        if not (self.n_min < 0 < self.n_max):
            raise ValueError(
                f"lattice must satisfy n_min < 0 < n_max, got [{self.n_min}, {self.n_max}]"
            )

    @property
    def size(self) -> int:
        return self.n_max - self.n_min + 1

    @property
    def momenta(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def index(self, n: int) -> int:
        if not self.n_min <= n <= self.n_max:
            raise IndexError(f"momentum {n} outside lattice [{self.n_min}, {self.n_max}]")
        return n - self.n_min

    def contains(self, n: int) -> bool:
        return self.n_min <= n <= self.n_max


@dataclass(frozen=True)
class RatchetSpec:
    """Momentum classes of a ratchet state; class ``s`` gets ``e^{i s pi/2}/sqrt(S)``."""

    classes: tuple[int, ...]

    def __init__(self, classes: Iterable[int]):
        cls = tuple(int(s) for s in classes)
        if not cls:
            raise ValueError("ratchet spec needs at least one momentum class")
        if len(set(cls)) != len(cls):
            raise ValueError(f"ratchet classes must be distinct, got {cls}")
        object.__setattr__(self, "classes", cls)

    @classmethod
    def neighbours(cls, size: int, start: int = 0) -> "RatchetSpec":
        return cls(range(start, start + size))

    @property
    def size(self) -> int:
        return len(self.classes)

    def amplitudes(self) -> np.ndarray:
        s = np.asarray(self.classes)
        # i**s exactly, without going through exp()
        phases = np.array([1, 1j, -1, -1j])[s % 4]
        return phases / math.sqrt(self.size)


SPIN2 = "2"
SPIN1 = "1"


@dataclass(frozen=True, eq=False)
class SpinorWavefunction:
    lattice: MomentumLattice
    amp2: np.ndarray
    amp1: np.ndarray

    def __post_init__(self):
        for name in ("amp2", "amp1"):
            arr = np.array(getattr(self, name), dtype=complex)
            if arr.shape != (self.lattice.size,):
                raise ValueError(
                    f"{name} has shape {arr.shape}, lattice needs ({self.lattice.size},)"
                )
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def momenta(self) -> np.ndarray:
        return self.lattice.momenta

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amp2) ** 2) + np.sum(np.abs(self.amp1) ** 2))

    def probabilities(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-site probabilities ``(P_2, P_1)``."""
        return np.abs(self.amp2) ** 2, np.abs(self.amp1) ** 2

    def total_probability(self) -> np.ndarray:
        p2, p1 = self.probabilities()
        return p2 + p1

    def replace(self, amp2, amp1) -> "SpinorWavefunction":
        return SpinorWavefunction(self.lattice, amp2, amp1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "re_amp2", "im_amp2", "re_amp1", "im_amp1"])
        for n, a2, a1 in zip(self.momenta, self.amp2, self.amp1):
            w.writerow([int(n)] + [_fmt(v) for v in (a2.real, a2.imag, a1.real, a1.imag)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SpinorWavefunction":
        rows = list(csv.DictReader(io.StringIO(text)))
        n = np.array([int(r["n"]) for r in rows])
        if n.size == 0 or np.any(np.diff(n) != 1):
            raise ValueError("state CSV must list consecutive momenta")
        lattice = MomentumLattice(int(n[0]), int(n[-1]))
        amp2 = np.array([float(r["re_amp2"]) + 1j * float(r["im_amp2"]) for r in rows])
        amp1 = np.array([float(r["re_amp1"]) + 1j * float(r["im_amp1"]) for r in rows])
        return cls(lattice, amp2, amp1)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def required_halfwidth(j_max: int, k: float, n_classes: int) -> int:
    """Lattice sites kept on each side of the ratchet classes."""
    return 2 * j_max * math.ceil(k) + n_classes + TRUNCATION_MARGIN


def make_lattice(j_max: int, k: float, spec: RatchetSpec) -> MomentumLattice:
    """Smallest lattice used for a ``j_max``-step walk at kick strength ``k``.

    The ratchet span is padded by :func:`required_halfwidth` on both sides,
    which is twice the ballistic reach ``j * ceil(k)`` plus a safety margin.
    """
    if spec is None or not spec.classes:
        raise ValueError("ratchet spec must not be empty")
    k = float(k)
    if not math.isfinite(k):
        raise ValueError(f"kick strength k must be finite, got {k}")
    if k < 0:
        raise ValueError(f"kick strength k must be >= 0, got {k}")
    if j_max < 0:
        raise ValueError(f"j_max must be >= 0, got {j_max}")
    half = required_halfwidth(j_max, k, spec.size)
    return MomentumLattice(min(min(spec.classes), 0) - half, max(max(spec.classes), 0) + half)


def ratchet_state(spec: RatchetSpec, lattice: MomentumLattice, spin: str = SPIN2) -> SpinorWavefunction:
    """Ratchet superposition placed entirely in internal state ``spin``."""
    if spin not in (SPIN1, SPIN2):
        raise ValueError(f"spin must be '1' or '2', got {spin!r}")
    walker = np.zeros(lattice.size, dtype=complex)
    for s, a in zip(spec.classes, spec.amplitudes()):
        walker[lattice.index(s)] = a
    empty = np.zeros(lattice.size, dtype=complex)
    if spin == SPIN2:
        return SpinorWavefunction(lattice, walker, empty)
    return SpinorWavefunction(lattice, empty, walker)
