"""2x2 coin unitaries acting on the internal spin.

``sigma_z`` has eigenvalue +1 on the first basis vector ``|2>``. Global
phases are kept exactly as the matrices are written.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class CoinGate:
    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def __post_init__(self):
        for name in ("m11", "m12", "m21", "m22"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        m = self.matrix
        err = np.max(np.abs(m @ m.conj().T - np.eye(2)))
        if not err <= UNITARITY_TOL:
            raise ValueError(f"coin is not unitary (max |MM^dag - I| = {err:.3g})")

    @classmethod
    def from_matrix(cls, m) -> "CoinGate":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"coin matrix must be 2x2, got shape {m.shape}")
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def __matmul__(self, other: "CoinGate") -> "CoinGate":
        return CoinGate.from_matrix(self.matrix @ other.matrix)

    def format(self) -> str:
        """Two text rows of ``(re,im)`` entries, 17 significant digits."""
        def entry(z):
            return f"({z.real:.17g},{z.imag:.17g})"
        return "\n".join(" ".join(entry(z) for z in row) for row in self.matrix)

    @classmethod
    def parse(cls, text: str) -> "CoinGate":
        rows = []
        for line in text.strip().splitlines():
            row = []
            for tok in line.split():
                re, im = tok.strip("()").split(",")
                row.append(complex(float(re), float(im)))
            rows.append(row)
        return cls.from_matrix(rows)


def _check_finite(**kw):
    for name, v in kw.items():
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v}")


def mw_gate(alpha: float, chi: float) -> CoinGate:
    """Microwave rotation by ``alpha`` about an equatorial axis set by ``chi``."""
    _check_finite(alpha=alpha, chi=chi)
    c, s = math.cos(alpha / 2), math.sin(alpha / 2)
    e = complex(math.cos(chi), math.sin(chi))
    return CoinGate(c, e.conjugate() * s, -e * s, c)


def hadamard_gate() -> CoinGate:
    r = 1 / math.sqrt(2)
    return CoinGate(r, r, r, -r)


def lightshift_coin(chi: float, k: float) -> CoinGate:
    """MW pulse ``M(pi/2, chi)`` preceded by the light-shift phase ``exp(-i k sigma_z)``."""
    _check_finite(chi=chi, k=k)
    phase = np.diag([np.exp(-1j * k), np.exp(1j * k)])
    return CoinGate.from_matrix(mw_gate(math.pi / 2, chi).matrix @ phase)


W_COIN = mw_gate(math.pi / 2, 0.0)
Y_COIN = mw_gate(math.pi / 2, -math.pi / 2)
IDENTITY = CoinGate(1, 0, 0, 1)

COINS = {"W": W_COIN, "Y": Y_COIN, "H": hadamard_gate(), "I": IDENTITY}
