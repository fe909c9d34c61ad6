"""Energy growth, power-law fits, central-peak diagnostics and walk comparison."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

from .evolution import DistributionHistory


class DomainError(ValueError):
    """Input outside the domain of a fit (e.g. non-positive energies)."""


@dataclass(frozen=True)
class EnergySeries:
    steps: np.ndarray
    values: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "E"])
        for j, e in zip(self.steps, self.values):
            w.writerow([int(j), format(float(e), ".17g")])
        return buf.getvalue()


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    stderr: float
    fit_range: tuple[int, int]
    prefactor: float = float("nan")

    def to_json(self) -> str:
        return json.dumps({
            "exponent": self.exponent,
            "stderr": self.stderr,
            "fit_range": list(self.fit_range),
            "prefactor": self.prefactor,
        }, indent=1)


@dataclass(frozen=True)
class ComparisonResult:
    pixels: np.ndarray
    total_error: float
    scale_a: float
    skipped: int

    def summary(self) -> dict:
        return {"total_error": self.total_error, "scale_a": self.scale_a,
                "skipped_pixels": self.skipped, "evaluated_pixels": int(np.isfinite(self.pixels).sum())}


def mean_energy(history: DistributionHistory) -> EnergySeries:
    """``E(j) = 1/2 sum_n n^2 P(n, j)`` on the integer momenta, for ``j = 0..steps``."""
    n = history.momenta.astype(float)
    values = history.total @ (n * n) / 2.0
    return EnergySeries(np.arange(history.steps + 1), values)


def fit_power_law(series: EnergySeries, fit_range: Optional[tuple[int, int]] = None) -> PowerLawFit:
    """Least-squares line through ``(log j, log E)`` over an inclusive step window.

    The default window is ``[2, last step]``.
    """
    steps = np.asarray(series.steps)
    if fit_range is None:
        fit_range = (2, int(steps.max()))
    lo, hi = fit_range
    mask = (steps >= lo) & (steps <= hi)
    if mask.sum() < 3:
        raise ValueError(f"fit window {fit_range} holds {int(mask.sum())} points, need >= 3")
    j, e = steps[mask], np.asarray(series.values)[mask]
    if np.any(j <= 0) or np.any(~(e > 0)):
        raise DomainError(f"energies must be positive on steps >= 1 in window {fit_range}")
    res = stats.linregress(np.log(j), np.log(e))
    return PowerLawFit(float(res.slope), float(res.stderr), (int(lo), int(hi)),
                       float(np.exp(res.intercept)))


def central_fraction(p, momenta, halfwidth: int = 2) -> float:
    """Probability with ``|n| <= halfwidth``."""
    if halfwidth < 0:
        raise ValueError(f"halfwidth must be >= 0, got {halfwidth}")
    p = np.asarray(p)
    return float(p[np.abs(np.asarray(momenta)) <= halfwidth].sum())


def side_peak_bins(p, momenta, halfwidth: int = 2, rel_height: float = 0.25) -> tuple[int, int]:
    """Momenta of the outermost side peaks left and right of the central window.

    A side peak is a local maximum holding at least ``rel_height`` of the
    largest bin on its side; of those, the one farthest from ``n = 0`` wins.
    """
    p, n = np.asarray(p, dtype=float), np.asarray(momenta)
    out = []
    for side in (n < -halfwidth, n > halfwidth):
        if not side.any():
            raise ValueError(f"no bins beyond |n| > {halfwidth}")
        ps, ns = p[side], n[side]
        padded = np.concatenate([[-np.inf], ps, [-np.inf]])
        cand = (ps >= padded[:-2]) & (ps >= padded[2:]) & (ps >= rel_height * ps.max())
        far = ns[cand]
        out.append(int(far[np.argmax(np.abs(far))]))
    return out[0], out[1]


def side_peak_mass(p, momenta, bins: Optional[tuple[int, int]] = None, halfwidth: int = 2) -> float:
    """Probability in the two side-peak bins (located on ``p`` unless given)."""
    p, n = np.asarray(p), np.asarray(momenta)
    if bins is None:
        bins = side_peak_bins(p, n, halfwidth)
    return float(sum(p[n == b].sum() for b in bins))


def compare_walks(observed, predicted, scale_a: float = 1.0) -> ComparisonResult:
    """Pixelwise ``|obs - a pred| / (a pred)``; pixels with ``pred == 0`` are skipped (NaN)."""
    obs = np.asarray(observed, dtype=float)
    pred = np.asarray(predicted, dtype=float)
    if obs.shape != pred.shape:
        raise ValueError(f"shape mismatch: observed {obs.shape} vs predicted {pred.shape}")
    if np.any(pred < 0):
        raise ValueError("predicted distribution has negative pixels")
    if not scale_a > 0:
        raise ValueError(f"scale factor must be > 0, got {scale_a}")
    ok = pred > 0
    pixels = np.full(obs.shape, np.nan)
    scaled = scale_a * pred[ok]
    pixels[ok] = np.abs(obs[ok] - scaled) / scaled
    return ComparisonResult(pixels, float(pixels[ok].sum()), float(scale_a), int((~ok).sum()))
