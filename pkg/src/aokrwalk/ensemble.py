"""Quasi-momentum ensembles and beta-averaged walk distributions.

Random numbers come from numpy's ``PCG64`` bit generator seeded with the
ensemble seed. Uniform (thermal) draws are taken first, then the Gaussian
draws, so the sample order is fixed by the seed alone.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError
from .evolution import DistributionHistory, KickParams, WalkProtocol, run_walk
from .lattice import RatchetSpec, make_lattice, ratchet_state

FWHM_TO_SIGMA = 1.0 / math.sqrt(8.0 * math.log(2.0))


@dataclass(frozen=True)
class QuasiMomentumEnsemble:
    fwhm: float = 0.0
    n_samples: int = 1000
    seed: int = 0
    thermal_fraction: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.fwhm) or self.fwhm < 0:
            raise ValueError(f"fwhm must be >= 0, got {self.fwhm}")
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        if not 0.0 <= self.thermal_fraction <= 1.0:
            raise ValueError(f"thermal_fraction must lie in [0, 1], got {self.thermal_fraction}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    @property
    def n_thermal(self) -> int:
        return int(math.floor(self.thermal_fraction * self.n_samples + 0.5))

    def describe(self) -> dict:
        return {
            "fwhm": self.fwhm,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "thermal_fraction": self.thermal_fraction,
            "rng": "numpy PCG64",
        }


def sample_betas(ensemble: QuasiMomentumEnsemble) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(ensemble.seed))
    n_th = ensemble.n_thermal
    thermal = rng.random(n_th)
    gauss = rng.normal(0.0, ensemble.fwhm * FWHM_TO_SIGMA, ensemble.n_samples - n_th)
    betas = np.concatenate([thermal, np.mod(gauss, 1.0)])
    # mod of a tiny negative number rounds up to exactly 1.0
    betas[betas >= 1.0] = 0.0
    return betas


def _run_one(args):
    protocol, spec, steps, params, beta, index = args
    lattice = make_lattice(steps, params.k, spec)
    try:
        hist = run_walk(protocol, ratchet_state(spec, lattice), steps, params, beta)
    except TruncationError as exc:
        raise TruncationError(f"sample {index} (beta={beta!r}): {exc}") from None
    return hist.spin2, hist.spin1, hist.norms


def ensemble_distribution(protocol: WalkProtocol, spec: RatchetSpec, steps: int,
                          params: KickParams, ensemble: QuasiMomentumEnsemble,
                          workers: int = 1) -> DistributionHistory:
    """Average of the per-beta histories, reduced in sample order.

    ``workers`` only changes wall time; each sample is computed by the same
    code path and summed sequentially, so the result is bitwise identical
    for any worker count.
    """
    betas = sample_betas(ensemble)
    jobs = [(protocol, spec, steps, params, float(b), i) for i, b in enumerate(betas)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_run_one, jobs, chunksize=max(1, len(jobs) // (4 * workers)))
            results = list(results)
    else:
        results = [_run_one(job) for job in jobs]

    sum2 = np.zeros_like(results[0][0])
    sum1 = np.zeros_like(results[0][1])
    sumn = np.zeros_like(results[0][2])
    for s2, s1, nm in results:
        sum2 += s2
        sum1 += s1
        sumn += nm
    n = len(results)
    lattice = make_lattice(steps, params.k, spec)
    meta = {
        "protocol": protocol.describe(),
        "k": params.k,
        "tau": params.tau,
        "beta": None,
        "ensemble": ensemble.describe(),
    }
    return DistributionHistory(lattice.momenta, sum2 / n, sum1 / n, sumn / n, meta)
