"""Momentum-space quantum walks on the spinor atom-optics kicked rotor."""

__version__ = "0.1.0"

from .errors import AliasingError, SizeError, TruncationError, WalkError
from .lattice import (
    MomentumLattice,
    RatchetSpec,
    SpinorWavefunction,
    make_lattice,
    ratchet_state,
)
from .gates import CoinGate, hadamard_gate, lightshift_coin, mw_gate, W_COIN, Y_COIN
from .evolution import (
    DistributionHistory,
    KickParams,
    WalkProtocol,
    apply_coin,
    apply_free,
    apply_kick,
    quadrature_kick_oracle,
    run_walk,
    protocol_by_name,
)
from .analytic import (
    AnalyticCoefficients,
    LaurentPolynomial,
    analytic_distribution,
    coefficients_closed_form,
    coefficients_recursion,
)
from .ensemble import QuasiMomentumEnsemble, ensemble_distribution, sample_betas
from .analysis import (
    ComparisonResult,
    EnergySeries,
    PowerLawFit,
    central_fraction,
    compare_walks,
    fit_power_law,
    mean_energy,
    side_peak_mass,
)
