"""Information entropies and squeezing diagnostics for isotonic-oscillator eigenstates."""

from .observables import (
    BBM_BOUND,
    DensityCurve,
    EntropyReport,
    UncertaintyReport,
    bbm_report,
    density_samples,
    harmonic_ground_entropy,
    heisenberg_report,
    momentum_entropy,
    position_entropy,
    variance_p,
    variance_x,
)
from .states import (
    StateLabel,
    coefficient_ck,
    eigenvalue,
    eval_phi,
    eval_psi,
    eval_psi_derivative,
    gamma_from_a,
)

__version__ = "0.1.0"
