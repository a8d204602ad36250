"""Brute-force cross-checks for the analytic state and observable routines.

Nothing here touches the closed-form momentum amplitude or the general
1F1 routine: the Fourier oracle integrates the position amplitude against
``cos`` and ``sin`` directly, and the gamma = 3/2 checks go through
harmonic-oscillator eigenfunctions built from the Hermite recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .quadrature import IntegrationSpec, entropy_integrand, integrate, integrate_interval
from .states import StateLabel, eigenvalue, eval_psi

__all__ = [
    "OracleConfig",
    "default_cutoff",
    "finite_difference",
    "fourier_oracle",
    "fourier_oracle_density",
    "gram_matrix",
    "harmonic_entropy",
    "hermite_oracle",
]

HERMITE_MAX_N = 25
GRAM_MAX_N = 10


@dataclass(frozen=True)
class OracleConfig:
    """``x_cutoff=None`` means: use :func:`default_cutoff` for the state."""

    x_cutoff: Optional[float] = None
    samples_per_unit: int = 200
    tolerance: float = 1e-11

    def __post_init__(self):
        if self.x_cutoff is not None and not self.x_cutoff > 0:
            raise ValueError("x_cutoff must be positive")
        if self.samples_per_unit < 16:
            raise ValueError("samples_per_unit must be at least 16")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


def default_cutoff(s: StateLabel, threshold: float = 1e-16, step: float = 0.25) -> float:
    """Smallest X on a 0.25 grid, outward from the turning point, with |psi(X)| < threshold."""
    x = math.sqrt(eigenvalue(s))
    while abs(eval_psi(s, x)) >= threshold:
        x += step
    return x


def fourier_oracle(s: StateLabel, p: float, cfg: OracleConfig = OracleConfig()) -> complex:
    """(2 pi)^(-1/2) int_0^X psi(x) exp(-i p x) dx by direct quadrature of both components."""
    cutoff = cfg.x_cutoff if cfg.x_cutoff is not None else default_cutoff(s)
    panels = max(1, math.ceil(cutoff * cfg.samples_per_unit / 21))
    re = integrate_interval(lambda x: eval_psi(s, x) * np.cos(p * x), 0.0, cutoff,
                            cfg.tolerance, cfg.tolerance, 20000, panels)
    im = integrate_interval(lambda x: -eval_psi(s, x) * np.sin(p * x), 0.0, cutoff,
                            cfg.tolerance, cfg.tolerance, 20000, panels)
    return complex(re.value, im.value) / math.sqrt(2.0 * math.pi)


def fourier_oracle_density(s: StateLabel, cfg: OracleConfig = OracleConfig()) -> Callable:
    """Vectorised ``p -> |fourier_oracle(s, p)|^2`` (loops over p)."""

    def f(p):
        pp = np.atleast_1d(np.asarray(p, dtype=float))
        out = np.array([abs(fourier_oracle(s, float(q), cfg)) ** 2 for q in pp])
        return out if np.ndim(p) else float(out[0])

    return f


def hermite_oracle(n: int, x):
    """Normalised full-line harmonic-oscillator eigenfunction of order n (three-term recurrence)."""
    if not 0 <= n <= HERMITE_MAX_N:
        raise ValueError(f"n must lie in 0..{HERMITE_MAX_N}")
    xx = np.asarray(x, dtype=float)
    prev = np.zeros_like(xx)
    cur = math.pi ** -0.25 * np.exp(-0.5 * xx * xx)
    for j in range(n):
        prev, cur = cur, math.sqrt(2.0 / (j + 1)) * xx * cur - math.sqrt(j / (j + 1)) * prev
    return float(cur) if np.ndim(x) == 0 else cur


def harmonic_entropy(n: int, tol: float = 1e-12) -> float:
    """Full-line position entropy of harmonic-oscillator state n, by quadrature of the recurrence."""
    h = entropy_integrand(lambda x: hermite_oracle(n, x) ** 2)
    spec = IntegrationSpec(domain="full-line", abs_tol=tol, rel_tol=tol,
                           scale=math.sqrt(2 * n + 1), initial_panels=4 + n)
    return integrate(h, spec).value


def gram_matrix(gamma: float, n_max: int, tol: float = 1e-12) -> np.ndarray:
    """Overlap matrix G[m, n] = int_0^inf psi_m psi_n dx for m, n <= n_max."""
    if not 0 <= n_max <= GRAM_MAX_N:
        raise ValueError(f"n_max must lie in 0..{GRAM_MAX_N}")
    states = [StateLabel(m, gamma) for m in range(n_max + 1)]
    g = np.empty((n_max + 1, n_max + 1))
    for i, a in enumerate(states):
        for j in range(i, n_max + 1):
            b = states[j]
            spec = IntegrationSpec(abs_tol=tol, rel_tol=tol, scale=math.sqrt(eigenvalue(b)),
                                   initial_panels=4 + b.m)
            g[i, j] = g[j, i] = integrate(lambda x: eval_psi(a, x) * eval_psi(b, x), spec).value
    return g


def finite_difference(f: Callable, x, h: float = 1e-5):
    """Central difference (f(x+h) - f(x-h)) / 2h."""
    xx = np.asarray(x, dtype=float)
    return (f(xx + h) - f(xx - h)) / (2.0 * h)
