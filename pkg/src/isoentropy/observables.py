"""Per-state observables: Shannon entropies, variances, squeezing and uncertainty checks.

All entropies are in nats.  Position integrals run over the half-line,
momentum integrals over the whole line; the momentum density is even, so
those are computed on ``[0, inf)`` and doubled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import quadrature
from .quadrature import IntegrationSpec, entropy_integrand, integrate, integrate_interval
from .states import (
    StateLabel,
    eigenvalue,
    eval_psi_derivative,
    momentum_density,
    momentum_tail_exponent,
    position_density,
)

__all__ = [
    "BBM_BOUND",
    "DensityCurve",
    "EntropyReport",
    "HEISENBERG_BOUND",
    "QUADRATURE_VACUUM",
    "UncertaintyReport",
    "bbm_report",
    "density_samples",
    "harmonic_ground_entropy",
    "heisenberg_report",
    "momentum_entropy",
    "momentum_second_moment_tail",
    "position_entropy",
    "variance_p",
    "variance_x",
]

BBM_BOUND = 1.0 + math.log(math.pi)
HEISENBERG_BOUND = 0.25
QUADRATURE_VACUUM = 0.5
FLAG_GUARD = 1e-9
BBM_SLACK = 1e-9

DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-10


def harmonic_ground_entropy() -> float:
    """Entropy of the Gaussian vacuum density, (1 + ln pi) / 2; the entropy-squeezing threshold."""
    return 0.5 * BBM_BOUND


@dataclass(frozen=True)
class EntropyReport:
    label: StateLabel
    s_position: float
    s_momentum: float
    s_sum: float
    bbm_bound: float = BBM_BOUND
    bbm_satisfied: bool = field(init=False)
    entropy_squeezed_position: bool = field(init=False)
    entropy_squeezed_momentum: bool = field(init=False)

    def __post_init__(self):
        threshold = harmonic_ground_entropy()
        object.__setattr__(self, "bbm_satisfied", self.s_sum >= self.bbm_bound - BBM_SLACK)
        object.__setattr__(self, "entropy_squeezed_position",
                           self.s_position < threshold - FLAG_GUARD)
        object.__setattr__(self, "entropy_squeezed_momentum",
                           self.s_momentum < threshold - FLAG_GUARD)


@dataclass(frozen=True)
class UncertaintyReport:
    label: StateLabel
    mean_x: float
    mean_x2: float
    var_x: float
    var_p: float
    var_p_momentum_space: float
    product: float = field(init=False)
    heisenberg_bound: float = HEISENBERG_BOUND
    x_squeezed: bool = field(init=False)
    p_squeezed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "product", self.var_x * self.var_p)
        object.__setattr__(self, "x_squeezed", self.var_x < QUADRATURE_VACUUM - FLAG_GUARD)
        object.__setattr__(self, "p_squeezed", self.var_p < QUADRATURE_VACUUM - FLAG_GUARD)


@dataclass(frozen=True)
class DensityCurve:
    space: Literal["position", "momentum"]
    label: StateLabel
    coordinates: np.ndarray
    values: np.ndarray

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.coordinates.tolist(), self.values.tolist()))


def _position_spec(s: StateLabel, abs_tol: float, rel_tol: float) -> IntegrationSpec:
    return IntegrationSpec(abs_tol=abs_tol, rel_tol=rel_tol, scale=math.sqrt(eigenvalue(s)),
                           initial_panels=4 + s.m)


def _momentum_spec(s: StateLabel, abs_tol: float, rel_tol: float,
                   tail: float | None = None) -> IntegrationSpec:
    return IntegrationSpec(abs_tol=abs_tol, rel_tol=rel_tol,
                           tail_exponent_hint=momentum_tail_exponent(s) if tail is None else tail,
                           scale=math.sqrt(eigenvalue(s)), initial_panels=8 + 2 * s.m)


def position_entropy(s: StateLabel, abs_tol: float = DEFAULT_ABS_TOL,
                     rel_tol: float = DEFAULT_REL_TOL) -> float:
    h = entropy_integrand(lambda x: position_density(s, x))
    return integrate(h, _position_spec(s, abs_tol, rel_tol)).value


def momentum_entropy(s: StateLabel, abs_tol: float = DEFAULT_ABS_TOL,
                     rel_tol: float = DEFAULT_REL_TOL) -> float:
    h = entropy_integrand(lambda p: momentum_density(s, p))
    # -xi ln xi decays a log slower than xi itself; shave the exponent to keep the bound honest
    spec = _momentum_spec(s, 0.5 * abs_tol, rel_tol, tail=momentum_tail_exponent(s) - 0.5)
    return 2.0 * integrate(h, spec).value


def bbm_report(s: StateLabel, abs_tol: float = DEFAULT_ABS_TOL,
               rel_tol: float = DEFAULT_REL_TOL) -> EntropyReport:
    sr = position_entropy(s, abs_tol, rel_tol)
    sx = momentum_entropy(s, abs_tol, rel_tol)
    return EntropyReport(s, sr, sx, sr + sx)


def variance_x(s: StateLabel, abs_tol: float = DEFAULT_ABS_TOL,
               rel_tol: float = DEFAULT_REL_TOL) -> tuple[float, float, float]:
    """Return ``(<x>, <x^2>, <x^2> - <x>^2)``."""
    spec = _position_spec(s, abs_tol, rel_tol)
    mean_x = integrate(lambda x: x * position_density(s, x), spec).value
    mean_x2 = integrate(lambda x: x * x * position_density(s, x), spec).value
    return mean_x, mean_x2, mean_x2 - mean_x * mean_x


def momentum_second_moment_tail(s: StateLabel, cutoff: float, decades: float = 1.0,
                                samples: int = 41) -> tuple[float, float, float]:
    """Fit ``C p^-k`` to ``p^2 |phi(p)|^2`` on ``[cutoff / 10**decades, cutoff]``.

    Returns ``(C, k, remainder)`` where remainder is the analytic integral
    of the fit over ``[cutoff, inf)`` (one side only).
    """
    p = np.logspace(math.log10(cutoff) - decades, math.log10(cutoff), samples)
    y = p * p * momentum_density(s, p)
    slope, intercept = np.polyfit(np.log(p), np.log(y), 1)
    k = -slope
    c = math.exp(intercept)
    if not k > 1:
        raise quadrature.IntegrationError(f"momentum tail p^-{k:.3g} is not integrable")
    return c, k, c * cutoff ** (1.0 - k) / (k - 1.0)


def variance_p(s: StateLabel, abs_tol: float = DEFAULT_ABS_TOL, rel_tol: float = DEFAULT_REL_TOL,
               cutoff: float | None = None) -> tuple[float, float]:
    """Return ``(var_p from int |psi'|^2 dx, var_p from int p^2 |phi|^2 dp)``.

    <p> vanishes identically because the momentum density is even.  The
    momentum-space route integrates to ``cutoff`` and adds a fitted
    power-law remainder.
    """
    deriv = integrate(lambda x: eval_psi_derivative(s, x) ** 2,
                      _position_spec(s, abs_tol, rel_tol)).value
    if cutoff is None:
        cutoff = 400.0 * math.sqrt(eigenvalue(s))
    core = integrate_interval(lambda p: p * p * momentum_density(s, p), 0.0, cutoff,
                              abs_tol, rel_tol, max_subdivisions=4000,
                              initial_panels=16 + 4 * s.m)
    _, _, remainder = momentum_second_moment_tail(s, cutoff)
    return deriv, 2.0 * (core.value + remainder)


def heisenberg_report(s: StateLabel, abs_tol: float = DEFAULT_ABS_TOL,
                      rel_tol: float = DEFAULT_REL_TOL) -> UncertaintyReport:
    mean_x, mean_x2, var_x = variance_x(s, abs_tol, rel_tol)
    var_p, var_p_mom = variance_p(s, abs_tol, rel_tol)
    return UncertaintyReport(s, mean_x, mean_x2, var_x, var_p, var_p_mom)


def density_samples(s: StateLabel, space: Literal["position", "momentum"], lo: float, hi: float,
                    n: int) -> DensityCurve:
    """Sample the entropy density ``-rho ln rho`` on ``n`` evenly spaced points of ``[lo, hi]``."""
    if n < 2:
        raise ValueError("need at least two samples")
    if not hi > lo:
        raise ValueError("range must satisfy lo < hi")
    if space == "position":
        if lo < 0:
            raise ValueError("position range must start at x >= 0")
        density = lambda x: position_density(s, x)  # noqa: E731
    elif space == "momentum":
        density = lambda p: momentum_density(s, p)  # noqa: E731
    else:
        raise ValueError(f"unknown space {space!r}")
    coords = np.linspace(lo, hi, n)
    values = np.asarray(entropy_integrand(density)(coords), dtype=float)
    return DensityCurve(space, s, coords, values)
