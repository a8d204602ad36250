"""Eigenstates of the isotonic oscillator H = -d^2/dx^2 + x^2 + A/x^2 on the half-line.

Position amplitudes are finite Kummer polynomials times
``x**(gamma - 1/2) exp(-x^2/2)``.  Momentum amplitudes use the unitary
convention ``phi(p) = (2 pi)^(-1/2) int_0^inf psi(x) exp(-i p x) dx`` (the
position amplitude extended by zero to ``x < 0``) and are evaluated in
closed form as a finite sum of 1F1(.; 1/2; -p^2/2) and 1F1(.; 3/2; -p^2/2)
terms.  Natural units, hbar = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import quadrature
from .specfun import _Neumaier, kummer_general, kummer_terminating, ln_pochhammer

__all__ = [
    "GAMMA_MIN",
    "StateLabel",
    "coefficient_ck",
    "eigenvalue",
    "eval_phi",
    "eval_psi",
    "eval_psi_derivative",
    "gamma_from_a",
    "momentum_density",
    "momentum_norm_factor",
    "position_density",
    "raw_phi",
]

GAMMA_MIN = 1.5


@dataclass(frozen=True, order=True)
class StateLabel:
    """Eigenstate key: quantum number ``m`` and index ``gamma = 1 + sqrt(1 + 4A)/2``."""

    m: int
    gamma: float

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 0:
            raise ValueError(f"m must be a nonnegative integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        g = float(self.gamma)
        if not math.isfinite(g) or g < GAMMA_MIN:
            raise ValueError(f"gamma must satisfy gamma >= 3/2 (A >= 0), got {self.gamma!r}")
        object.__setattr__(self, "gamma", g)


def gamma_from_a(a: float) -> float:
    """Map the coupling A >= 0 of the A/x^2 term to gamma."""
    if not a >= 0:
        raise ValueError(f"A must be nonnegative, got {a}")
    return 1.0 + 0.5 * math.sqrt(1.0 + 4.0 * a)


def eigenvalue(s: StateLabel) -> float:
    return 2.0 * (2 * s.m + s.gamma)


def _ln_norm(s: StateLabel) -> float:
    # log sqrt(2 (gamma)_m / (m! Gamma(gamma)))
    return 0.5 * (math.log(2.0) + ln_pochhammer(s.gamma, s.m) - math.lgamma(s.m + 1)
                  - math.lgamma(s.gamma))


def _sign(s: StateLabel) -> float:
    return -1.0 if s.m % 2 else 1.0


def _as_out(x, out):
    return float(out) if np.ndim(x) == 0 else out


def eval_psi(s: StateLabel, x):
    """Position amplitude psi_m^gamma(x) for x >= 0 (vectorised over ``x``)."""
    xx = np.asarray(x, dtype=float)
    if np.any(xx < 0):
        raise ValueError("psi is defined on x >= 0 only")
    with np.errstate(divide="ignore"):
        log_env = _ln_norm(s) + (s.gamma - 0.5) * np.log(xx) - 0.5 * xx * xx
    out = _sign(s) * np.exp(log_env) * kummer_terminating(s.m, s.gamma, xx * xx)
    return _as_out(x, out)


def eval_psi_derivative(s: StateLabel, x):
    """d psi / dx from the finite series, differentiated term by term.

    At x = 0 the one-sided limit is returned (nonzero only for gamma = 3/2).
    """
    xx = np.asarray(x, dtype=float)
    if np.any(xx < 0):
        raise ValueError("psi is defined on x >= 0 only")
    g, m = s.gamma, s.m
    x2 = xx * xx
    # psi = N sum_k c_k x^(2k+g-1/2) e^(-x^2/2);  d/dx of each term = c_k x^(2k+g-3/2) (2k+g-1/2 - x^2) e^(-x^2/2)
    c = 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        base = np.where(xx > 0, xx ** (g - 1.5), 1.0 if g == 1.5 else 0.0)
    power = np.ones_like(xx)
    acc = _Neumaier(c * power * (g - 0.5 - x2))
    for k in range(m):
        c *= (k - m) / ((g + k) * (k + 1))
        power = power * x2
        acc.add(c * power * (2 * (k + 1) + g - 0.5 - x2))
    out = _sign(s) * math.exp(_ln_norm(s)) * base * np.exp(-0.5 * x2) * acc.value()
    return _as_out(x, out)


def position_density(s: StateLabel, x):
    psi = eval_psi(s, x)
    return psi * psi


def coefficient_ck(s: StateLabel, k: int) -> float:
    """Momentum-series coefficient C_k(gamma, m), in log space with explicit sign.

    Raises IndexError for k outside 0..m (the coefficient vanishes there).
    """
    if not 0 <= k <= s.m:
        raise IndexError(f"k must lie in 0..{s.m}, got {k}")
    g, m = s.gamma, s.m
    # |(-m)_k| = m! / (m-k)!, sign (-1)^k
    log_mag = ((-0.75 + k + 0.5 * g) * math.log(2.0)
               + math.lgamma(m + 1) - math.lgamma(m - k + 1)
               - math.lgamma(k + 1) - ln_pochhammer(g, k)
               + 0.5 * (ln_pochhammer(g, m) - math.log(math.pi) - math.lgamma(m + 1)
                        - math.lgamma(g)))
    sign = _sign(s) * (-1.0 if k % 2 else 1.0)
    return sign * math.exp(log_mag)


def raw_phi(s: StateLabel, p):
    """Closed-form momentum amplitude with the literal series prefactors, before normalisation.

    The imaginary part carries the sign of the exp(-i p x) kernel.
    """
    pp = np.asarray(p, dtype=float)
    z = -0.5 * pp * pp
    g, m = s.gamma, s.m
    a_even = 0.25 + 0.5 * g
    a_odd = 0.75 + 0.5 * g
    c0 = coefficient_ck(s, 0)
    # C_k Gamma(a + k) = C_0 Gamma(a) r_k with an exact rational recurrence for r_k
    lead_even = math.copysign(math.exp(math.log(abs(c0)) + math.lgamma(a_even)), c0)
    lead_odd = math.copysign(math.exp(math.log(abs(c0)) + math.lgamma(a_odd)), c0)
    r_even = r_odd = 1.0
    re = _Neumaier(r_even * kummer_general(a_even, 0.5, z))
    im = _Neumaier(r_odd * kummer_general(a_odd, 1.5, z))
    for k in range(m):
        step = 2.0 * (k - m) / ((k + 1) * (g + k))
        r_even *= step * (a_even + k)
        r_odd *= step * (a_odd + k)
        re.add(r_even * kummer_general(a_even + k + 1, 0.5, z))
        im.add(r_odd * kummer_general(a_odd + k + 1, 1.5, z))
    out = (lead_even * re.value() - 1j * math.sqrt(2.0) * lead_odd * pp * im.value())
    out = out / math.sqrt(math.pi)
    return complex(out) if np.ndim(p) == 0 else out


def momentum_tail_exponent(s: StateLabel) -> float:
    """Algebraic decay exponent of |phi(p)|^2 from the x^(gamma-1/2) onset at the wall."""
    return 2.0 * s.gamma + 1.0


def _raw_density(s):
    def f(p):
        v = raw_phi(s, p)
        return v.real ** 2 + v.imag ** 2
    return f


@lru_cache(maxsize=512)
def momentum_norm_factor(s: StateLabel, abs_tol: float = 1e-12, rel_tol: float = 1e-12) -> float:
    """Factor multiplying :func:`raw_phi` so that the momentum density integrates to 1."""
    spec = quadrature.IntegrationSpec(
        abs_tol=abs_tol, rel_tol=rel_tol, tail_exponent_hint=momentum_tail_exponent(s),
        scale=math.sqrt(eigenvalue(s)), initial_panels=8)
    half = quadrature.integrate(_raw_density(s), spec)
    return 1.0 / math.sqrt(2.0 * half.value)


def eval_phi(s: StateLabel, p):
    """Normalised momentum amplitude phi_m^gamma(p) (complex; vectorised over ``p``)."""
    return momentum_norm_factor(s) * raw_phi(s, p)


def momentum_density(s: StateLabel, p):
    v = eval_phi(s, p)
    return v.real ** 2 + v.imag ** 2
