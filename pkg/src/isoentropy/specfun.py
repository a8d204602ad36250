"""Special functions for the isotonic-oscillator amplitudes.

Log-Gamma, rising factorials and Kummer's confluent hypergeometric
function 1F1(a; b; z) for real arguments.  The general 1F1 routine is
vectorised over ``z`` and picks one of three evaluation paths per entry:

* ``z >= 0``: the defining Taylor series (all terms share a sign when
  ``a, b > 0``).
* moderate ``z < 0``: Kummer's transformation
  ``1F1(a; b; z) = exp(z) 1F1(b - a; b; -z)`` with the transformed series
  summed in log-scaled form so ``exp(-z)`` never overflows.
* large ``-z``: the algebraic asymptotic expansion, used only when the
  exponentially small companion term is negligible and the expansion
  converges to working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConvergenceError",
    "HypergeometricArgs",
    "kummer_general",
    "kummer_taylor",
    "kummer_terminating",
    "kummer_transformed",
    "ln_gamma",
    "ln_pochhammer",
    "pochhammer",
]

MAX_TERMS = 1_000_000
_EPS = 2.0**-53
# log(1e-18): the companion term of the asymptotic expansion must sit this far below
_ASYMPTOTIC_MARGIN = -41.4
_POCHHAMMER_PRODUCT_MAX = 20


class ConvergenceError(ArithmeticError):
    """A series did not converge within ``MAX_TERMS`` terms."""


@dataclass(frozen=True)
class HypergeometricArgs:
    a: float
    b: float
    z: float

    def __post_init__(self):
        if self.b == 0 or (self.b < 0 and float(self.b).is_integer()):
            raise ValueError(f"1F1 denominator parameter b={self.b} is zero or a negative integer")


def ln_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def pochhammer(gamma: float, m: int) -> float:
    """Rising factorial (gamma)_m = gamma (gamma+1) ... (gamma+m-1)."""
    if m < 0:
        raise ValueError(f"pochhammer order must be nonnegative, got {m}")
    if m > _POCHHAMMER_PRODUCT_MAX:
        return math.exp(ln_pochhammer(gamma, m))
    out = 1.0
    for j in range(m):
        out *= gamma + j
    return out


def ln_pochhammer(gamma: float, m: int) -> float:
    """log((gamma)_m) for gamma > 0."""
    if not gamma > 0:
        raise ValueError(f"ln_pochhammer requires gamma > 0, got {gamma}")
    return math.lgamma(gamma + m) - math.lgamma(gamma)


class _Neumaier:
    """Element-wise compensated accumulator (Neumaier's variant of Kahan)."""

    def __init__(self, first):
        self.total = np.array(first, dtype=float, copy=True)
        self.comp = np.zeros_like(self.total)

    def add(self, term, where=None):
        term = np.asarray(term, dtype=float)
        if where is not None:
            term = np.where(where, term, 0.0)
        t = self.total + term
        big = np.abs(self.total) >= np.abs(term)
        self.comp += np.where(big, (self.total - t) + term, (term - t) + self.total)
        self.total = t

    def value(self):
        return self.total + self.comp


def _scalar_or_array(z, out):
    return float(out) if np.ndim(z) == 0 else out


def kummer_terminating(m: int, gamma: float, z):
    """Polynomial 1F1(-m; gamma; z), summed in ascending order in double-double.

    The terms alternate in sign and for large z grow far beyond the result,
    so both the terms and the running sum carry twice the working precision.
    """
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    zz = np.asarray(z, dtype=float)
    return _scalar_or_array(z, _terminating_dd(m, gamma, zz))


def kummer_taylor(a: float, b: float, z):
    """Defining power series of 1F1, summed until terms drop below machine precision."""
    zz = np.asarray(z, dtype=float)
    term = np.ones_like(zz)
    acc = _Neumaier(term)
    active = np.ones(zz.shape, dtype=bool)
    n = 0
    while active.any():
        if n >= MAX_TERMS:
            raise ConvergenceError(f"1F1({a}; {b}; z) series did not converge in {MAX_TERMS} terms")
        term = term * ((a + n) / ((b + n) * (n + 1))) * zz
        acc.add(term, where=active)
        n += 1
        if a + n - 1 == 0:
            break
        small = np.abs(term) <= _EPS * np.abs(acc.total)
        # past the peak the terms shrink monotonically once n > |a z / b|-ish
        past_peak = np.abs((a + n) * zz) < np.abs((b + n) * (n + 1))
        active &= ~(small & past_peak)
    return _scalar_or_array(z, acc.value())


def _is_nonpositive_integer(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


def kummer_transformed(a: float, b: float, z):
    """exp(z) * 1F1(b - a; b; -z) for z <= 0, with log-scaled terms.

    Each term of the transformed series is carried as sign * exp(log|t|)
    with the exp(z) factor folded into the log, so neither the factor nor
    the series overflows for large -z.
    """
    zz = np.asarray(z, dtype=float)
    if np.any(zz > 0):
        raise ValueError("kummer_transformed expects z <= 0")
    w = -zz
    c = b - a
    with np.errstate(divide="ignore"):
        logw = np.log(w)
    logt = -w.copy()
    sign = np.ones_like(w)
    acc = _Neumaier(np.exp(logt))
    active = w > 0
    n = 0
    while active.any():
        if n >= MAX_TERMS:
            raise ConvergenceError(f"1F1({a}; {b}; z) transformed series did not converge")
        num = c + n
        if num == 0:
            break
        logt = logt + math.log(abs(num)) - math.log(abs(b + n)) - math.log(n + 1) + logw
        sign = sign * math.copysign(1.0, num) * math.copysign(1.0, b + n)
        term = sign * np.exp(logt)
        acc.add(term, where=active)
        n += 1
        small = np.abs(term) <= _EPS * np.abs(acc.total)
        past_peak = np.abs(c + n) * w < np.abs(b + n) * (n + 1)
        active &= ~(small & past_peak)
    return _scalar_or_array(z, acc.value())


# Double-double helpers (Dekker/Knuth error-free transformations).
_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_mul(xh, xl, y):
    p, e = _two_prod(xh, y)
    return _quick_two_sum(p, e + xl * y)


def _dd_div(xh, xl, y):
    q1 = xh / y
    p, e = _two_prod(q1, y)
    s, f = _two_sum(xh, -p)
    q2 = (s + (f - e + xl)) / y
    return _quick_two_sum(q1, q2)


def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    return _quick_two_sum(s, e + al + bl)


_DD_MAX_W = 300.0


def _transformed_double_double(a: float, b: float, w: np.ndarray) -> np.ndarray:
    """exp(-w) 1F1(b - a; b; w) with the series carried in double-double.

    For b - a < 0 the leading terms alternate and cancel; twice the working
    precision absorbs that loss.  Needs w <= _DD_MAX_W so terms stay far
    from overflow.
    """
    c = b - a
    th = np.ones_like(w)
    tl = np.zeros_like(w)
    sh = np.ones_like(w)
    sl = np.zeros_like(w)
    active = w > 0
    n = 0
    while active.any():
        if n >= MAX_TERMS:
            raise ConvergenceError(f"1F1({a}; {b}; z) transformed series did not converge")
        if c + n == 0:
            break
        th, tl = _dd_mul(th, tl, c + n)
        th, tl = _dd_mul(th, tl, w)
        th, tl = _dd_div(th, tl, (b + n) * (n + 1.0))
        nh, nl = _dd_add(sh, sl, th, tl)
        sh = np.where(active, nh, sh)
        sl = np.where(active, nl, sl)
        n += 1
        small = np.abs(th) <= 1e-3 * _EPS * np.abs(sh)
        past_peak = np.abs(c + n) * w < np.abs(b + n) * (n + 1)
        active &= ~(small & past_peak)
    return (sh + sl) * np.exp(-w)


def _asymptotic_negative(a: float, b: float, w: np.ndarray):
    """Algebraic asymptotic series of 1F1(a; b; -w) for large w.

    Returns ``(value, ok)``; entries with ``ok == False`` did not reach
    working precision before the series started to diverge.
    """
    lead_sign = _gamma_sign(b) * _gamma_sign(b - a)
    log_lead = math.lgamma(b) - math.lgamma(b - a) - a * np.log(w)
    term = np.ones_like(w)
    acc = _Neumaier(term)
    ok = np.zeros(w.shape, dtype=bool)
    active = np.ones(w.shape, dtype=bool)
    prev = np.abs(term)
    s = 0
    while active.any() and s < 400:
        term = term * ((a + s) * (a - b + 1 + s) / (s + 1)) / w
        s += 1
        acc.add(term, where=active)
        mag = np.abs(term)
        done = mag <= _EPS * np.abs(acc.total)
        ok |= active & done
        diverging = (mag > prev) & (s > abs(a) + abs(a - b + 1) + 2)
        active &= ~done & ~diverging
        prev = mag
        if (a + s - 1) == 0 or (a - b + s) == 0:
            ok |= active
            break
    return lead_sign * np.exp(log_lead) * acc.value(), ok


def _companion_negligible(a: float, b: float, w: np.ndarray) -> np.ndarray:
    # dominant:  Gamma(b)/Gamma(b-a) w^-a ;  companion: Gamma(b)/Gamma(a) e^-w w^(a-b)
    if a <= 0 and float(a).is_integer():
        return np.zeros(w.shape, dtype=bool)
    logw = np.log(w)
    dom = -math.lgamma(b - a) - a * logw
    comp = -math.lgamma(a) - w + (a - b) * logw
    return comp - dom < _ASYMPTOTIC_MARGIN


def _gamma_sign(x: float) -> float:
    if x > 0:
        return 1.0
    return -1.0 if math.ceil(-x) % 2 else 1.0


def kummer_general(a, b=None, z=None):
    """Confluent hypergeometric function 1F1(a; b; z) for real arguments.

    Accepts either ``kummer_general(a, b, z)`` or a single
    :class:`HypergeometricArgs`.  ``z`` may be a numpy array, in which case
    the result is an array of the same shape.

    Raises
    ------
    ConvergenceError
        If a series fails to converge within ``MAX_TERMS`` terms.
    """
    if isinstance(a, HypergeometricArgs):
        a, b, z = a.a, a.b, a.z
    elif b is None or z is None:
        raise TypeError("kummer_general needs (a, b, z) or a HypergeometricArgs")
    else:
        HypergeometricArgs(a, b, 0.0)  # validates b
    a = float(a)
    b = float(b)
    zz = np.asarray(z, dtype=float)
    flat = zz.reshape(-1)
    out = np.empty_like(flat)

    if _is_nonpositive_integer(a):
        out[:] = _terminating_general(int(-a), b, flat)
        return _scalar_or_array(z, out.reshape(zz.shape))

    pos = flat >= 0
    if pos.any():
        out[pos] = kummer_taylor(a, b, flat[pos])
    neg = ~pos
    if neg.any():
        w = -flat[neg]
        res = np.empty_like(w)
        if _is_nonpositive_integer(b - a):
            # exp(z) times a polynomial in -z; only its alternating sum needs care
            near = w <= _DD_MAX_W
            if near.any():
                res[near] = _transformed_double_double(a, b, w[near])
            if (~near).any():
                res[~near] = kummer_transformed(a, b, -w[~near])
        else:
            todo = np.ones(w.shape, dtype=bool)
            big = (w > 30.0) & _companion_negligible(a, b, np.maximum(w, 1.0))
            if big.any():
                val, ok = _asymptotic_negative(a, b, w[big])
                idx = np.flatnonzero(big)
                res[idx[ok]] = val[ok]
                todo[idx[ok]] = False
            dd = todo & (w <= _DD_MAX_W) & (b - a < 0)
            if dd.any():
                res[dd] = _transformed_double_double(a, b, w[dd])
                todo &= ~dd
            if todo.any():
                res[todo] = kummer_transformed(a, b, -w[todo])
        out[neg] = res
    if not np.all(np.isfinite(out)):
        raise ConvergenceError(f"1F1({a}; {b}; z) evaluated to a non-finite value")
    return _scalar_or_array(z, out.reshape(zz.shape))


def _terminating_general(m: int, b: float, z: np.ndarray) -> np.ndarray:
    return _terminating_dd(m, b, z)


def _terminating_dd(m: int, b: float, z: np.ndarray) -> np.ndarray:
    th = np.ones_like(z)
    tl = np.zeros_like(z)
    sh = np.ones_like(z)
    sl = np.zeros_like(z)
    for k in range(m):
        th, tl = _dd_mul(th, tl, float(k - m))
        th, tl = _dd_mul(th, tl, z)
        th, tl = _dd_div(th, tl, b + k)
        th, tl = _dd_div(th, tl, k + 1.0)
        sh, sl = _dd_add(sh, sl, th, tl)
    return sh + sl
