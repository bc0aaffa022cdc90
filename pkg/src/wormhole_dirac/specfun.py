"""Special functions needed by the geometry and the closed-form spectra.

Terminating hypergeometric series, Laguerre and Jacobi polynomials are
evaluated by their own recurrences. Incomplete elliptic integrals go through
Carlson's symmetric forms R_F and R_D (duplication algorithm). Adaptive
quadrature and the non-terminating hypergeometric function are delegated to
scipy and mpmath respectively.
"""
from __future__ import annotations

import math
import warnings
from functools import lru_cache
from typing import Callable

import mpmath
import numpy as np
from scipy import integrate

from .errors import DomainError, NoConvergence, PochhammerPole, RecurrenceBreakdown

_MAX_CARLSON_ITER = 120
# relative accuracy target for the Carlson series truncation
_CARLSON_R = 1e-16


def poch(a: complex, k: int) -> complex:
    """Rising factorial (a)_k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


@lru_cache(maxsize=8192)
def _poly_coefficients(n: int, b: complex, c: complex) -> tuple:
    """Coefficients of 2F1(-n, b; c; x) in powers of x, stopping at the first zero term."""
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    coeffs = [1.0 + 0.0j]
    term = 1.0 + 0.0j
    for k in range(n):
        num = (-n + k) * (b + k)
        if num == 0:
            break
        den = (c + k) * (k + 1)
        if den == 0:
            raise PochhammerPole(f"(c)_k vanishes at k={k + 1} for c={c}")
        term = term * num / den
        coeffs.append(term)
    return tuple(coeffs)


def hyp2f1_poly(n: int, b: complex, c: complex, x: complex) -> complex:
    """Terminating Gauss series 2F1(-n, b; c; x).

    Parameters
    ----------
    n : int
        Non-negative degree; the series stops after the x**n term.
    b, c : complex
        Remaining parameters. ``c`` may not be a non-positive integer that
        makes a denominator vanish before the series terminates.
    x : complex
        Any finite argument.

    Raises
    ------
    PochhammerPole
        If (c)_k = 0 for some k <= n with the numerator still non-zero.
    """
    coeffs = _poly_coefficients(n, b, c)
    acc = 0.0 + 0.0j
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


def hyp2f1_poly_jet(n: int, b: complex, c: complex, x: complex):
    """Value and first two x-derivatives of 2F1(-n, b; c; x).

    Derivatives use the contiguous relation d/dx F(a,b;c;x) = ab/c F(a+1,b+1;c+1;x).
    """
    f0 = hyp2f1_poly(n, b, c, x)
    if n == 0:
        return f0, 0.0j, 0.0j
    if c == 0:
        raise PochhammerPole("c = 0")
    f1 = (-n) * b / c * hyp2f1_poly(n - 1, b + 1, c + 1, x)
    if n == 1:
        return f0, f1, 0.0j
    if c + 1 == 0:
        raise PochhammerPole("c + 1 = 0")
    f2 = (-n) * (1 - n) * b * (b + 1) / (c * (c + 1)) * hyp2f1_poly(n - 2, b + 2, c + 2, x)
    return f0, f1, f2


def hyp2f1(a: complex, b: complex, c: complex, x: complex) -> complex:
    """General Gauss function on the principal branch (delegated to mpmath).

    An mpmath argument is answered in mpmath at the caller's precision.
    """
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return mpmath.hyp2f1(a, b, c, x)
    with mpmath.workdps(30):
        val = mpmath.hyp2f1(a, b, c, x)
    return complex(val)


def hyp2f1_jet(a: complex, b: complex, c: complex, x: complex):
    f0 = hyp2f1(a, b, c, x)
    f1 = a * b / c * hyp2f1(a + 1, b + 1, c + 1, x)
    f2 = a * (a + 1) * b * (b + 1) / (c * (c + 1)) * hyp2f1(a + 2, b + 2, c + 2, x)
    return f0, f1, f2


def laguerre(n: int, alpha: complex, x: complex) -> complex:
    """Generalized Laguerre polynomial L_n^alpha(x) by three-term recurrence."""
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    prev = 1.0 + 0.0j
    if n == 0:
        return prev
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def laguerre_jet(n: int, alpha: complex, x: complex):
    """L_n^alpha and its first two derivatives via d/dx L_n^a = -L_{n-1}^{a+1}."""
    f0 = laguerre(n, alpha, x)
    f1 = -laguerre(n - 1, alpha + 1, x) if n >= 1 else 0.0j
    f2 = laguerre(n - 2, alpha + 2, x) if n >= 2 else 0.0j
    return f0, f1, f2


def jacobi_poly(n: int, a: complex, b: complex, x: complex) -> complex:
    """Jacobi polynomial P_n^(a,b)(x) by the standard three-term recurrence.

    Raises
    ------
    RecurrenceBreakdown
        When a recurrence denominator vanishes for the given parameters.
    """
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    p0 = 1.0 + 0.0j
    if n == 0:
        return p0
    p1 = (a + 1) + (a + b + 2) * (x - 1) / 2
    for k in range(2, n + 1):
        s = 2 * k + a + b
        den = 2 * k * (k + a + b) * (s - 2)
        if den == 0:
            raise RecurrenceBreakdown(f"denominator vanishes at k={k} for a={a}, b={b}")
        c1 = (s - 1) * (s * (s - 2) * x + a * a - b * b)
        c2 = 2 * (k + a - 1) * (k + b - 1) * s
        p0, p1 = p1, (c1 * p1 - c2 * p0) / den
    return p1


def jacobi_jet(n: int, a: complex, b: complex, x: complex):
    """P_n^(a,b) with derivatives from d/dx P_n^(a,b) = (n+a+b+1)/2 P_{n-1}^(a+1,b+1)."""
    f0 = jacobi_poly(n, a, b, x)
    f1 = (n + a + b + 1) / 2 * jacobi_poly(n - 1, a + 1, b + 1, x) if n >= 1 else 0.0j
    f2 = ((n + a + b + 1) * (n + a + b + 2) / 4 * jacobi_poly(n - 2, a + 2, b + 2, x)
          if n >= 2 else 0.0j)
    return f0, f1, f2


# ---------------------------------------------------------------- Carlson forms

def _check_rf_args(x, y, z):
    if min(x, y, z) < 0:
        raise DomainError("Carlson arguments must be non-negative")
    if (x == 0) + (y == 0) + (z == 0) > 1:
        raise DomainError("at most one Carlson argument may vanish")


def carlson_rf(x: float, y: float, z: float) -> float:
    """Carlson's R_F(x, y, z) for non-negative reals, at most one zero."""
    _check_rf_args(x, y, z)
    a0 = (x + y + z) / 3.0
    q = (3.0 * _CARLSON_R) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    a = a0
    fac = 1.0
    for _ in range(_MAX_CARLSON_ITER):
        if q * fac < abs(a):
            break
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        x, y, z = (x + lam) / 4, (y + lam) / 4, (z + lam) / 4
        a = (a + lam) / 4
        fac /= 4
    else:
        raise NoConvergence("R_F duplication did not converge")
    X = (a - x) / a
    Y = (a - y) / a
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    return (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / math.sqrt(a)


def carlson_rd(x: float, y: float, z: float) -> float:
    """Carlson's R_D(x, y, z); x, y >= 0 with at most one zero, z > 0."""
    if min(x, y) < 0 or z <= 0:
        raise DomainError("R_D needs x, y >= 0 and z > 0")
    if x == 0 and y == 0:
        raise DomainError("R_D needs at most one of x, y to vanish")
    a0 = (x + y + 3 * z) / 5.0
    q = (_CARLSON_R / 4.0) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    a = a0
    fac = 1.0
    acc = 0.0
    for _ in range(_MAX_CARLSON_ITER):
        if q * fac < abs(a):
            break
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        acc += fac / (sz * (z + lam))
        x, y, z = (x + lam) / 4, (y + lam) / 4, (z + lam) / 4
        a = (a + lam) / 4
        fac /= 4
    else:
        raise NoConvergence("R_D duplication did not converge")
    X = (a - x) / a
    Y = (a - y) / a
    Z = -(X + Y) / 3
    xy = X * Y
    zz = Z * Z
    e2 = xy - 6 * zz
    e3 = (3 * xy - 8 * zz) * Z
    e4 = 3 * (xy - zz) * zz
    e5 = xy * zz * Z
    series = (1 - 3 * e2 / 14 + e3 / 6 + 9 * e2 * e2 / 88 - 3 * e4 / 22
              - 9 * e2 * e3 / 52 + 3 * e5 / 26)
    return fac * series / (a * math.sqrt(a)) + 3 * acc


def _check_amplitude(phi: float, m: float):
    if not (0.0 <= phi <= math.pi / 2):
        raise DomainError(f"amplitude {phi} outside [0, pi/2]")
    s = math.sin(phi)
    if m * s * s > 1.0 + 1e-15:
        raise DomainError(f"m sin^2(phi) = {m * s * s} exceeds 1")
    return s, math.cos(phi)


def ellip_f_inc(phi: float, m: float) -> float:
    """Incomplete elliptic integral of the first kind F(phi | m), 0 <= phi <= pi/2."""
    s, c = _check_amplitude(phi, m)
    if s == 0.0:
        return 0.0
    delta = max(1.0 - m * s * s, 0.0)
    return s * carlson_rf(c * c, delta, 1.0)


def ellip_e_inc(phi: float, m: float) -> float:
    """Incomplete elliptic integral of the second kind E(phi | m), 0 <= phi <= pi/2.

    Parameters
    ----------
    phi : float
        Amplitude in [0, pi/2].
    m : float
        Parameter; any real value with ``m sin(phi)**2 <= 1`` (so m > 1 is
        allowed for small amplitudes).
    """
    s, c = _check_amplitude(phi, m)
    if s == 0.0:
        return 0.0
    delta = max(1.0 - m * s * s, 0.0)
    c2 = c * c
    if delta == 0.0 and c2 == 0.0:
        return 1.0  # E(pi/2 | 1)
    return s * carlson_rf(c2, delta, 1.0) - m * s ** 3 / 3.0 * carlson_rd(c2, delta, 1.0)


# ---------------------------------------------------------------- quadrature

def adaptive_quad(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10) -> float:
    """Integrate a real function on [a, b] to absolute tolerance ``tol``.

    Thin wrapper over ``scipy.integrate.quad`` that turns quadrature warnings
    and unmet error estimates into :class:`NoConvergence`.
    """
    if not (np.isfinite(a) and np.isfinite(b)):
        raise DomainError("integration limits must be finite")
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, a, b, epsabs=tol, epsrel=0.0, limit=200)
        except integrate.IntegrationWarning as exc:
            raise NoConvergence(str(exc)) from exc
    if not np.isfinite(val) or err > tol:
        raise NoConvergence(f"error estimate {err} exceeds tolerance {tol}")
    return float(val)
