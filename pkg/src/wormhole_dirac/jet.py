"""Second-order jets: a value together with its first two derivatives.

Used to push exact derivatives through the chain rule so residual checks
never rely on finite differences for the closed-form eigenfunctions.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import mpmath

from .errors import BranchCutHit

_MP_TYPES = (mpmath.mpf, mpmath.mpc)


def is_mp(*xs) -> bool:
    """True when any argument is an mpmath number (extended-precision path)."""
    return any(isinstance(x, _MP_TYPES) for x in xs)


@dataclass(frozen=True, slots=True)
class Jet:
    v: complex
    d1: complex = 0.0
    d2: complex = 0.0

    @staticmethod
    def const(c) -> "Jet":
        return Jet(c, 0.0, 0.0)

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.v + other.v, self.d1 + other.d1, self.d2 + other.d2)
        return Jet(self.v + other, self.d1, self.d2)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.v, -self.d1, -self.d2)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(
                self.v * other.v,
                self.d1 * other.v + self.v * other.d1,
                self.d2 * other.v + 2 * self.d1 * other.d1 + self.v * other.d2,
            )
        return Jet(self.v * other, self.d1 * other, self.d2 * other)

    __rmul__ = __mul__

    def __truediv__(self, c):
        # only division by a scalar is needed
        return Jet(self.v / c, self.d1 / c, self.d2 / c)

    def compose(self, f0, f1, f2) -> "Jet":
        """Chain rule: given f, f', f'' evaluated at ``self.v`` return f(self)."""
        return Jet(f0, f1 * self.d1, f2 * self.d1 * self.d1 + f1 * self.d2)


def _on_negative_axis(z: complex) -> bool:
    return z.imag == 0.0 and z.real < 0.0


def cpow(z: complex, p: complex, *, on_cut: str = "principal") -> complex:
    """Principal power ``z**p``; the negative real axis is approached from above.

    With ``on_cut="raise"`` a base on the negative real axis and a
    non-integer exponent raises :class:`BranchCutHit`.
    """
    if is_mp(z, p):
        return _cpow_mp(z, p, on_cut)
    z = complex(z)
    p = complex(p)
    if z.imag == 0.0:
        z = complex(z.real, 0.0)  # fold -0.0 onto +0.0
    if p == 0:
        return 1.0 + 0.0j
    if z == 0:
        if p.real > 0:
            return 0.0j
        raise ZeroDivisionError("0 raised to a power with non-positive real part")
    if on_cut == "raise" and _on_negative_axis(z) and not (p.imag == 0.0 and p.real.is_integer()):
        raise BranchCutHit(f"base {z} lies on the branch cut for exponent {p}")
    return cmath.exp(p * cmath.log(z))


def _cpow_mp(z, p, on_cut):
    z = mpmath.mpc(z)
    p = mpmath.mpc(p)
    if p == 0:
        return mpmath.mpc(1)
    if z == 0:
        if p.real > 0:
            return mpmath.mpc(0)
        raise ZeroDivisionError("0 raised to a power with non-positive real part")
    if on_cut == "raise" and z.imag == 0 and z.real < 0 and not (p.imag == 0 and p.real == int(p.real)):
        raise BranchCutHit(f"base {z} lies on the branch cut for exponent {p}")
    return mpmath.exp(p * mpmath.log(z))


def pow_jet(base: Jet, p: complex, *, on_cut: str = "principal") -> Jet:
    """``base**p`` on the principal branch with derivatives."""
    z = base.v if is_mp(base.v) else complex(base.v)
    f0 = cpow(z, p, on_cut=on_cut)
    if p == 0:
        return Jet(1.0 + 0.0j, 0.0, 0.0)
    f1 = p * f0 / z
    f2 = p * (p - 1) * f0 / (z * z)
    return base.compose(f0, f1, f2)


def exp_jet(x: Jet) -> Jet:
    e = mpmath.exp(x.v) if is_mp(x.v) else cmath.exp(x.v)
    return x.compose(e, e, e)
