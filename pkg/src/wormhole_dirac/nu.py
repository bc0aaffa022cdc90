"""Nikiforov-Uvarov (NU) solver for equations of the form

    psi'' + (d1 - d2 x) / (x (1 - d3 x)) psi'
          + (-z1 x^2 + z2 x - z3) / (x^2 (1 - d3 x)^2) psi = 0.

The six constants determine ten derived parameters, a quantization condition
for the energy and, for d3 = 0, a Laguerre eigenfunction (Jacobi otherwise).

Every square root of d8 can be negated with ``branch=-1`` and every square
root of d9 with ``branch9=-1``; sqrt(d8 * d9) is read as the product of the
two chosen roots. On the Beltrami profile the principal branch only admits the
n = 0, m > 0 state and the negated d8 branch yields the full Laguerre ladder.

The quantization condition carries the term (2n + 1)(sqrt(d9) + d3 sqrt(d8)),
the combination that also appears in d11 and d13. ``form="printed"`` swaps
the plus for a minus; the two agree whenever d3 = 0 (the Beltrami case) and
only the plus sign reproduces exact eigenvalues otherwise.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, fields
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, RootNotBracketed
from .jet import Jet, exp_jet, pow_jet
from .specfun import jacobi_jet, laguerre_jet

__all__ = [
    "NuProblem", "NuDerived", "EnergySearch", "RootNotBracketed",
    "nu_derive", "nu_energy_residual", "nu_solve_energy", "nu_wavefunction",
    "nu_wavefunction_jet", "nu_equation_residual", "beltrami_problem",
]


@dataclass(frozen=True)
class NuProblem:
    d1: complex
    d2: complex
    d3: complex
    z1: complex
    z2: complex
    z3: complex

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, complex(getattr(self, f.name)))

    def rescaled(self, lam: float) -> "NuProblem":
        """Same equation in the stretched coordinate x' = lam x."""
        return NuProblem(self.d1, self.d2 / lam, self.d3 / lam,
                         self.z1 / lam ** 2, self.z2 / lam, self.z3)


@dataclass(frozen=True)
class NuDerived:
    d4: complex
    d5: complex
    d6: complex
    d7: complex
    d8: complex
    d9: complex
    d10: complex
    d11: complex
    d12: complex
    d13: complex
    sqrt_d8: complex
    sqrt_d9: complex

    def as_dict(self) -> dict:
        return {f"d{k}": getattr(self, f"d{k}") for k in range(4, 14)}


def _check_branch(*branches):
    if any(b not in (1, -1) for b in branches):
        raise DomainError("branch must be +1 or -1")


def nu_derive(p: NuProblem, branch: int = 1, branch9: int = 1) -> NuDerived:
    """Derived parameters d4..d13 with principal roots times ``branch`` (sqrt(d8))
    and ``branch9`` (sqrt(d9))."""
    _check_branch(branch, branch9)
    d4 = (1 - p.d1) / 2
    d5 = (p.d2 - 2 * p.d3) / 2
    d6 = d5 * d5 + p.z1
    d7 = 2 * d4 * d5 - p.z2
    d8 = d4 * d4 + p.z3
    d9 = p.d3 * d7 + p.d3 * p.d3 * d8 + d6
    s8 = branch * cmath.sqrt(d8)
    s9 = branch9 * cmath.sqrt(d9)
    d10 = p.d1 + 2 * d4 + 2 * s8
    d11 = p.d2 - 2 * d5 + 2 * (s9 + p.d3 * s8)
    d12 = d4 + s8
    d13 = d5 - s9 - p.d3 * s8
    return NuDerived(d4, d5, d6, d7, d8, d9, d10, d11, d12, d13, s8, s9)


def nu_energy_residual(p: NuProblem, n: int, branch: int = 1, branch9: int = 1,
                       form: str = "corrected") -> complex:
    """Left-hand side of the NU quantization condition (zero at an eigenvalue)."""
    if n < 0 or int(n) != n:
        raise DomainError("n must be a non-negative integer")
    if form not in ("corrected", "printed"):
        raise DomainError("form must be 'corrected' or 'printed'")
    d = nu_derive(p, branch, branch9)
    sign = 1 if form == "corrected" else -1
    return (n * p.d2 - (2 * n + 1) * d.d5 + (2 * n + 1) * (d.sqrt_d9 + sign * p.d3 * d.sqrt_d8)
            + n * (n - 1) * p.d3 + d.d7 + 2 * p.d3 * d.d8
            + 2 * d.sqrt_d8 * d.sqrt_d9)


@dataclass(frozen=True)
class EnergySearch:
    """Search region for the energy: [lo, hi] along each requested axis.

    Axis "real" scans E = t, axis "imag" scans E = i t.
    """

    lo: float = 0.0
    hi: float = 5.0
    nodes: int = 400
    axes: Sequence[str] = ("real",)
    tol: float = 1e-10
    dedup: float = 1e-9


def _snap(f, t: float, span: int = 16) -> float:
    """Move t by up to ``span`` ulps to the float of smallest |f|."""
    best_t, best = t, abs(f(t))
    for direction in (math.inf, -math.inf):
        x = t
        for _ in range(span):
            x = math.nextafter(x, direction)
            val = abs(f(x))
            if val < best:
                best_t, best = x, val
    return best_t


def _bisect_transition(pred, a: float, b: float) -> tuple:
    """Shrink [a, b] with pred(a) != pred(b) to adjacent floats."""
    pa = pred(a)
    for _ in range(2000):
        mid = 0.5 * (a + b)
        if mid in (a, b):
            break
        if pred(mid) == pa:
            a = mid
        else:
            b = mid
    return a, b


def _brent(F, a: float, b: float) -> list:
    try:
        return [brentq(lambda t: F(t).real, a, b, xtol=1e-15, maxiter=200)]
    except ValueError:
        return []


def nu_solve_energy(builder: Callable[[complex], NuProblem], n: int, search: EnergySearch = None,
                    branch: int = 1, branch9: int = 1, form: str = "corrected") -> list:
    """All energies in the search region where the NU condition vanishes.

    Real-valued stretches of the condition are bracketed by sign changes and
    solved with Brent's method; points where the condition turns from real to
    complex are located by bisection (square-root branch points); grid nodes
    where it vanishes exactly are accepted directly. Each candidate is
    polished to the neighbouring float of smallest residual and kept only if
    the residual is below ``search.tol``.
    """
    search = search or EnergySearch()
    _check_branch(branch, branch9)
    if not search.hi > search.lo or search.nodes < 2:
        raise RootNotBracketed("empty search region")
    roots = []
    for axis in search.axes:
        if axis not in ("real", "imag"):
            raise DomainError(f"unknown axis {axis!r}")
        to_e = (lambda t: complex(t, 0.0)) if axis == "real" else (lambda t: complex(0.0, t))

        def F(t, to_e=to_e):
            return nu_energy_residual(builder(to_e(t)), n, branch, branch9, form)

        ts = np.linspace(search.lo, search.hi, search.nodes)
        vals = [F(float(t)) for t in ts]
        scale = max(1.0, max(abs(v) for v in vals))
        is_real = lambda v: abs(v.imag) <= 1e-12 * scale
        cands = []
        for t, v in zip(ts, vals):
            if abs(v) <= search.tol:
                cands.append(float(t))
        for i in range(len(ts) - 1):
            a, b = float(ts[i]), float(ts[i + 1])
            va, vb = vals[i], vals[i + 1]
            ra, rb = is_real(va), is_real(vb)
            if ra and rb and va.real * vb.real < 0:
                cands.extend(_brent(F, a, b))
            elif ra != rb:
                lo, hi = _bisect_transition(lambda t: is_real(F(t)), a, b)
                cands.extend([lo, hi])
                # the real-valued part of the interval may hold a sign change as well
                s, e = (hi, b) if rb else (a, lo)
                if s < e and F(s).real * F(e).real < 0:
                    cands.extend(_brent(F, s, e))
        for t in cands:
            t = _snap(F, t)
            if abs(F(t)) <= search.tol:
                E = to_e(t)
                if all(abs(E - e) > search.dedup for e in roots):
                    roots.append(E)
    if not roots:
        raise RootNotBracketed("no root of the NU condition in the search region")
    return roots


def nu_wavefunction_jet(p: NuProblem, n: int, x: complex, branch: int = 1, branch9: int = 1) -> Jet:
    """Eigenfunction and its first two x-derivatives."""
    if n < 0 or int(n) != n:
        raise DomainError("n must be a non-negative integer")
    d = nu_derive(p, branch, branch9)
    xj = Jet(complex(x), 1.0, 0.0)
    head = pow_jet(xj, d.d12)
    if p.d3 == 0:
        tail = exp_jet(d.d13 * xj)
        arg = d.d11 * xj
        poly = arg.compose(*laguerre_jet(n, d.d10 - 1, arg.v))
    else:
        tail = pow_jet(1 - p.d3 * xj, -d.d12 - d.d13 / p.d3)
        arg = 1 - 2 * p.d3 * xj
        poly = arg.compose(*jacobi_jet(n, d.d10 - 1, d.d11 / p.d3 - d.d10 - 1, arg.v))
    return head * tail * poly


def nu_wavefunction(p: NuProblem, n: int, x: complex, branch: int = 1, branch9: int = 1) -> complex:
    """x^d12 exp(d13 x) L_n^(d10-1)(d11 x) for d3 = 0, Jacobi form otherwise."""
    return nu_wavefunction_jet(p, n, x, branch, branch9).v


def nu_equation_residual(p: NuProblem, jet: Jet, x: complex) -> complex:
    """Residual of the NU differential equation for psi given as a jet at x."""
    x = complex(x)
    w = 1 - p.d3 * x
    return (jet.d2 + (p.d1 - p.d2 * x) / (x * w) * jet.d1
            + (-p.z1 * x * x + p.z2 * x - p.z3) / (x * x * w * w) * jet.v)


def beltrami_problem(E: complex, M: float, r: float, b: float, m: float, tau: complex) -> NuProblem:
    """NU constants of the Beltrami equation in the variable q = exp(-u/r)."""
    mu = m * r / b
    k2r2 = (complex(E) ** 2 - M * M) * r * r
    return NuProblem(-2 * complex(tau), 0.0, 0.0, mu * mu, mu, -k2r2 - (complex(tau) + 0.5) ** 2)


class BeltramiNuState:
    """Beltrami upper component built purely from the NU solution, as a function of u.

    Evaluates the NU eigenfunction at x = q = exp(-u/r) and carries exact
    u-derivatives through the chain rule.
    """

    def __init__(self, E, M, r, b, m, tau, n, branch=1):
        self.r = float(r)
        self.n = int(n)
        self.branch = branch
        self.problem = beltrami_problem(E, M, r, b, m, tau)

    def derivatives(self, u: float, order: int = 2):
        q = math.exp(-u / self.r)
        qj = Jet(q, -q / self.r, q / self.r ** 2)
        j = nu_wavefunction_jet(self.problem, self.n, q, self.branch)
        out = qj.compose(j.v, j.d1, j.d2)
        return (out.v, out.d1, out.d2)[: order + 1]

    def __call__(self, u: float) -> complex:
        return self.derivatives(u, 0)[0]
