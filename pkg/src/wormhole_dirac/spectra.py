"""Closed-form spectra and eigenfunctions of the Dirac field on the wormholes.

The upper spinor component obeys a second-order equation in the arc length u
whose coefficients depend on the meridian profile R(u), the half-integer
angular number m = ell + 1/2, the energy through k^2 = E^2 - M^2, and the
Lorentz-violating coupling tau. For tau = -1/2 and tau = +1/2 the hyperbolic
and elliptic profiles admit four polynomial solution classes each; the
Beltrami profile reduces to a Laguerre problem (see :mod:`wormhole_dirac.nu`).

Ansatz exponents are stored as exact half-integer linear forms
(c0 + c1 * unit) / 2 with unit = i mu (hyperbolic) or mu (elliptic) and
mu = m r / b. Every derived parameter is evaluated from summed forms, so two
classes that share a form produce bit-identical energies and polynomials.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Optional

from .errors import DomainError, MassShellSingularity, SectorError, ThroatSingularity
from .geometry import Family, MeridianProfile, eval_meridian, meridian_mp
import mpmath

from .jet import Jet, exp_jet, pow_jet
from .specfun import hyp2f1_jet, hyp2f1_poly_jet, laguerre_jet

TAU_MINUS = -0.5
TAU_PLUS = 0.5
_SECTOR_TOL = 1e-12


# ---------------------------------------------------------------- coupling

@dataclass(frozen=True)
class LsvCoupling:
    """Lorentz-violating coupling: strength, tensor component and field amplitude.

    With the field B(u) = b0 R'/R the combination entering the equations is
    tau = -i * lam * kdb21 * b0.
    """

    lam: complex
    kdb21: complex
    b0: complex

    @property
    def tau(self) -> complex:
        return tau_from_coupling(self)


def tau_from_coupling(coupling) -> complex:
    if isinstance(coupling, LsvCoupling):
        return complex(-1j * coupling.lam * coupling.kdb21 * coupling.b0)
    return complex(coupling)


def sector_of(tau) -> float:
    """Map a coupling (or tau value) onto the solvable sector -1/2 or +1/2."""
    t = tau_from_coupling(tau)
    for s in (TAU_MINUS, TAU_PLUS):
        if abs(t - s) <= _SECTOR_TOL:
            return s
    raise SectorError(f"tau = {t} is neither -1/2 nor +1/2")


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial number n >= 0 and orbital number ell; m = ell + 1/2."""

    n: int
    ell: int

    def __post_init__(self):
        for name in ("n", "ell"):
            val = getattr(self, name)
            if isinstance(val, bool) or int(val) != val:
                raise DomainError(f"{name} must be an integer")
            object.__setattr__(self, name, int(val))
        if self.n < 0:
            raise DomainError("n must be non-negative")

    @property
    def m(self) -> float:
        return self.ell + 0.5

    @property
    def annotations(self) -> tuple:
        if self.n == 0:
            return ("n=0 lies below the radial numbers n >= 1 usually tabulated",)
        return ()


# ---------------------------------------------------------------- ansatz classes

_F = Fraction
# tau = -1/2 classes as ((alpha c0, alpha c1), (beta c0, beta c1)), value (c0 + c1 unit) / 2
_MINUS_FORMS = {
    1: ((0, -1), (0, 1)),
    2: ((0, -1), (1, -1)),
    3: ((1, 1), (0, 1)),
    4: ((1, 1), (1, -1)),
}


def _forms(sector: float, index: int):
    a, b = _MINUS_FORMS[index]
    sign = 1 if sector == TAU_MINUS else -1
    half = lambda f: (_F(sign * f[0], 2), _F(sign * f[1], 2))
    return half(a), half(b)


@dataclass(frozen=True)
class SolutionClass:
    """One polynomial solution class (exponents alpha_bar, beta_bar) of a family."""

    family: Family
    index: int
    tau_sector: float
    mu: float
    alpha_form: tuple
    beta_form: tuple

    def _eval(self, form) -> complex:
        c0, c1 = form
        if self.family is Family.HYPERBOLIC:
            return complex(float(c0), float(c1) * self.mu)
        return complex(float(c0) + float(c1) * self.mu, 0.0)

    @cached_property
    def alpha_bar(self) -> complex:
        return self._eval(self.alpha_form)

    @cached_property
    def beta_bar(self) -> complex:
        return self._eval(self.beta_form)

    @property
    def _delta(self) -> int:
        return 0 if self.tau_sector == TAU_MINUS else 1

    @property
    def shift(self) -> complex:
        """alpha_bar + beta_bar, plus 1 in the tau = +1/2 sector."""
        a, b = self.alpha_form, self.beta_form
        return self._eval((a[0] + b[0] + self._delta, a[1] + b[1]))

    def hyp_params(self, n: int):
        """(b, c) of the polynomial part 2F1(-n, b; c; z)."""
        return _hyp_params(self, n)


@lru_cache(maxsize=4096)
def _hyp_params(cls: SolutionClass, n: int):
    a, q = cls.alpha_form, cls.beta_form
    d = cls._delta
    b = cls._eval((n + 2 * (a[0] + q[0]) + 2 * d, 2 * (a[1] + q[1])))
    c = cls._eval((_F(1, 2) + 2 * q[0] + d, 2 * q[1]))
    return b, c


def _check_family(family, allowed=(Family.HYPERBOLIC, Family.ELLIPTIC)) -> Family:
    fam = Family.parse(family)
    if fam not in allowed:
        raise DomainError(f"family {fam.value} has no ansatz classes")
    return fam


def ansatz_classes(family, tau_sector, m: float, r: float, scale: float) -> tuple:
    """The four solution classes of a family in a given tau sector."""
    fam = _check_family(family)
    sec = sector_of(tau_sector)
    if r <= 0 or scale <= 0:
        raise DomainError("r and scale must be positive")
    if fam is Family.ELLIPTIC and not scale < r:
        raise DomainError("elliptic profiles need 0 < b < r")
    mu = m * r / scale
    return tuple(SolutionClass(fam, j, sec, mu, *_forms(sec, j)) for j in (1, 2, 3, 4))


def solution_class(family, tau_sector, index: int, m: float, r: float, scale: float) -> SolutionClass:
    if index not in (1, 2, 3, 4):
        raise DomainError("class index must be 1, 2, 3 or 4")
    return ansatz_classes(family, tau_sector, m, r, scale)[index - 1]


# ---------------------------------------------------------------- energies

@dataclass(frozen=True)
class EnergyLevel:
    value: complex
    branch: int
    family: Family
    label: str
    n: int
    ell: int
    annotations: tuple = ()
    nu_branch: Optional[int] = None  # sign of sqrt(Delta8) for NU-derived levels


def _pair(value: complex, family, label, qn, notes=(), nu_branch=None):
    notes = tuple(qn.annotations) + tuple(notes)
    return (EnergyLevel(value, +1, family, label, qn.n, qn.ell, notes, nu_branch),
            EnergyLevel(-value, -1, family, label, qn.n, qn.ell, notes, nu_branch))


def _class_energy(qn: QuantumNumbers, cls: SolutionClass, M: float, r: float, scale: float,
                  family: Family):
    if cls.family is not family:
        raise DomainError(f"class belongs to {cls.family.value}, not {family.value}")
    if r <= 0 or scale <= 0:
        raise DomainError("r and scale must be positive")
    mu = qn.m * r / scale
    if abs(mu - cls.mu) > 1e-12 * max(1.0, abs(mu)):
        raise DomainError("solution class was built for a different m, r or scale")
    n = qn.n
    s = cls.shift
    rad = n * n - M * M * r * r + 2 * n * s + s * s
    value = 1j / r * cmath.sqrt(rad)
    return _pair(value, family, f"class {cls.index}", qn)


def energy_hyperbolic(qn: QuantumNumbers, cls: SolutionClass, M: float, r: float, b2: float):
    """(E+, E-) for a hyperbolic solution class; principal square root."""
    return _class_energy(qn, cls, M, r, b2, Family.HYPERBOLIC)


def energy_elliptic(qn: QuantumNumbers, cls: SolutionClass, M: float, r: float, b1: float):
    """(E+, E-) for an elliptic solution class; principal square root."""
    if not 0 < b1 < r:
        raise DomainError("elliptic profiles need 0 < b < r")
    return _class_energy(qn, cls, M, r, b1, Family.ELLIPTIC)


def energy_beltrami_paper(qn: QuantumNumbers, M: float, r: float, b: Optional[float] = None):
    """Closed-form reference Beltrami energy, kept for comparison.

    The expression does not involve the profile scale; ``b`` is accepted only
    so callers can record it and is validated but unused.
    """
    if r <= 0:
        raise DomainError("r must be positive")
    if b is not None and not b > 0:
        raise DomainError("b must be positive")
    n, m = qn.n, qn.m
    num = (1 + 2 * n) * abs(m) * r - m * r * (1 + 2 * n + 2 * n * n - 2 * M * M * r * r)
    den = cmath.sqrt(2 * m) * r ** 1.5
    value = cmath.sqrt(num / den)
    return _pair(value, Family.BELTRAMI, "paper", qn)


def energy_beltrami_nu(qn: QuantumNumbers, M: float, r: float, b: float, tau_sector):
    """(E+, E-) on the Beltrami profile from the Nikiforov-Uvarov reduction.

    The energy condition is solved numerically; the principal branch of the
    square root in the condition is tried first, then the negated branch.
    """
    from .nu import EnergySearch, RootNotBracketed, beltrami_problem, nu_solve_energy

    sec = sector_of(tau_sector)
    if r <= 0 or b <= 0:
        raise DomainError("r and b must be positive")
    reach = abs(M) + (qn.n + 2) / r + 1.0
    search = EnergySearch(hi=reach, axes=("real", "imag"))
    for branch in (+1, -1):
        builder = lambda E: beltrami_problem(E, M, r, b, qn.m, sec)
        try:
            roots = nu_solve_energy(builder, qn.n, search, branch=branch)
        except RootNotBracketed:
            continue
        # prefer the root of smallest modulus (ties are duplicates of each other)
        root = min(roots, key=lambda z: (abs(z), -z.real))
        note = f"nu branch {'+' if branch > 0 else '-'}sqrt(Delta8)"
        return _pair(root, Family.BELTRAMI, "nu", qn, (note,), branch)
    raise RootNotBracketed("no Beltrami energy found on either branch")


# ---------------------------------------------------------------- eigenfunctions

@dataclass(frozen=True)
class WavefunctionSpec:
    """Everything needed to evaluate an upper-component eigenfunction.

    For hyperbolic and elliptic profiles ``solution_class`` fixes the energy;
    the Beltrami profile needs ``energy`` explicitly. ``form="printed"`` uses
    the reference hypergeometric argument (z - 1)/2 instead of (1 - z)/2 and is
    kept only to demonstrate that it does not solve the equation.
    """

    profile: MeridianProfile
    qn: QuantumNumbers
    tau: complex
    mass: float = 0.0
    solution_class: Optional[SolutionClass] = None
    energy: Optional[complex] = None
    c1: complex = 1.0
    c2: complex = 0.0
    form: str = "corrected"
    root_sign: int = -1

    def __post_init__(self):
        object.__setattr__(self, "tau", tau_from_coupling(self.tau))
        if self.form not in ("corrected", "printed"):
            raise DomainError("form must be 'corrected' or 'printed'")
        fam = self.profile.family
        if fam in (Family.HYPERBOLIC, Family.ELLIPTIC):
            cls = self.solution_class
            if cls is None or cls.family is not fam:
                raise DomainError("a solution class of the same family is required")
            if abs(cls.tau_sector - self.tau) > _SECTOR_TOL:
                raise SectorError("coupling does not match the solution class sector")
            mu = self.qn.m * self.profile.mu_scale
            if abs(mu - cls.mu) > 1e-12 * max(1.0, abs(mu)):
                raise DomainError("solution class was built for a different m, r or scale")
        elif fam is Family.BELTRAMI:
            if self.energy is None:
                raise DomainError("Beltrami eigenfunctions need an explicit energy")
            if self.root_sign not in (-1, 1):
                raise DomainError("root_sign must be +1 or -1")
        else:
            raise DomainError("no closed-form eigenfunctions on this family")

    @property
    def E(self) -> complex:
        """Energy of the state (the + branch for the class-based families)."""
        if self.energy is not None:
            return complex(self.energy)
        fam = self.profile.family
        fn = energy_hyperbolic if fam is Family.HYPERBOLIC else energy_elliptic
        return fn(self.qn, self.solution_class, self.mass, self.profile.r, self.profile.scale)[0].value


def _arg_jet(spec: WavefunctionSpec, u, hp: bool = False):
    """Jets of y1 = 1 + w, y2 = 1 - w, z = (1 - w)/2 with w = i sinh or cosh.

    ``hp`` evaluates in mpmath at the working precision of the caller.
    """
    fn = mpmath if hp else math
    cx = mpmath.mpc if hp else complex
    r = mpmath.mpf(spec.profile.r) if hp else spec.profile.r
    t = (mpmath.mpf(u) if hp else u) / r
    if spec.profile.family is Family.HYPERBOLIC:
        X = fn.sinh(t)
        C = fn.cosh(t)
        w = Jet(cx(0.0, X), cx(0.0, C / r), cx(0.0, X / r ** 2))
        return 1 + w, 1 - w, (1 - w) / 2
    # 1 -+ cosh written through half-angle forms to keep digits near the throat
    ch, sh = fn.cosh(t), fn.sinh(t)
    s2 = fn.sinh(t / 2) ** 2
    y1 = Jet(cx(2.0 + 2.0 * s2, 0.0), cx(sh / r, 0.0), cx(ch / r ** 2, 0.0))
    y2 = Jet(cx(-2.0 * s2, 0.0), cx(-sh / r, 0.0), cx(-ch / r ** 2, 0.0))
    return y1, y2, y2 / 2


def _class_jet(spec: WavefunctionSpec, u: float, hp: bool = False) -> Jet:
    cls = spec.solution_class
    n = spec.qn.n
    cut = "raise" if spec.profile.family is Family.HYPERBOLIC else "principal"
    y1, y2, z = _arg_jet(spec, u, hp)
    pref = pow_jet(y1, cls.alpha_bar, on_cut=cut) * pow_jet(y2, cls.beta_bar, on_cut=cut)
    b, c = cls.hyp_params(n)
    poly_arg = z if spec.form == "corrected" else -z
    poly = poly_arg.compose(*hyp2f1_poly_jet(n, b, c, poly_arg.v))
    Q = spec.c1 * poly
    if spec.c2 != 0:
        a = -n
        G = z.compose(*hyp2f1_jet(a - c + 1, b - c + 1, 2 - c, z.v))
        if spec.form == "corrected":
            P = pow_jet(z, 1 - c, on_cut=cut)
        else:
            P = pow_jet(-2 * z, 1 - c, on_cut=cut) * (2 ** (c - 1))
        Q = Q + spec.c2 * (P * G)
    return pref * Q


def polynomial_part(spec: WavefunctionSpec, u: float) -> complex:
    """The terminating hypergeometric factor alone (c1 = 1, c2 = 0)."""
    cls = spec.solution_class
    if cls is None:
        raise DomainError("only class-based eigenfunctions have a polynomial part")
    _, _, z = _arg_jet(spec, u)
    x = z.v if spec.form == "corrected" else -z.v
    b, c = cls.hyp_params(spec.qn.n)
    return hyp2f1_poly_jet(spec.qn.n, b, c, x)[0]


def _beltrami_jet(spec: WavefunctionSpec, u: float, hp: bool = False) -> Jet:
    prof = spec.profile
    r, b = prof.r, prof.scale
    M, E = spec.mass, complex(spec.energy)
    n, m = spec.qn.n, spec.qn.m
    if hp:
        r, b, M, E, u = mpmath.mpf(r), mpmath.mpf(b), mpmath.mpf(M), mpmath.mpc(E), mpmath.mpf(u)
        s = spec.root_sign * mpmath.sqrt((M * M - E * E) * r * r)
        q = mpmath.exp(-u / r)
    else:
        s = spec.root_sign * cmath.sqrt((M * M - E * E) * r * r)
        q = math.exp(-u / r)
    expo = 0.5 + spec.tau + s
    a = abs(m) * r / b
    qj = Jet(q, -q / r, q / r ** 2)
    power = exp_jet(Jet(-expo * u / r, -expo / r, 0.0))
    damp = exp_jet(-a * qj)
    x = 2 * a * qj
    lag = x.compose(*laguerre_jet(n, 2 * s, x.v))
    return power * damp * lag


class Eigenfunction:
    """Callable upper component with exact first and second u-derivatives."""

    supports_hp = True

    def __init__(self, spec: WavefunctionSpec):
        self.spec = spec
        self._memo = {}  # double-precision jets by sample point

    def jet(self, u: float, hp: bool = False) -> Jet:
        u = float(u)
        if not hp and u in self._memo:
            return self._memo[u]
        if self.spec.profile.family is Family.BELTRAMI:
            out = _beltrami_jet(self.spec, u, hp)
        else:
            out = _class_jet(self.spec, u, hp)
        if not hp:
            if len(self._memo) > 4096:
                self._memo.clear()
            self._memo[u] = out
        return out

    def derivatives(self, u: float, order: int = 2, hp: bool = False):
        """(psi, psi', psi'')[:order + 1]; ``hp`` evaluates in mpmath."""
        j = self.jet(u, hp)
        return (j.v, j.d1, j.d2)[: order + 1]

    def __call__(self, u: float) -> complex:
        return self.jet(u).v


def eigenfunction(spec: WavefunctionSpec) -> Eigenfunction:
    return Eigenfunction(spec)


def psi1_hyperbolic(spec: WavefunctionSpec, u: float) -> complex:
    if spec.profile.family is not Family.HYPERBOLIC:
        raise DomainError("spec is not hyperbolic")
    return Eigenfunction(spec)(u)


def psi1_elliptic(spec: WavefunctionSpec, u: float) -> complex:
    if spec.profile.family is not Family.ELLIPTIC:
        raise DomainError("spec is not elliptic")
    return Eigenfunction(spec)(u)


def psi1_beltrami(spec: WavefunctionSpec, u: float, root_sign: Optional[int] = None) -> complex:
    """Beltrami upper component q^(1/2+tau+s) exp(-a q) L_n^(2s)(2 a q), q = exp(-u/r).

    ``s = root_sign * sqrt((M^2 - E^2) r^2)``; the default -1 is the branch on
    which the Laguerre factor is a genuine eigenfunction, +1 reproduces the
    reference exponent.
    """
    if spec.profile.family is not Family.BELTRAMI:
        raise DomainError("spec is not Beltrami")
    if root_sign is not None and root_sign != spec.root_sign:
        spec = WavefunctionSpec(**{**spec.__dict__, "root_sign": root_sign})
    return Eigenfunction(spec)(u)


# ---------------------------------------------------------------- lower component

def _derivs(psi, u: float, order: int, hp: bool = False):
    if hasattr(psi, "derivatives"):
        return psi.derivatives(u, order, hp=hp) if hp else psi.derivatives(u, order)
    f0 = complex(psi(u))
    if order == 0:
        return (f0,)
    # central differences with the usual rounding-balanced steps, eps^(1/3) and eps^(1/4)
    size = max(1.0, abs(u))
    h1, h2 = 6e-6 * size, 1.2e-4 * size
    out = (f0, (complex(psi(u + h1)) - complex(psi(u - h1))) / (2 * h1))
    if order >= 2:
        out = out + ((complex(psi(u + h2)) - 2 * f0 + complex(psi(u - h2))) / (h2 * h2),)
    return out


def _gauge(profile: MeridianProfile, m: float, tau: complex, u: float, hp: bool = False):
    """g = (1/2 + tau) R'/R - m/R and its u-derivative."""
    R, R1, R2 = meridian_mp(profile, u) if hp else eval_meridian(profile, u)
    if R == 0:
        raise ThroatSingularity(f"R(u) = 0 at u = {u}")
    h = 0.5 + tau
    g = h * R1 / R - m / R
    dg = h * (R2 / R - (R1 / R) ** 2) + m * R1 / R ** 2
    return g, dg


class LowerComponent:
    """psi2 = -(psi1' + g psi1) / (E + M), with its first derivative."""

    def __init__(self, profile, E, M, qn, coupling, psi1):
        self.profile = profile
        self.E = complex(E)
        self.M = float(M)
        self.m = qn.m
        self.tau = tau_from_coupling(coupling)
        self.psi1 = psi1
        if abs(self.E + self.M) < 1e-14:
            raise MassShellSingularity("E + M = 0: lower component undefined")
        self.supports_hp = getattr(psi1, "supports_hp", False)

    def derivatives(self, u: float, order: int = 1, hp: bool = False):
        if order > 1:
            raise ValueError("only the first derivative of psi2 is available")
        g, dg = _gauge(self.profile, self.m, self.tau, u, hp)
        den = self.E + self.M
        if order == 0:
            f0, f1 = _derivs(self.psi1, u, 1, hp)
            return (-(f1 + g * f0) / den,)
        f0, f1, f2 = _derivs(self.psi1, u, 2, hp)
        return (-(f1 + g * f0) / den, -(f2 + dg * f0 + g * f1) / den)

    def __call__(self, u: float) -> complex:
        return self.derivatives(u, 0)[0]


def psi2_from_psi1(profile: MeridianProfile, E, M, qn: QuantumNumbers, coupling,
                   psi1: Callable, u: float) -> complex:
    """Lower spinor component from the first-order coupled equation."""
    return LowerComponent(profile, E, M, qn, coupling, psi1)(u)
