"""Meridian profiles of constant-curvature surfaces of revolution.

A surface of revolution is embedded in R^3 as (R(u) cos v, R(u) sin v, z(u))
with u the meridian arc length, so that z'(u) = sqrt(1 - R'(u)**2). Four
profile families are supported:

==================  ======================  ==========
family              R(u)                    curvature
==================  ======================  ==========
hyperbolic          b cosh(u / r)           -1 / r**2
elliptic            b sinh(u / r), b < r    -1 / r**2
beltrami            b exp(u / r)            -1 / r**2
spherical_cosine    d cos(u / r + phase)    +1 / r**2
==================  ======================  ==========
"""
from __future__ import annotations

import enum
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EmptyDomain, OutOfDomain
from .specfun import adaptive_quad, carlson_rd, ellip_e_inc

DEFAULT_CUTOFF = 1e-3


class Family(str, enum.Enum):
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    BELTRAMI = "beltrami"
    SPHERICAL_COSINE = "spherical_cosine"

    @classmethod
    def parse(cls, value) -> "Family":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {"sphericalcosine": "spherical_cosine", "spherical": "spherical_cosine",
                   "cosine": "spherical_cosine"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown family {value!r}") from None


@dataclass(frozen=True)
class MeridianProfile:
    """Parameters of one meridian profile.

    ``scale`` is b for the three negative-curvature families and d for the
    spherical cosine; ``phase`` is used only by the spherical cosine.
    """

    family: Family
    r: float
    scale: float
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        for name in ("r", "scale", "phase"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, val)
        if self.r <= 0:
            raise DomainError("r must be positive")
        if self.scale <= 0:
            raise DomainError("scale must be positive")
        if self.family is Family.ELLIPTIC and not self.scale < self.r:
            raise DomainError("elliptic profiles need 0 < b < r")
        if self.family is not Family.SPHERICAL_COSINE and self.phase != 0.0:
            raise DomainError("phase is only meaningful for the spherical cosine family")

    @classmethod
    def elliptic_from_angle(cls, angle: float, r: float = 1.0) -> "MeridianProfile":
        """Elliptic profile with b = r cos(angle), 0 < angle < pi/2."""
        if not 0.0 < angle < math.pi / 2:
            raise DomainError("angle must lie in (0, pi/2)")
        return cls(Family.ELLIPTIC, r, r * math.cos(angle))

    @property
    def mu_scale(self) -> float:
        """r / scale, the factor turning the angular number m into the ansatz parameter."""
        return self.r / self.scale


def eval_meridian(profile: MeridianProfile, u):
    """Return (R, R', R'') at ``u`` (scalar or array)."""
    r, b = profile.r, profile.scale
    t = np.asarray(u, dtype=float) / r
    fam = profile.family
    if fam is Family.HYPERBOLIC:
        c, s = np.cosh(t), np.sinh(t)
        out = (b * c, b / r * s, b / r ** 2 * c)
    elif fam is Family.ELLIPTIC:
        c, s = np.cosh(t), np.sinh(t)
        out = (b * s, b / r * c, b / r ** 2 * s)
    elif fam is Family.BELTRAMI:
        e = np.exp(t)
        out = (b * e, b / r * e, b / r ** 2 * e)
    else:
        a = t + profile.phase
        c, s = np.cos(a), np.sin(a)
        out = (b * c, -b / r * s, -b / r ** 2 * c)
    if np.ndim(u) == 0:
        return tuple(float(x) for x in out)
    return out


def meridian_mp(profile: MeridianProfile, u):
    """(R, R', R'') evaluated in mpmath at the current working precision."""
    import mpmath

    r, b = mpmath.mpf(profile.r), mpmath.mpf(profile.scale)
    t = mpmath.mpf(u) / r
    fam = profile.family
    if fam is Family.HYPERBOLIC:
        c, s = mpmath.cosh(t), mpmath.sinh(t)
        return b * c, b / r * s, b / r ** 2 * c
    if fam is Family.ELLIPTIC:
        c, s = mpmath.cosh(t), mpmath.sinh(t)
        return b * s, b / r * c, b / r ** 2 * s
    if fam is Family.BELTRAMI:
        e = mpmath.exp(t)
        return b * e, b / r * e, b / r ** 2 * e
    a = t + mpmath.mpf(profile.phase)
    c, s = mpmath.cos(a), mpmath.sin(a)
    return b * c, -b / r * s, -b / r ** 2 * c


def gaussian_curvature(profile: MeridianProfile) -> float:
    """Declared constant Gaussian curvature K = -R''/R."""
    k = 1.0 / profile.r ** 2
    return k if profile.family is Family.SPHERICAL_COSINE else -k


def magnetic_profile(profile: MeridianProfile, b0: float, u):
    """Field strength B(u) = b0 R'(u) / R(u)."""
    R, R1, _ = eval_meridian(profile, u)
    return b0 * np.asarray(R1) / np.asarray(R) if np.ndim(u) else b0 * R1 / R


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    unbounded_below: bool = False
    unbounded_above: bool = False

    def __contains__(self, u) -> bool:
        return self.lo <= u <= self.hi

    @property
    def length(self) -> float:
        return self.hi - self.lo


def embedding_domain(profile: MeridianProfile, cutoff: float = DEFAULT_CUTOFF) -> Interval:
    """Connected interval where R >= 0 and R'**2 <= 1.

    For the Beltrami profile the true domain is unbounded below; the returned
    ``lo`` is where R has dropped to ``cutoff`` times its largest admissible
    value r, and ``unbounded_below`` is set.
    """
    r, b = profile.r, profile.scale
    fam = profile.family
    if fam is Family.HYPERBOLIC:
        h = r * math.asinh(r / b)
        return Interval(-h, h)
    if fam is Family.ELLIPTIC:
        return Interval(0.0, r * math.acosh(r / b))
    if fam is Family.BELTRAMI:
        if not 0 < cutoff < 1:
            raise EmptyDomain("truncation cutoff must lie in (0, 1)")
        hi = r * math.log(r / b)
        return Interval(hi + r * math.log(cutoff), hi, unbounded_below=True)
    half = math.pi / 2 if b <= r else math.asin(r / b)
    centre = -profile.phase * r
    return Interval(centre - r * half, centre + r * half)


def _z_base(dom: Interval) -> float:
    lo = -math.inf if dom.unbounded_below else dom.lo
    return min(max(0.0, lo), dom.hi)


def z_slope(profile: MeridianProfile, u: float) -> float:
    _, R1, _ = eval_meridian(profile, u)
    return math.sqrt(max(1.0 - R1 * R1, 0.0))


def _check_inside(profile, u, dom):
    # admit a rounding-level excursion at the ends of the interval
    slack = 1e-12 * max(1.0, abs(dom.lo), abs(dom.hi))
    lo = -math.inf if dom.unbounded_below else dom.lo - slack
    if not (lo <= u <= dom.hi + slack):
        raise OutOfDomain(f"u = {u} outside the embedding domain [{dom.lo}, {dom.hi}]")
    _, R1, _ = eval_meridian(profile, u)
    if R1 * R1 > 1.0 + 1e-12:
        raise OutOfDomain(f"R'(u)^2 = {R1 * R1} exceeds 1 at u = {u}")


def _height(profile: MeridianProfile, dom: Interval, a: float, b: float, tol: float) -> float:
    """Integral of sqrt(1 - R'^2) from a to b.

    Where |R'| reaches 1 at a domain end the integrand falls off like the
    square root of the distance to it. With u = L + (H - L)(1 - cos t)/2 the
    integrand in t is smooth at both ends, which keeps the quadrature accurate
    right up to the rim.
    """
    H = dom.hi
    L = min(a, b, H) - profile.r if dom.unbounded_below else dom.lo
    span = H - L
    half = 0.5 * span

    def angle(u):
        return math.acos(min(1.0, max(-1.0, 1.0 - (u - L) / half)))

    def integrand(t):
        return z_slope(profile, L + half * (1.0 - math.cos(t))) * half * math.sin(t)

    return adaptive_quad(integrand, angle(a), angle(b), tol)


def z_profile(profile: MeridianProfile, u: float, tol: float = 1e-10) -> float:
    """Height z(u) = integral of sqrt(1 - R'^2) from the base point to u.

    The base point is u = 0 when it lies in the embedding domain and the
    nearest domain end otherwise. The + branch of the square root is used.
    """
    dom = embedding_domain(profile)
    u = float(u)
    _check_inside(profile, u, dom)
    return _height(profile, dom, _z_base(dom), u, tol)


def z_closed_form(profile: MeridianProfile, u: float) -> float:
    """Height z(u) from elliptic-integral (or elementary) closed forms.

    Independent of :func:`z_profile`; used to cross-check the quadrature.
    """
    dom = embedding_domain(profile)
    u = float(u)
    _check_inside(profile, u, dom)
    r, b = profile.r, profile.scale
    fam = profile.family

    if fam is Family.BELTRAMI:
        def prim(t):
            w = min(b / r * math.exp(t / r), 1.0)
            s = math.sqrt(1.0 - w * w)
            # atanh(s) written as log((1 + s) / w) to avoid cancellation for small w
            return r * (s - math.log((1.0 + s) / w))
        return prim(u) - prim(_z_base(dom))

    if fam is Family.SPHERICAL_COSINE:
        m = (b / r) ** 2
        rim = math.pi / 2 if b <= r else math.asin(r / b)

        def prim(t):
            a = t / r + profile.phase
            a = max(-rim, min(rim, a))  # rounding may step past the rim
            return math.copysign(r * ellip_e_inc(abs(a), m), a)
        return prim(u) - prim(_z_base(dom))

    # hyperbolic, and elliptic after cosh^2 = 1 + sinh^2
    m = (b / r) ** 2
    if fam is Family.HYPERBOLIC:
        pre, k = r, m
    else:
        pre, k = r * math.sqrt(1.0 - m), m / (1.0 - m)

    def h(theta):
        # integral_0^theta sqrt(1 - k sinh^2 t) dt, odd in theta. In Legendre form this is
        # tanh * sqrt(rad) + F(phi|1+k) - E(phi|1+k) with tan(phi) = sinh(theta); F cancels
        # against the F inside E, leaving one R_D term. Sharing ``rad`` between the two
        # terms keeps their square-root behaviour at the rim consistent.
        th = abs(theta)
        t = math.tanh(th)
        x = 1.0 / math.cosh(th) ** 2
        rad = max(1.0 - k * math.sinh(th) ** 2, 0.0)
        val = t * math.sqrt(rad) + (1.0 + k) / 3.0 * t ** 3 * carlson_rd(x, rad * x, 1.0)
        return math.copysign(val, theta)
    return pre * (h(u / r) - h(_z_base(dom) / r))


def embed(profile: MeridianProfile, u: float, v: float, tol: float = 1e-10):
    """Point (R cos v, R sin v, z) of the embedded surface."""
    R, _, _ = eval_meridian(profile, u)
    z = z_profile(profile, u, tol)
    return (R * math.cos(v), R * math.sin(v), z)


@dataclass
class SurfaceMesh:
    """Quad mesh over a (u, v) grid; vertex index i * nv + j for u_i, v_j."""

    profile: MeridianProfile
    u: np.ndarray
    v: np.ndarray
    vertices: np.ndarray
    quads: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def nu(self) -> int:
        return len(self.u)

    @property
    def nv(self) -> int:
        return len(self.v)


def build_mesh(profile: MeridianProfile, nu: int, nv: int, u_min=None, u_max=None,
               cutoff: float = DEFAULT_CUTOFF, tol: float = 1e-10) -> SurfaceMesh:
    """Uniform (u, v) grid over the embedding domain times [0, 2 pi].

    Both v = 0 and v = 2 pi are present so the seam closes geometrically; the
    mesh has nu * nv vertices and (nu - 1) * (nv - 1) quads.
    """
    if int(nu) != nu or int(nv) != nv or nu < 2 or nv < 2:
        raise DomainError("nu and nv must be integers >= 2")
    nu, nv = int(nu), int(nv)
    dom = embedding_domain(profile, cutoff)
    lo = dom.lo if u_min is None else float(u_min)
    hi = dom.hi if u_max is None else float(u_max)
    if not lo < hi:
        raise EmptyDomain(f"empty u-range [{lo}, {hi}]")
    true_lo = -math.inf if dom.unbounded_below else dom.lo
    slack = 1e-12 * max(1.0, abs(dom.hi), abs(dom.lo))
    if lo < true_lo - slack or hi > dom.hi + slack:
        raise OutOfDomain(f"u-range [{lo}, {hi}] leaves the embedding domain")
    us = np.linspace(lo, hi, nu)
    vs = np.linspace(0.0, 2 * math.pi, nv)
    base = _z_base(dom)
    R, _, _ = eval_meridian(profile, us)
    zs = np.array([_height(profile, dom, base, float(ui), tol) for ui in us])
    cv, sv = np.cos(vs), np.sin(vs)
    verts = np.empty((nu * nv, 3))
    verts[:, 0] = np.outer(R, cv).ravel()
    verts[:, 1] = np.outer(R, sv).ravel()
    verts[:, 2] = np.repeat(zs, nv)
    idx = np.arange(nu * nv).reshape(nu, nv)
    quads = np.stack([idx[:-1, :-1], idx[1:, :-1], idx[1:, 1:], idx[:-1, 1:]], axis=-1).reshape(-1, 4)
    meta = {
        "family": profile.family.value,
        "r": profile.r,
        "scale": profile.scale,
        "phase": profile.phase,
        "nu": nu,
        "nv": nv,
        "u_min": float(lo),
        "u_max": float(hi),
    }
    return SurfaceMesh(profile, us, vs, verts, quads, meta)


def fmt_shortest(x: float) -> str:
    """Shortest round-trip decimal; integral values drop the trailing '.0'."""
    x = float(x) + 0.0  # turns -0.0 into 0.0
    s = repr(x)
    return s[:-2] if s.endswith(".0") else s


def _fmt17(x: float) -> str:
    return format(float(x) + 0.0, ".17g")


def export_mesh(mesh: SurfaceMesh, fmt: str = "obj", meta: bool = True) -> bytes:
    """Serialise a mesh as Wavefront OBJ or as CSV with header ``u,v,x,y,z``."""
    fmt = fmt.lower()
    lines = []
    if fmt == "obj":
        if meta:
            for key, val in mesh.metadata.items():
                lines.append(f"# {key}={fmt_shortest(val) if isinstance(val, float) else val}")
        for x, y, z in mesh.vertices:
            lines.append(f"v {_fmt17(x)} {_fmt17(y)} {_fmt17(z)}")
        for q in mesh.quads:
            lines.append("f " + " ".join(str(int(i) + 1) for i in q))
    elif fmt == "csv":
        lines.append("u,v,x,y,z")
        k = 0
        for ui in mesh.u:
            for vj in mesh.v:
                x, y, z = mesh.vertices[k]
                lines.append(",".join(fmt_shortest(t) for t in (ui, vj, x, y, z)))
                k += 1
    else:
        raise DomainError(f"unknown mesh format {fmt!r}")
    return ("\n".join(lines) + "\n").encode("ascii")


def atomic_write(path: str, data: bytes) -> None:
    """Write ``data`` to ``path`` through a temporary file and a rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        # mkstemp creates 0600 files; give the result the usual umask-based mode
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def discrete_curvature(mesh: SurfaceMesh) -> np.ndarray:
    """Angle-deficit curvature at interior vertices, shape (nu - 2, nv - 1).

    The seam column v = 2 pi is identified with v = 0. Each vertex gets the
    deficit 2 pi - (sum of incident quad angles) divided by a quarter of the
    incident quad areas.
    """
    nu, nv = mesh.nu, mesh.nv
    P = mesh.vertices.reshape(nu, nv, 3)[:, :-1, :]  # drop duplicate seam column
    ncol = nv - 1

    def angle(a, b, c):
        e1, e2 = b - a, c - a
        n1, n2 = np.linalg.norm(e1, axis=-1), np.linalg.norm(e2, axis=-1)
        cos = np.einsum("...k,...k->...", e1, e2) / (n1 * n2)
        return np.arccos(np.clip(cos, -1.0, 1.0))

    out = np.empty((nu - 2, ncol))
    for i in range(1, nu - 1):
        for j in range(ncol):
            jm, jp = (j - 1) % ncol, (j + 1) % ncol
            c = P[i, j]
            total = 0.0
            area = 0.0
            for di, dj in ((1, jp), (1, jm), (-1, jp), (-1, jm)):
                a = P[i + di, j]
                b = P[i, dj]
                d = P[i + di, dj]
                total += angle(c, a, b)
                area += 0.5 * (np.linalg.norm(np.cross(d - c, b - a)))
            out[i - 1, j] = (2 * math.pi - total) / (area / 4)
    return out
