"""Couplings, solution classes, energies and eigenfunctions."""
import cmath
import math

import pytest
from hypothesis import given, strategies as st

from wormhole_dirac.errors import DomainError, MassShellSingularity, SectorError
from wormhole_dirac.geometry import MeridianProfile
from wormhole_dirac.spectra import (TAU_MINUS, TAU_PLUS, Eigenfunction, LowerComponent, LsvCoupling,
                                    QuantumNumbers, WavefunctionSpec, ansatz_classes,
                                    energy_beltrami_nu, energy_beltrami_paper, energy_elliptic,
                                    energy_hyperbolic, polynomial_part, psi1_beltrami, psi1_elliptic,
                                    psi1_hyperbolic, psi2_from_psi1, sector_of, solution_class,
                                    tau_from_coupling)
from wormhole_dirac.verify import ansatz_system_residual, ode_residual

# reference values evaluated independently with mpmath at 30 digits
E_HYP = complex(0.633551749161816554509756960322, 1.18380227186215406556543752571)  # class 2, tau -1/2, n 1, ell 0, M 1, r 1, b 1
E_ELL = complex(0.0, 2.56173769148989959580525967013)                             # class 3, tau -1/2, n 2, ell 1, M 1, r 2, b 1
PSI_HYP = complex(-0.669423693860708613519835693518, 1.33884738772141722703967138704)  # class 1, n 2, u 0.3
PSI_ELL = complex(0.715778391859435193820686359402, -0.354698914727818084623680413496)  # class 4, tau +1/2, n 1, u 0.4

mvals = st.sampled_from([0.5, -0.5, 1.5, -1.5, 2.5])
ells = st.sampled_from([0, -1, 1, -2, 2])
pos = st.floats(0.2, 5.0)
sector = st.sampled_from([TAU_MINUS, TAU_PLUS])
family = st.sampled_from(["hyperbolic", "elliptic"])


def classes_for(fam, sec, m, r, scale):
    if fam == "elliptic":
        scale = min(scale, 0.9 * r)
    return ansatz_classes(fam, sec, m, r, scale), scale


# ---------------------------------------------------------------- coupling

def test_tau_from_coupling():
    assert LsvCoupling(1.0, 0.5, -1j).tau == -0.5
    assert tau_from_coupling(0.5) == 0.5
    assert sector_of(LsvCoupling(2.0, 0.25, 1j)) == TAU_PLUS
    with pytest.raises(SectorError):
        sector_of(0.3)
    with pytest.raises(SectorError):
        sector_of(LsvCoupling(1.0, 1.0, 1.0))


def test_quantum_numbers():
    assert QuantumNumbers(2, -1).m == -0.5
    assert QuantumNumbers(0, 0).annotations
    assert not QuantumNumbers(1, 0).annotations
    with pytest.raises(DomainError):
        QuantumNumbers(-1, 0)
    with pytest.raises(DomainError):
        QuantumNumbers(1.5, 0)


# ---------------------------------------------------------------- classes

@given(family, sector, mvals, pos, pos)
def test_ansatz_systems(fam, sec, m, r, scale):
    classes, _ = classes_for(fam, sec, m, r, scale)
    for cls in classes:
        assert ansatz_system_residual(cls) < 1e-12 * max(1.0, cls.mu ** 2)


def test_class_validation():
    with pytest.raises(DomainError):
        ansatz_classes("beltrami", TAU_MINUS, 0.5, 1, 1)
    with pytest.raises(DomainError):
        ansatz_classes("elliptic", TAU_MINUS, 0.5, 1, 1)
    with pytest.raises(DomainError):
        solution_class("hyperbolic", TAU_MINUS, 5, 0.5, 1, 1)
    with pytest.raises(SectorError):
        ansatz_classes("hyperbolic", 0.2, 0.5, 1, 1)


# ---------------------------------------------------------------- energies

def test_energy_reference():
    qn = QuantumNumbers(1, 0)
    cls = ansatz_classes("hyperbolic", TAU_MINUS, qn.m, 1, 1)[1]
    assert abs(energy_hyperbolic(qn, cls, 1.0, 1.0, 1.0)[0].value - E_HYP) < 1e-14
    qn = QuantumNumbers(2, 1)
    cls = ansatz_classes("elliptic", TAU_MINUS, qn.m, 2, 1)[2]
    assert abs(energy_elliptic(qn, cls, 1.0, 2.0, 1.0)[0].value - E_ELL) < 1e-14


def test_energy_example_row():
    qn = QuantumNumbers(1, 0)
    cls = ansatz_classes("hyperbolic", TAU_MINUS, qn.m, 1, 1)[0]
    ep, em = energy_hyperbolic(qn, cls, 0.0, 1.0, 1.0)
    assert ep.value == 1j and em.value == -1j
    assert ep.label == "class 1" and ep.branch == 1 and em.branch == -1


def test_energy_small_scale():
    # m r / b = 1 with M = 0: (i/2) sqrt(9 - 4(3i + 1)) = (i/2)(3 - 2i)
    qn = QuantumNumbers(1, 0)
    cls = ansatz_classes("hyperbolic", TAU_MINUS, qn.m, 1, 0.5)[1]
    ep, em = energy_hyperbolic(qn, cls, 0.0, 1.0, 0.5)
    assert abs(ep.value - (1 + 1.5j)) < 1e-15 and abs(em.value + (1 + 1.5j)) < 1e-15
    assert abs(ep.value - 0.5j * cmath.sqrt(5 - 12j)) < 1e-15


def test_energy_class_mismatch():
    qn = QuantumNumbers(1, 0)
    cls = ansatz_classes("hyperbolic", TAU_MINUS, 1.5, 1, 1)[0]
    with pytest.raises(DomainError):
        energy_hyperbolic(qn, cls, 0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        energy_elliptic(qn, cls, 0.0, 1.0, 0.5)


@given(family, sector, st.integers(0, 8), ells, st.floats(0, 3), pos, pos)
def test_termination_identity(fam, sec, n, ell, M, r, scale):
    qn = QuantumNumbers(n, ell)
    classes, scale = classes_for(fam, sec, qn.m, r, scale)
    fn = energy_hyperbolic if fam == "hyperbolic" else energy_elliptic
    for cls in classes:
        ep, em = fn(qn, cls, M, r, scale)
        k2r2 = -(n + cls.shift) ** 2
        assert abs((ep.value ** 2 - M * M) * r * r - k2r2) <= 1e-12 * max(1.0, abs(k2r2), (M * r) ** 2)
        # the two branches sum to zero
        assert ep.value + em.value == 0


@given(family, st.integers(0, 8), st.floats(0, 3), pos, pos)
def test_classes_one_and_four_ignore_m(fam, n, M, r, scale):
    fn = energy_hyperbolic if fam == "hyperbolic" else energy_elliptic
    for sec in (TAU_MINUS, TAU_PLUS):
        for index in (1, 4):
            values = set()
            for m in (0.5, -0.5, 1.5, -1.5, 2.5):
                qn = QuantumNumbers(n, int(m - 0.5))
                classes, sc = classes_for(fam, sec, m, r, scale)
                values.add(fn(qn, classes[index - 1], M, r, sc)[0].value)
            assert len(values) == 1


@given(family, st.integers(0, 8), ells, st.floats(0, 3), pos, pos)
def test_correspondence_bitwise(fam, n, ell, M, r, scale):
    qn = QuantumNumbers(n, ell)
    plus, sc = classes_for(fam, TAU_PLUS, qn.m, r, scale)
    minus, _ = classes_for(fam, TAU_MINUS, qn.m, r, scale)
    fn = energy_hyperbolic if fam == "hyperbolic" else energy_elliptic
    for i, j in ((1, 4), (2, 3), (3, 2), (4, 1)):
        a = fn(qn, plus[i - 1], M, r, sc)
        b = fn(qn, minus[j - 1], M, r, sc)
        assert a[0].value == b[0].value and a[1].value == b[1].value


# ---------------------------------------------------------------- Beltrami energies

def test_beltrami_paper_b_independence():
    qn = QuantumNumbers(2, 0)
    vals = {energy_beltrami_paper(qn, 1.3, 1.1, b)[0].value for b in (0.5, 1.0, 2.7)}
    assert len(vals) == 1
    with pytest.raises(DomainError):
        energy_beltrami_paper(qn, 1.0, -1.0)


def test_beltrami_paper_substitution():
    # n = 0, m = 1/2, M = 1, r = 1: numerator 1/2 + 1/2 = 1, denominator 1
    ep, em = energy_beltrami_paper(QuantumNumbers(0, 0), 1.0, 1.0)
    assert ep.value == 1 and em.value == -1


@given(st.integers(0, 8), st.integers(0, 4), st.floats(0, 4), st.floats(0.2, 4))
def test_beltrami_real_energy_condition(n, ell, M, r):
    m = ell + 0.5
    lhs = (1 + 2 * n) * abs(m) * r + 2 * M * M * m * r ** 3
    rhs = m * r * (1 + 2 * n + 2 * n * n)
    E = energy_beltrami_paper(QuantumNumbers(n, ell), M, r)[0].value
    if abs(lhs - rhs) < 1e-9 * max(lhs, rhs):
        return  # on the boundary E = 0 up to rounding
    assert (abs(E.imag) <= 1e-12 * max(1.0, abs(E))) == (lhs >= rhs)


@pytest.mark.parametrize("n, ell, M, r, expected", [
    (1, 0, 2.0, 1.0, math.sqrt(3)),
    (0, 0, 1.0, 1.0, 1.0),
    (2, -1, 2.0, 1.0, 1j * math.sqrt(5)),
    (3, 0, 1.0, 2.0, 1j * math.sqrt(5) / 2),
])
def test_beltrami_nu_energy(n, ell, M, r, expected):
    for tau in (TAU_MINUS, TAU_PLUS):
        level = energy_beltrami_nu(QuantumNumbers(n, ell), M, r, 0.7, tau)[0]
        assert abs(level.value - expected) < 1e-12
        assert level.nu_branch in (1, -1)
        assert level.annotations[-1].startswith("nu branch")


# ---------------------------------------------------------------- eigenfunctions

def test_psi_reference_values():
    prof = MeridianProfile("hyperbolic", 1, 1)
    qn = QuantumNumbers(2, 0)
    cls = ansatz_classes(prof.family, TAU_MINUS, qn.m, 1, 1)[0]
    assert abs(psi1_hyperbolic(WavefunctionSpec(prof, qn, TAU_MINUS, 0.0, cls), 0.3) - PSI_HYP) < 1e-14
    prof = MeridianProfile.elliptic_from_angle(math.pi / 4)
    qn = QuantumNumbers(1, 0)
    cls = ansatz_classes(prof.family, TAU_PLUS, qn.m, 1, prof.scale)[3]
    assert abs(psi1_elliptic(WavefunctionSpec(prof, qn, TAU_PLUS, 0.0, cls), 0.4) - PSI_ELL) < 1e-14


def test_polynomial_part_n1_at_throat():
    # at u = 0 the corrected argument is 1/2, giving 1 - b / (2c) for n = 1
    prof = MeridianProfile("hyperbolic", 1, 1)
    qn = QuantumNumbers(1, 0)
    cls = ansatz_classes(prof.family, TAU_MINUS, qn.m, 1, 1)[0]
    b, c = cls.hyp_params(1)
    val = polynomial_part(WavefunctionSpec(prof, qn, TAU_MINUS, 0.0, cls), 0.0)
    assert abs(val - (1 - b / (2 * c))) < 1e-15


@pytest.mark.parametrize("fam, scale", [("hyperbolic", 1.0), ("elliptic", 0.5)])
def test_printed_argument_is_not_a_solution(fam, scale):
    prof = MeridianProfile(fam, 1.0, scale)
    qn = QuantumNumbers(2, 0)
    cls = ansatz_classes(prof.family, TAU_MINUS, qn.m, 1.0, scale)[1]
    good = WavefunctionSpec(prof, qn, TAU_MINUS, 1.0, cls)
    bad = WavefunctionSpec(prof, qn, TAU_MINUS, 1.0, cls, form="printed")
    assert ode_residual(prof, good.E, 1.0, qn, TAU_MINUS, Eigenfunction(good)).passed
    assert not ode_residual(prof, bad.E, 1.0, qn, TAU_MINUS, Eigenfunction(bad)).passed


def test_second_solution_term():
    # c2 adds the z^(1-c) solution; the sum still solves the equation
    prof = MeridianProfile("hyperbolic", 1.0, 1.0)
    qn = QuantumNumbers(1, 0)
    cls = ansatz_classes(prof.family, TAU_MINUS, qn.m, 1.0, 1.0)[1]
    spec = WavefunctionSpec(prof, qn, TAU_MINUS, 0.0, cls, c1=1.0, c2=0.5)
    assert ode_residual(prof, spec.E, 0.0, qn, TAU_MINUS, Eigenfunction(spec), grid=12).passed


def test_spec_validation():
    prof = MeridianProfile("hyperbolic", 1, 1)
    qn = QuantumNumbers(1, 0)
    cls = ansatz_classes(prof.family, TAU_MINUS, qn.m, 1, 1)[0]
    with pytest.raises(DomainError):
        WavefunctionSpec(prof, qn, TAU_MINUS)
    with pytest.raises(SectorError):
        WavefunctionSpec(prof, qn, TAU_PLUS, 0.0, cls)
    with pytest.raises(DomainError):
        WavefunctionSpec(prof, qn, TAU_MINUS, 0.0, cls, form="other")
    with pytest.raises(DomainError):
        WavefunctionSpec(MeridianProfile("beltrami", 1, 1), qn, TAU_MINUS)
    with pytest.raises(DomainError):
        WavefunctionSpec(MeridianProfile("spherical_cosine", 1, 0.5), qn, TAU_MINUS, energy=1.0)
    with pytest.raises(DomainError):
        psi1_elliptic(WavefunctionSpec(prof, qn, TAU_MINUS, 0.0, cls), 0.1)


def test_beltrami_root_sign():
    prof = MeridianProfile("beltrami", 1.0, 1.0)
    qn = QuantumNumbers(1, 0)
    E = math.sqrt(3)
    spec = WavefunctionSpec(prof, qn, TAU_MINUS, 2.0, energy=E)
    assert psi1_beltrami(spec, -1.0) != psi1_beltrami(spec, -1.0, root_sign=1)
    assert ode_residual(prof, E, 2.0, qn, TAU_MINUS, Eigenfunction(spec)).passed


def test_lower_component():
    prof = MeridianProfile("hyperbolic", 1.0, 1.0)
    qn = QuantumNumbers(1, 0)
    cls = ansatz_classes(prof.family, TAU_MINUS, qn.m, 1.0, 1.0)[0]
    spec = WavefunctionSpec(prof, qn, TAU_MINUS, 0.0, cls)
    psi = Eigenfunction(spec)
    E = spec.E
    # psi2 = -(psi1' + g psi1) / (E + M) with g = (1/2 + tau) R'/R - m/R = -m / R for tau = -1/2
    u = 0.2
    f0, f1 = psi.derivatives(u, 1)
    R = math.cosh(u)
    expected = -(f1 - qn.m / R * f0) / E
    assert abs(psi2_from_psi1(prof, E, 0.0, qn, TAU_MINUS, psi, u) - expected) < 1e-15
    # plain callables fall back to finite differences
    approx = psi2_from_psi1(prof, E, 0.0, qn, TAU_MINUS, lambda t: psi(t), u)
    assert abs(approx - expected) < 1e-8
    with pytest.raises(MassShellSingularity):
        LowerComponent(prof, 0.0, 0.0, qn, TAU_MINUS, psi)
    with pytest.raises(ValueError):
        LowerComponent(prof, E, 0.0, qn, TAU_MINUS, psi).derivatives(u, 2)
