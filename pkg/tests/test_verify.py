"""Residual reports, the termination oracle and the verification suites."""
import json
import math

import pytest
from hypothesis import given, strategies as st

from wormhole_dirac.errors import DomainError, NoTermination
from wormhole_dirac.geometry import Family, MeridianProfile, embedding_domain
from wormhole_dirac.spectra import (TAU_MINUS, TAU_PLUS, Eigenfunction, LowerComponent,
                                    QuantumNumbers, WavefunctionSpec, ansatz_classes,
                                    energy_elliptic, energy_hyperbolic)
from wormhole_dirac.verify import (_pmap, check_b_independence, check_beltrami, check_curvature,
                                   check_nu_instance, coupled_residual, curvature_scan,
                                   ode_residual, run_suite, sample_grid, termination_oracle)


def hyperbolic_state(n=1, ell=0, M=1.0, index=2, sec=TAU_MINUS):
    prof = MeridianProfile("hyperbolic", 1.0, 1.0)
    qn = QuantumNumbers(n, ell)
    cls = ansatz_classes(prof.family, sec, qn.m, 1.0, 1.0)[index - 1]
    spec = WavefunctionSpec(prof, qn, sec, M, cls)
    return prof, qn, spec, Eigenfunction(spec)


# ---------------------------------------------------------------- reports

def test_report_fields():
    prof, qn, spec, psi = hyperbolic_state()
    rep = ode_residual(prof, spec.E, 1.0, qn, TAU_MINUS, psi)
    d = rep.to_dict()
    assert set(d) == {"max_abs", "rms", "sample_count", "scale", "verdict", "annotations"}
    assert d["sample_count"] == 50 and d["verdict"] == "pass"
    assert 0 <= d["rms"] <= d["max_abs"]
    assert json.loads(rep.to_json()) == d


def test_degenerate_function_fails():
    prof, qn, spec, _ = hyperbolic_state()
    rep = ode_residual(prof, spec.E, 1.0, qn, TAU_MINUS, lambda u: 0.0)
    assert rep.verdict == "fail"
    assert any("DegenerateFunction" in a for a in rep.annotations)


def test_perturbed_energy_fails():
    prof, qn, spec, psi = hyperbolic_state()
    E = spec.E
    assert ode_residual(prof, E, 1.0, qn, TAU_MINUS, psi).passed
    assert not ode_residual(prof, E * (1 + 1e-6), 1.0, qn, TAU_MINUS, psi).passed


def test_coupled_residual():
    prof, qn, spec, psi = hyperbolic_state()
    psi2 = LowerComponent(prof, spec.E, 1.0, qn, TAU_MINUS, psi)
    assert coupled_residual(prof, spec.E, 1.0, qn, TAU_MINUS, psi, psi2).passed
    # the lower component of the wrong energy branch breaks the first equation
    bad = LowerComponent(prof, -spec.E, 1.0, qn, TAU_MINUS, psi)
    assert not coupled_residual(prof, spec.E, 1.0, qn, TAU_MINUS, psi, bad).passed


def test_finite_difference_fallback():
    prof, qn, spec, psi = hyperbolic_state(M=0.0)
    rep = ode_residual(prof, spec.E, 0.0, qn, TAU_MINUS, lambda u: psi(u), tol=1e-6)
    assert rep.passed


def test_sample_grid():
    prof = MeridianProfile("hyperbolic", 1.0, 1.0)
    dom = embedding_domain(prof)
    g = sample_grid(prof, 50)
    assert len(g) == 50 and dom.lo < g[0] < g[-1] < dom.hi
    b = sample_grid(MeridianProfile("beltrami", 1.0, 1.0), 10)
    assert b[0] > math.log(1e-2) and b[-1] < 0
    with pytest.raises(DomainError):
        sample_grid(prof, 1)


@given(st.sampled_from(list(Family)), st.floats(0.1, 10), st.floats(0.1, 10))
def test_curvature_scan(fam, r, scale):
    if fam is Family.ELLIPTIC:
        scale = min(scale, 0.9 * r)
    assert curvature_scan(MeridianProfile(fam, r, scale)).passed


# ---------------------------------------------------------------- oracle

@given(st.sampled_from(["hyperbolic", "elliptic"]), st.sampled_from([TAU_MINUS, TAU_PLUS]),
       st.integers(0, 8), st.sampled_from([0, -1, 1, 2]), st.floats(0, 2), st.floats(0.3, 3),
       st.floats(0.1, 0.9))
def test_oracle_matches_closed_form(fam, sec, n, ell, M, r, frac):
    scale = frac * r
    qn = QuantumNumbers(n, ell)
    fn = energy_hyperbolic if fam == "hyperbolic" else energy_elliptic
    for cls in ansatz_classes(fam, sec, qn.m, r, scale):
        try:
            k2 = termination_oracle(fam, cls, n, qn.m, M, r, scale)
        except NoTermination:
            # only where c of 2F1(-n, b; c; z) is a non-positive integer and no polynomial exists
            c = cls.hyp_params(n)[1]
            assert abs(c.imag) < 1e-9 and c.real < 0.5 and abs(c.real - round(c.real)) < 1e-9
            continue
        E = fn(qn, cls, M, r, scale)[0].value
        pub = E * E - M * M
        assert abs(k2 - pub) <= 1e-10 * max(abs(pub), 1.0 / (r * r))


def test_oracle_rejects_wrong_exponents():
    cls = ansatz_classes("hyperbolic", TAU_MINUS, 0.5, 1.0, 1.0)[0]
    with pytest.raises(NoTermination):
        termination_oracle("hyperbolic", cls, 1, 1.5, 0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        termination_oracle("beltrami", cls, 1, 0.5, 0.0, 1.0, 1.0)


# ---------------------------------------------------------------- suites

def test_threads(monkeypatch):
    monkeypatch.setenv("WORMHOLE_DIRAC_THREADS", "3")
    assert _pmap(lambda x: x * x, range(10)) == [x * x for x in range(10)]
    for bad in ("0", "-2", "many"):
        monkeypatch.setenv("WORMHOLE_DIRAC_THREADS", bad)
        with pytest.raises(DomainError):
            _pmap(abs, [1])


def test_small_checks():
    assert check_curvature().passed
    assert check_nu_instance().passed
    assert check_b_independence().passed


def test_run_suite():
    rep = run_suite("curvature")
    assert rep["passed"] and rep["checks"][0]["name"] == "curvature"
    assert not run_suite("curvature", tol=1e-30)["passed"]
    with pytest.raises(DomainError):
        run_suite("nonsense")


@pytest.fixture(scope="module")
def beltrami():
    return check_beltrami()


def test_beltrami_record(beltrami):
    assert beltrami.passed
    assert len(beltrami.records) == beltrami.summary["points"] == 192
    keys = {"n", "ell", "M", "r", "b", "tau", "E_nu", "E_paper", "nu_passes", "paper_passes",
            "passing", "energies_coincide"}
    for rec in beltrami.records:
        assert keys <= set(rec)
        assert rec["nu_passes"]
        assert rec["passing"]
    json.dumps(beltrami.to_dict())


def test_beltrami_exactly_one_among_distinct(beltrami):
    # where the two energies differ, only one of them solves the equation
    for rec in beltrami.records:
        if rec["energies_coincide"]:
            assert rec["passing"] == ["nu", "paper"]
        else:
            assert rec["passing"] == ["nu"]
