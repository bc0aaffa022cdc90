"""Dirac fermions on constant-curvature wormholes with a Lorentz-violating coupling.

Modules: ``geometry`` (meridian profiles and embeddings), ``specfun``
(special functions), ``spectra`` (energies and eigenfunctions), ``nu``
(Nikiforov-Uvarov solver), ``verify`` (residual and termination oracles)
and ``cli``.
"""
from .errors import *  # noqa: F401,F403
from .geometry import (Family, Interval, MeridianProfile, SurfaceMesh, build_mesh,
                       discrete_curvature, embed, embedding_domain, eval_meridian,
                       export_mesh, gaussian_curvature, magnetic_profile, z_closed_form,
                       z_profile)
from .nu import (NuDerived, NuProblem, EnergySearch, beltrami_problem, nu_derive,
                 nu_energy_residual, nu_equation_residual, nu_solve_energy, nu_wavefunction)
from .spectra import (TAU_MINUS, TAU_PLUS, EnergyLevel, Eigenfunction, LsvCoupling,
                      QuantumNumbers, SolutionClass, WavefunctionSpec, ansatz_classes,
                      energy_beltrami_nu, energy_beltrami_paper, energy_elliptic,
                      energy_hyperbolic, psi1_beltrami, psi1_elliptic, psi1_hyperbolic,
                      psi2_from_psi1, sector_of, solution_class, tau_from_coupling)
from .verify import (ResidualReport, coupled_residual, curvature_scan, ode_residual,
                     run_suite, termination_oracle)

__version__ = "0.1.0"
