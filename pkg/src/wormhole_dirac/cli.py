"""Command-line front end.

Subcommands: mesh, spectrum, wavefunction, verify, nu. Every subcommand checks
its arguments before computing and writes its output file atomically, so an
invalid invocation never leaves a partial file behind.

Exit codes: 0 success, 1 invalid input, 2 computation error, 3 verification
failure.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from typing import Optional, Sequence

from .errors import MassShellSingularity, WormholeError
from .geometry import (Family, MeridianProfile, atomic_write, build_mesh, export_mesh,
                       fmt_shortest)
from .nu import BeltramiNuState, NuProblem, nu_derive, nu_energy_residual
from .spectra import (Eigenfunction, LowerComponent, LsvCoupling, QuantumNumbers,
                      WavefunctionSpec, ansatz_classes, energy_beltrami_nu,
                      energy_beltrami_paper, energy_elliptic, energy_hyperbolic, sector_of)
from .verify import SUITES, run_suite, sample_grid

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_COMPUTE = 2
EXIT_VERIFY = 3


class UsageError(ValueError):
    """Invalid combination of command-line flags."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default; usage errors are input errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- shared helpers

def _add_profile_args(p, scale_required=True):
    p.add_argument("--family", required=True,
                   help="hyperbolic, elliptic, beltrami or spherical_cosine")
    p.add_argument("--r", type=float, required=True, help="curvature radius r > 0")
    p.add_argument("--scale", type=float, required=False,
                   help="profile scale (b, or d for the spherical cosine)")
    p.add_argument("--phase", type=float, default=0.0, help="spherical cosine phase")
    if not scale_required:
        p.add_argument("--angle", type=float, default=None,
                       help="elliptic only: b = r cos(angle), instead of --scale")


def _add_coupling_args(p):
    p.add_argument("--tau", type=float, default=None, help="coupling tau, -0.5 or 0.5")
    # tau = -i lambda kdb21 b0 is real only for a complex product, so these accept complex values
    p.add_argument("--lambda", dest="lam", type=_complex, default=None)
    p.add_argument("--kdb21", type=_complex, default=None)
    p.add_argument("--b0", type=_complex, default=None)


def _profile(args) -> MeridianProfile:
    angle = getattr(args, "angle", None)
    if angle is not None:
        if args.scale is not None:
            raise UsageError("give either --scale or --angle, not both")
        if Family.parse(args.family) is not Family.ELLIPTIC:
            raise UsageError("--angle applies to the elliptic family only")
        return MeridianProfile.elliptic_from_angle(angle, args.r)
    if args.scale is None:
        raise UsageError("--scale is required")
    return MeridianProfile(args.family, args.r, args.scale, args.phase)


def _tau(args) -> float:
    triple = (args.lam, args.kdb21, args.b0)
    given = [x is not None for x in triple]
    if args.tau is not None:
        if any(given):
            raise UsageError("give either --tau or --lambda/--kdb21/--b0, not both")
        return sector_of(args.tau)
    if not all(given):
        raise UsageError("a coupling is required: --tau, or all of --lambda --kdb21 --b0")
    return sector_of(LsvCoupling(*triple))


def _output_target(path: str) -> Optional[str]:
    if path in (None, "-"):
        return None
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        raise UsageError(f"output directory {directory!r} does not exist")
    return path


def _emit(path: Optional[str], data: bytes) -> None:
    if path is None:
        sys.stdout.buffer.write(data) if hasattr(sys.stdout, "buffer") else sys.stdout.write(data.decode())
        sys.stdout.flush()
    else:
        atomic_write(path, data)


def _cplx(z) -> list:
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


def _csv(header, rows) -> bytes:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(c if isinstance(c, str) else fmt_shortest(c) for c in row) + "\n")
    return buf.getvalue().encode("utf-8")


def _nonneg_int(text: str) -> int:
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if val < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return val


def _int_list(text: str) -> list:
    try:
        vals = [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


# ---------------------------------------------------------------- subcommands

def cmd_mesh(args) -> int:
    prof = _profile(args)
    out = _output_target(args.output)
    if args.format not in ("obj", "csv"):
        raise UsageError("--format must be obj or csv")
    mesh = build_mesh(prof, args.nu, args.nv, args.u_min, args.u_max, cutoff=args.cutoff)
    _emit(out, export_mesh(mesh, args.format, meta=not args.no_meta))
    return EXIT_OK


SPECTRUM_HEADER = ("family", "tau", "class", "n", "ell", "m",
                   "Re(E+)", "Im(E+)", "Re(E−)", "Im(E−)")


def _class_indices(text: str) -> list:
    if text == "all":
        return [1, 2, 3, 4]
    if text in ("1", "2", "3", "4"):
        return [int(text)]
    raise UsageError("--class must be 1, 2, 3, 4 or all")


def cmd_spectrum(args) -> int:
    prof = _profile(args)
    fam = prof.family
    tau = _tau(args)
    out = _output_target(args.output)
    if args.format not in ("csv", "json"):
        raise UsageError("--format must be csv or json")
    if fam is Family.SPHERICAL_COSINE:
        raise UsageError("no spectrum is available on the spherical cosine family")
    if fam is Family.BELTRAMI and args.cls != "all":
        raise UsageError("the Beltrami profile has no ansatz classes; use --class all")
    indices = _class_indices(args.cls)
    for ell in args.ell_list:
        QuantumNumbers(0, ell)

    rows = []
    for ell in args.ell_list:
        for n in range(args.n_max + 1):
            qn = QuantumNumbers(n, ell)
            if fam is Family.BELTRAMI:
                pairs = [("paper", energy_beltrami_paper(qn, args.M, prof.r, prof.scale)),
                         ("nu", energy_beltrami_nu(qn, args.M, prof.r, prof.scale, tau))]
            else:
                fn = energy_hyperbolic if fam is Family.HYPERBOLIC else energy_elliptic
                classes = ansatz_classes(fam, tau, qn.m, prof.r, prof.scale)
                pairs = [(str(i), fn(qn, classes[i - 1], args.M, prof.r, prof.scale)) for i in indices]
            for label, (ep, em) in pairs:
                rows.append({"family": fam.value, "tau": tau, "class": label, "n": n,
                             "ell": ell, "m": qn.m, "E+": ep.value, "E-": em.value,
                             "annotations": list(ep.annotations)})
    if args.format == "csv":
        data = _csv(SPECTRUM_HEADER, [
            (row["family"], row["tau"], row["class"], float(row["n"]), float(row["ell"]), row["m"],
             row["E+"].real, row["E+"].imag, row["E-"].real, row["E-"].imag) for row in rows])
    else:
        for row in rows:
            row["E+"], row["E-"] = _cplx(row["E+"]), _cplx(row["E-"])
        data = (json.dumps({"rows": rows}, indent=2) + "\n").encode("utf-8")
    _emit(out, data)
    return EXIT_OK


def cmd_wavefunction(args) -> int:
    prof = _profile(args)
    fam = prof.family
    tau = _tau(args)
    out = _output_target(args.output)
    qn = QuantumNumbers(args.n, args.ell)
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    if fam is Family.SPHERICAL_COSINE:
        raise UsageError("no eigenfunctions are available on the spherical cosine family")
    if fam is Family.BELTRAMI:
        if args.cls is not None:
            raise UsageError("the Beltrami profile has no ansatz classes; omit --class")
        level = energy_beltrami_nu(qn, args.M, prof.r, prof.scale, tau)[0]
        E = level.value
        psi1 = BeltramiNuState(E, args.M, prof.r, prof.scale, qn.m, tau, qn.n, level.nu_branch)
    else:
        if args.cls is None:
            raise UsageError("--class is required for this family")
        index = _class_indices(args.cls)
        if len(index) != 1:
            raise UsageError("--class must name a single class")
        cls = ansatz_classes(fam, tau, qn.m, prof.r, prof.scale)[index[0] - 1]
        spec = WavefunctionSpec(prof, qn, tau, args.M, cls)
        E = spec.E
        psi1 = Eigenfunction(spec)
    if abs(E + args.M) < 1e-14:
        raise MassShellSingularity("E + M = 0 for this state: the lower component is undefined")
    psi2 = LowerComponent(prof, E, args.M, qn, tau, psi1)
    rows = []
    for u in sample_grid(prof, args.samples):
        a = complex(psi1(float(u)))
        b = complex(psi2(float(u)))
        if not all(math.isfinite(x) for x in (a.real, a.imag, b.real, b.imag)):
            raise ArithmeticError(f"non-finite wavefunction value at u = {u}")
        rows.append((float(u), a.real, a.imag, b.real, b.imag))
    _emit(out, _csv(("u", "Re(psi1)", "Im(psi1)", "Re(psi2)", "Im(psi2)"), rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}")
    if args.tol is not None and not args.tol > 0:
        raise UsageError("--tol must be positive")
    report = run_suite(args.suite, args.tol)
    text = json.dumps(report, indent=None if args.compact else 2, default=str)
    sys.stdout.write(text + "\n")
    sys.stdout.flush()
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def cmd_nu(args) -> int:
    if args.branch not in (1, -1) or args.branch9 not in (1, -1):
        raise UsageError("--branch and --branch9 must be 1 or -1")
    p = NuProblem(args.d1, args.d2, args.d3, args.z1, args.z2, args.z3)
    d = nu_derive(p, args.branch, args.branch9)
    res = nu_energy_residual(p, args.n, args.branch, args.branch9, args.form)
    out = {f"Delta{k[1:]}": _cplx(v) for k, v in d.as_dict().items()}
    out["residual"] = _cplx(res)
    out["abs_residual"] = abs(res)
    sys.stdout.write(json.dumps(out, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wormhole-dirac",
                     description="Dirac spectra and geometry of constant-curvature wormholes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mesh", help="surface mesh as OBJ or CSV")
    _add_profile_args(p, scale_required=False)
    p.add_argument("--nu", type=int, required=True, help="samples along the meridian")
    p.add_argument("--nv", type=int, required=True, help="samples around the axis")
    p.add_argument("--u-min", type=float, default=None)
    p.add_argument("--u-max", type=float, default=None)
    p.add_argument("--cutoff", type=float, default=1e-3,
                   help="Beltrami truncation: lowest R as a fraction of r")
    p.add_argument("--format", default="obj", choices=("obj", "csv"))
    p.add_argument("--no-meta", action="store_true", help="omit OBJ comment metadata")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_mesh)

    p = sub.add_parser("spectrum", help="energy table")
    _add_profile_args(p, scale_required=False)
    _add_coupling_args(p)
    p.add_argument("--class", dest="cls", default="all")
    p.add_argument("--n-max", type=_nonneg_int, required=True)
    p.add_argument("--ell-list", type=_int_list, required=True, help="comma-separated ell values")
    p.add_argument("--M", type=float, required=True, help="fermion mass")
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("wavefunction", help="sampled spinor components")
    _add_profile_args(p, scale_required=False)
    _add_coupling_args(p)
    p.add_argument("--n", type=_nonneg_int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--class", dest="cls", default=None)
    p.add_argument("--M", type=float, default=0.0, help="fermion mass")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="all")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--compact", action="store_true", help="single-line JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("nu", help="derived NU parameters and condition residual")
    for name in ("d1", "d2", "d3", "z1", "z2", "z3"):
        p.add_argument(f"--{name}", type=_complex, required=True)
    p.add_argument("--n", type=_nonneg_int, required=True)
    p.add_argument("--branch", type=int, default=1, help="sign of sqrt(Delta8)")
    p.add_argument("--branch9", type=int, default=1, help="sign of sqrt(Delta9)")
    p.add_argument("--form", default="corrected", choices=("corrected", "printed"))
    p.set_defaults(func=cmd_nu)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"wormhole-dirac: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (WormholeError, ArithmeticError, OSError, RuntimeError) as exc:
        print(f"wormhole-dirac: computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
