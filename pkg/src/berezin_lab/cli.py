"""Command-line front end.

Exit codes are a stable contract:
  0  success
  1  usage error (bad flags, bad theta, samples < 1, ...)
  2  invariant violation / failed check
  3  input file missing or unparseable
  4  input matrix not unitary
  5  matrix has (near-)zero entries where nonzero ones are required
"""

from __future__ import annotations

import argparse
import cmath
import csv
import json
import sys

import numpy as np

from .errors import (
    BerezinLabError,
    NotUnitaryError,
    ThetaDegenerateError,
    ZeroEntryError,
)
from .matrices import Unitary, haar_random_unitary, load_matrix, validate_unitary
from .spectral import spectrum
from .submersion import default_workers, jacobian_report, submersion_sweep
from .symbols import (
    WeightedSpace,
    berezin_from_composition,
    build_berezin,
    c_symbol_to_operator,
    d_symbol_to_operator,
)
from .symmetry import (
    check_permutation_equivariance,
    check_shift_commutation,
    check_weyl_relations,
    fourier_eigenfunction_check,
    fourier_matrix,
    symmetric_family_matrix,
    verify_symmetric_family_spectrum,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVARIANT = 2
EXIT_IO = 3
EXIT_NOT_UNITARY = 4
EXIT_ZERO_ENTRY = 5


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract reserves 2
    # for invariant violations, so remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def parse_theta(text: str) -> complex:
    """"angle:x" gives exp(ix) (unit modulus by construction); "re,im" is
    accepted when within 1e-8 of the unit circle and normalized onto it."""
    if text.startswith("angle:"):
        return cmath.exp(1j * float(text[len("angle:"):]))
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"theta must be 're,im' or 'angle:<radians>', got {text!r}")
    z = complex(float(parts[0]), float(parts[1]))
    if abs(abs(z) - 1.0) > 1e-8:
        raise ValueError(f"|theta| = {abs(z):.6g} is not within 1e-8 of 1")
    return z / abs(z)


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        print(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2)


def _load_input_matrix(args) -> Unitary:
    if args.matrix_file:
        m = load_matrix(args.matrix_file)
        return validate_unitary(m, tol=args.tol)
    if args.family == "fourier":
        return fourier_matrix(args.n)
    if args.family == "example2":
        return symmetric_family_matrix(args.n, parse_theta(args.theta))
    if args.family == "haar":
        return haar_random_unitary(args.n, args.seed)
    raise ValueError("need --matrix-file or --family {fourier, example2, haar}")


def cmd_spectrum(args) -> int:
    u = _load_input_matrix(args)
    if not u.nonzero_entries:
        raise ZeroEntryError("spectrum needs a matrix with nonzero entries")
    space = WeightedSpace.from_unitary(u)
    summary = spectrum(build_berezin(u), space, tol=args.tol)
    try:
        summary.check()
    except ValueError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        _emit(_json(summary.to_dict()), args.output)
        return EXIT_INVARIANT

    if args.format == "csv":
        reps = np.array([rep for rep, _ in summary.clusters])
        rows = ["re,im,modulus,cluster_id"]
        for z in summary.eigenvalues:
            cid = int(np.argmin(np.abs(reps - z)))
            rows.append(f"{z.real:.17g},{z.imag:.17g},{abs(z):.17g},{cid}")
        _emit("\n".join(rows), args.output)
    elif args.format == "text":
        lines = [f"n = {summary.n}", f"multiplicity of 1 = {summary.multiplicity_of_one}"]
        for rep, mult in summary.clusters:
            lines.append(f"  {rep.real:+.12f}{rep.imag:+.12f}i  x{mult}")
        _emit("\n".join(lines), args.output)
    else:
        _emit(_json(summary.to_dict()), args.output)
    return EXIT_OK


def cmd_theorem_check(args) -> int:
    u = _load_input_matrix(args)
    report = jacobian_report(u)
    _emit(_json(report.to_dict()), args.output)
    print(
        f"kernel_dim = {report.kernel_dim}, "
        f"berezin multiplicity of 1 = {report.berezin_multiplicity_of_one}, "
        f"rank = {report.rank}",
        file=sys.stderr,
    )
    return EXIT_OK if report.theorem_holds else EXIT_INVARIANT


def cmd_sweep(args) -> int:
    stream_writer = None
    stream_fh = None
    if args.per_sample:
        stream_fh = open(args.per_sample, "w", newline="")
        stream_writer = csv.writer(stream_fh)
        stream_writer.writerow(
            ["sample", "skipped", "rank", "kernel_dim", "berezin_multiplicity_of_one",
             "theorem_holds", "is_submersion"]
        )

    def on_sample(i, report):
        if stream_writer is None:
            return
        if report is None:
            stream_writer.writerow([i, 1, "", "", "", "", ""])
        else:
            stream_writer.writerow(
                [i, 0, report.rank, report.kernel_dim,
                 report.berezin_multiplicity_of_one,
                 int(report.theorem_holds), int(report.is_submersion)]
            )
        stream_fh.flush()

    try:
        report = submersion_sweep(
            args.n, args.samples, args.seed,
            workers=default_workers(), on_sample=on_sample,
        )
    finally:
        if stream_fh:
            stream_fh.close()
    _emit(_json(report.to_dict()), args.output)
    return EXIT_OK if report.theorem_violations == 0 else EXIT_INVARIANT


def _verify_checks(ns, theta_text, tol, seed):
    """Yield (name, n, deviation-or-None, limit, status) rows for the full
    property suite."""
    rng = np.random.default_rng(seed)

    def limit(default):
        return tol if tol is not None else default

    for n in ns:
        u = haar_random_unitary(n, rng.integers(2**63))
        space = WeightedSpace.from_unitary(u)
        dev = 0.0
        cdev = 0.0
        for _ in range(10):
            f = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            cf, cg = c_symbol_to_operator(u, f), c_symbol_to_operator(u, g)
            df, dg = d_symbol_to_operator(u, f), d_symbol_to_operator(u, g)
            hs_c = np.trace(cf @ cg.conj().T)
            hs_d = np.trace(df @ dg.conj().T)
            dev = max(dev, abs(hs_c - space.inner(f, g)), abs(hs_d - space.inner(f, g)))
            cdev = max(cdev, np.max(np.abs(cf.conj().T - d_symbol_to_operator(u, np.conj(f)))))
        yield "isometry", n, dev, limit(1e-10)
        yield "conjugation", n, cdev, limit(1e-12)

        consistency = np.max(np.abs(build_berezin(u).matrix - berezin_from_composition(u)))
        yield "berezin-consistency", n, float(consistency), limit(1e-9)

        yield "weyl", n, check_weyl_relations(n), limit(1e-12)
        char = fourier_eigenfunction_check(n)
        yield "fourier-eigenfunctions", n, char.max_residual, limit(1e-9)
        yield "fourier-shifts", n, check_shift_commutation(n, 3, rng.integers(2**63)), limit(1e-10)

        if n >= 3:
            theta = parse_theta(theta_text)
            equi = check_permutation_equivariance(n, theta, 10, rng.integers(2**63))
            yield "permutation-equivariance", n, equi, limit(1e-10)
            table = verify_symmetric_family_spectrum(n, theta)
            yield "spectrum-table", n, (0.0 if table.all_match else 1.0), 0.5


def cmd_verify_all(args) -> int:
    ns = [args.n] if args.n else [2, 3, 4, 5]
    rows = []
    failures = 0
    degenerate = 0
    for n in ns:
        try:
            for name, nn, dev, lim in _verify_checks([n], args.theta, args.tol_override, args.seed):
                ok = dev <= lim
                failures += not ok
                rows.append((name, nn, dev, lim, "pass" if ok else "FAIL"))
        except ThetaDegenerateError as exc:
            degenerate += 1
            rows.append(("example2-checks", n, float("nan"), float("nan"), f"theta degenerate: {exc}"))

    width = max(len(r[0]) for r in rows)
    lines = [f"{'check':<{width}}  n  max deviation   limit        status"]
    for name, n, dev, lim, status in rows:
        lines.append(f"{name:<{width}}  {n}  {dev:<14.3e}  {lim:<11.1e}  {status}")
    if args.format == "json":
        _emit(_json([
            {"check": r[0], "n": r[1], "deviation": None if np.isnan(r[2]) else r[2],
             "limit": None if np.isnan(r[3]) else r[3], "status": r[4]}
            for r in rows
        ]), args.output)
    else:
        _emit("\n".join(lines), args.output)
    return EXIT_OK if failures == 0 and degenerate == 0 else EXIT_INVARIANT


def build_parser() -> _Parser:
    parser = _Parser(prog="berezin-lab", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_family=True):
        p.add_argument("--n", type=int, default=3)
        p.add_argument("--theta", default="0,1", help="'re,im' or 'angle:<radians>'")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--format", choices=["json", "csv", "text"], default="json")
        p.add_argument("--output", default=None, help="write report here instead of stdout")
        if with_family:
            p.add_argument("--family", choices=["fourier", "example2", "haar"], default=None)
            p.add_argument("--matrix-file", default=None)

    p = sub.add_parser("spectrum", help="Berezin spectrum of a matrix or family")
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("theorem-check", help="Jacobian kernel vs Berezin multiplicity")
    common(p)
    p.set_defaults(func=cmd_theorem_check)

    p = sub.add_parser("sweep", help="Haar sweep of the kernel/multiplicity check")
    common(p, with_family=False)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--per-sample", default=None, help="stream per-sample CSV here")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify-all", help="run the full property suite")
    common(p, with_family=False)
    p.add_argument("--tol-override", type=float, default=None,
                   help="replace every check's tolerance (diagnostic)")
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", 1) < 1:
        parser.error("samples must be >= 1")
    if args.n < 1:
        parser.error("n must be >= 1")
    if args.tol <= 0:
        parser.error("tol must be positive")
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (json.JSONDecodeError, KeyError) as exc:
        print(f"error: cannot parse input file: {exc}", file=sys.stderr)
        return EXIT_IO
    except NotUnitaryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_UNITARY
    except ZeroEntryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ZERO_ENTRY
    except (ValueError, BerezinLabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
