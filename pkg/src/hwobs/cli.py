"""Command-line front end (``hwobs``).

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 internal
inconsistency.  ``--format doc`` prints exactly one JSON document on stdout;
the default human tables use fixed-width, locale-independent formatting.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys

import numpy as np

from . import demos, golden
from . import io as hio
from .acbound import evaluate_witness
from .bloch import decompose, reconstruct
from .commutation import classify_pair, find_anticommuting_triples, max_anticommuting_set_size
from .errors import HWError, InconsistencyError, ParseError, ValidationError
from .hw_basis import PhasePoint, full_basis, hw_observable, points, q_max, spectrum, spectrum_magnitudes
from .ramsey import estimate, estimate_bloch, exact_probabilities, sample

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _point(text: str) -> tuple[int, int]:
    try:
        l, m = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected L,M (two integers), got {text!r}")
    return l, m


def _dim(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dimension must be an integer, got {text!r}")
    if d < 2:
        raise argparse.ArgumentTypeError(f"dimension must be >= 2, got {d}")
    return d


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def default_seed() -> int:
    env = os.environ.get("HWOBS_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"HWOBS_SEED must be an integer, got {env!r}")


def _fmt_complex(z: complex) -> str:
    return f"{z.real:+.6f}{z.imag:+.6f}i"


def _matrix_table(m: np.ndarray) -> str:
    return "\n".join("  ".join(_fmt_complex(z) for z in row) for row in m)


# -- subcommands -------------------------------------------------------------

def cmd_basis(args, out) -> int:
    d = args.dim
    if args.golden:
        if d not in golden.TABLES:
            raise UsageError(f"--golden is available for d in {sorted(golden.TABLES)}, got {d}")
        bad = golden.compare(d)
        for (l, m) in golden.reference_points(d):
            dev = next((v for p, v in bad if p == (l, m)), None)
            out.write(f"Q({l},{m})  {'ok' if dev is None else f'MISMATCH max dev {dev:.3e}'}\n")
        out.write(f"golden d={d}: {len(golden.TABLES[d]) - len(bad)}/{len(golden.TABLES[d])} match\n")
        return EXIT_OK if not bad else EXIT_VALIDATION
    if args.format == "doc":
        if args.point is None:
            raise UsageError("--format doc needs --point L,M (one matrix per document)")
        p = PhasePoint(d, *args.point)
        out.write(hio.dumps(hw_observable(p).matrix, {"d": str(d), "point": f"{p.l},{p.m}"}))
        return EXIT_OK
    obs = [hw_observable(PhasePoint(d, *args.point))] if args.point else full_basis(d)
    for q in obs:
        out.write(f"Q{q.point}  d={d}\n{_matrix_table(q.matrix)}\n\n")
    return EXIT_OK


def cmd_decompose(args, out) -> int:
    rho = hio.load_state(args.state)
    v = decompose(rho)
    if args.format == "doc":
        out.write(hio.dumps(v))
    else:
        out.write(hio.bloch_to_csv(v))
    return EXIT_OK


def cmd_reconstruct(args, out) -> int:
    v = hio.read(args.bloch, hio.BLOCH)
    rho = reconstruct(v)
    if args.format == "doc":
        out.write(hio.dumps(rho))
    else:
        out.write(f"reconstructed state d={v.d}  min eigenvalue {rho.min_eigenvalue():+.3e}\n")
        out.write(_matrix_table(rho.matrix) + "\n")
    return EXIT_OK


def cmd_spectrum(args, out) -> int:
    d = args.dim
    formula = np.sort(spectrum_magnitudes(d))
    out.write(f"d={d}  q_max={q_max(d):.9f}  q_max^2={q_max(d) ** 2:.9f}\n")
    out.write("closed-form magnitudes sqrt(1+sin(4 pi n/d)), n=0..d-1:\n  "
              + " ".join(f"{x:.6f}" for x in formula) + "\n")
    out.write(f"{'point':<8} {'max|eig|':>10}  eigenvalues\n")
    for p in points(d, include_origin=False):
        ev = spectrum(hw_observable(p))
        out.write(f"{str(p):<8} {np.max(np.abs(ev)):10.6f}  " + " ".join(f"{x:+.6f}" for x in ev) + "\n")
    return EXIT_OK


def cmd_anticommute(args, out) -> int:
    d = args.dim
    pts = points(d, include_origin=False)
    out.write(f"{'p':<8} {'q':<8} {'relation':<14} {'|a x b|':>10} {'residual':>10}\n")
    for a_i, a in enumerate(pts):
        for b in pts[a_i + 1:]:
            rel = classify_pair(a, b)
            out.write(f"{str(a):<8} {str(b):<8} {rel.kind.value:<14} {rel.cross:10.6f} {rel.residual:10.3e}\n")
    triples = find_anticommuting_triples(d)
    out.write(f"\nanticommuting triples: {len(triples)}\n")
    for t in triples:
        out.write("  " + " ".join(str(p) for p in t) + "\n")
    if args.max_set:
        out.write(f"max anticommuting set size: {max_anticommuting_set_size(d)}\n")
    return EXIT_OK


def cmd_witness(args, out) -> int:
    rho = hio.load_state(args.state)
    spec = hio.read(args.spec, hio.WITNESS)
    rep = evaluate_witness(rho, spec)
    if args.format == "doc":
        out.write(hio.dumps(rep))
    elif args.csv:
        out.write(hio.reports_to_csv([rep]))
    else:
        out.write(f"witness        {spec.name}\n")
        out.write(f"value          {rep.value:.9f}\n")
        out.write(f"bound          {rep.bound:.9f} ({spec.bound_kind})\n")
        out.write(f"violated       {'yes' if rep.violated else 'no'}\n")
        out.write(f"p_crit         {rep.noise_threshold:.9f}\n")
        out.write(f"noise allowed  {rep.tolerable_noise:.9f}\n")
    return EXIT_OK


def cmd_demo(args, out) -> int:
    res = demos.run(args.name)
    if args.format == "doc":
        out.write(hio.dumps(res.report))
    else:
        out.write(demos.format_result(res))
    return EXIT_OK if res.ok else EXIT_VALIDATION


def cmd_ramsey(args, out) -> int:
    rho = hio.load_state(args.state)
    seed = args.seed if args.seed is not None else default_seed()
    if args.mode == "tomo":
        v = estimate_bloch(rho, args.shots, seed)
        if args.format == "doc":
            out.write(hio.dumps(v, {"shots_per_point": str(args.shots), "seed": str(seed)}))
        else:
            exact = decompose(rho)
            out.write(f"{'point':<8} {'estimate':>12} {'exact':>12}\n")
            for p in points(rho.d, include_origin=False):
                out.write(f"{str(p):<8} {v[p]:12.6f} {exact[p]:12.6f}\n")
            err = np.max(np.abs(reconstruct(v).matrix - rho.matrix))
            out.write(f"max |rho_est - rho| = {err:.6f}\n")
        return EXIT_OK
    if args.point is None:
        raise UsageError("ramsey sampling needs --point L,M")
    p = PhasePoint(rho.d, *args.point)
    rec = sample(rho, p, args.shots, seed)
    if args.format == "doc":
        out.write(hio.dumps(rec))
    else:
        p_up, p_dn = exact_probabilities(rho, p)
        out.write(f"point {p}  shots {rec.shots}  seed {seed}\n")
        out.write(f"count_up {rec.count_up}  count_down {rec.count_down}\n")
        out.write(f"estimate <Q> = {estimate(rec):.6f}   exact <Q> = {np.sqrt(2) * (p_up - p_dn):.6f}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hwobs", description="Heisenberg-Weyl observable toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("human", "doc"), default="human")

    p = sub.add_parser("basis", help="dump HW observable matrices")
    p.add_argument("--dim", type=_dim, required=True)
    p.add_argument("--point", type=_point)
    p.add_argument("--golden", action="store_true", help="compare d=3,4 against reference tables")
    fmt(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("decompose", help="Bloch vector of a state")
    p.add_argument("--state", required=True)
    fmt(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reconstruct", help="state from a Bloch vector")
    p.add_argument("--bloch", required=True)
    fmt(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("spectrum", help="eigenvalues of every observable and q_max")
    p.add_argument("--dim", type=_dim, required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("anticommute", help="pair classification and anticommuting sets")
    p.add_argument("--dim", type=_dim, required=True)
    p.add_argument("--max-set", action="store_true")
    p.set_defaults(func=cmd_anticommute)

    p = sub.add_parser("witness", help="evaluate a witness on a state")
    p.add_argument("--state", required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--csv", action="store_true")
    fmt(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("demo", help="reproduce a reference witness example")
    p.add_argument("name", choices=demos.DEMOS)
    fmt(p)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("ramsey", help="simulate the ancilla-qubit readout")
    p.add_argument("mode", nargs="?", choices=("sample", "tomo"), default="sample")
    p.add_argument("--state", required=True)
    p.add_argument("--point", type=_point)
    p.add_argument("--shots", type=_positive, required=True)
    p.add_argument("--seed", type=int, default=None, help="defaults to $HWOBS_SEED, else 0")
    fmt(p)
    p.set_defaults(func=cmd_ramsey)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args, stdout)
    except UsageError as exc:
        parser.print_usage(stderr)
        stderr.write(f"hwobs: error: {exc}\n")
        return EXIT_USAGE
    except (ValidationError, ParseError) as exc:
        stderr.write(f"hwobs: invalid input: {exc}\n")
        return EXIT_VALIDATION
    except InconsistencyError as exc:
        stderr.write(f"hwobs: internal inconsistency: {exc}\n")
        return EXIT_INTERNAL
    except HWError as exc:
        stderr.write(f"hwobs: {exc}\n")
        return EXIT_VALIDATION
    except OSError as exc:
        stderr.write(f"hwobs: {exc}\n")
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
