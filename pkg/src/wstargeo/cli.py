"""Command-line front end.

Subcommands::

    wstargeo polar FILE [--name N] [--tol T]     polar factors of a matrix
    wstargeo verify SUITE [flags]                run a named property suite
    wstargeo amplitude FILE                      transition amplitude of a chain
    wstargeo orbit FILE [--name N] [--algebra B] orbit invariants of a density

Exit codes: 0 success / all rows pass, 1 parse error, 2 domain error (including
a failing suite row), 3 usage error (unknown flags, unknown suite).
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .algebra import (
    NormalFunctional,
    block_ranks,
    functional_support,
    orbit_invariant,
    stabilizer_lie_algebra,
)
from .errors import DomainError, ParseError, UsageError
from .io import load_algebra_spec, load_vectors, write_report_csv
from .linalg import (
    DEFAULT_TOL,
    ToleranceProfile,
    frobenius,
    polar_decompose,
    support_projection,
)
from .poisson import feynman_amplitude
from .suites import SUITE_NAMES, run_suite

__all__ = ["main", "console_entry", "build_parser"]


class _Parser(argparse.ArgumentParser):
    """argparse that reports bad invocations through the exit-code contract
    instead of terminating the process itself."""

    def error(self, message: str):  # noqa: D102 - argparse hook
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="wstargeo",
        description="Groupoid, Poisson, and modular-flow verification "
        "on finite-dimensional W*-algebras.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p_polar = sub.add_parser(
        "polar", help="polar decomposition of a matrix from an algebra file"
    )
    p_polar.add_argument("file", help="algebra file containing the matrix")
    p_polar.add_argument(
        "--name",
        default=None,
        help="which named matrix to decompose (default: the only one)",
    )
    p_polar.add_argument(
        "--tol",
        type=float,
        default=None,
        help="relative rank cutoff for retained singular values",
    )

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument(
        "suite",
        help=f"suite name ('all' or one of: {', '.join(SUITE_NAMES)})",
    )
    p_verify.add_argument(
        "--algebra",
        default="2,3",
        help='block sizes, e.g. "2" or "2,3" (default "2,3")',
    )
    p_verify.add_argument("--trials", type=int, default=100)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument(
        "--tol",
        type=float,
        default=None,
        help="override every row's pass tolerance uniformly",
    )
    p_verify.add_argument(
        "--report", default=None, help="write CSV report rows to this path"
    )
    p_verify.add_argument(
        "--repair",
        action="store_true",
        help="skip composability checks and force the product formulas",
    )

    p_amp = sub.add_parser(
        "amplitude", help="transition amplitude of a chain of unit vectors"
    )
    p_amp.add_argument("file", help="vectors file")

    p_orbit = sub.add_parser(
        "orbit", help="orbit invariants of a positive density"
    )
    p_orbit.add_argument("file", help="algebra file containing the density")
    p_orbit.add_argument(
        "--name",
        default=None,
        help="which named matrix is the density (default: the only one)",
    )
    p_orbit.add_argument(
        "--algebra",
        default=None,
        help="expected block sizes; must match the file when given",
    )
    return parser


def _parse_blocks(text: str) -> tuple[int, ...]:
    try:
        blocks = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--algebra must be comma-separated integers, got {text!r}") from exc
    if not blocks or any(b < 1 for b in blocks):
        raise UsageError(f"--algebra block sizes must be positive, got {text!r}")
    return blocks


def _pick_matrix(matrices: dict[str, np.ndarray], name: str | None, path: str) -> np.ndarray:
    if name is not None:
        if name not in matrices:
            raise UsageError(
                f"{path} has no matrix named {name!r}; "
                f"available: {', '.join(sorted(matrices)) or '(none)'}"
            )
        return matrices[name]
    if len(matrices) != 1:
        raise UsageError(
            f"{path} holds {len(matrices)} matrices; pick one with --name"
        )
    return next(iter(matrices.values()))


def _print_matrix(label: str, a: np.ndarray) -> None:
    print(f"{label}:")
    body = np.array2string(
        np.round(a, 12), precision=6, suppress_small=True, separator=", "
    )
    for line in body.splitlines():
        print(f"  {line}")


def cmd_polar(args: argparse.Namespace) -> int:
    _, matrices = load_algebra_spec(args.file)
    a = _pick_matrix(matrices, args.name, args.file)
    prof = DEFAULT_TOL
    if args.tol is not None:
        prof = ToleranceProfile(
            rank_rel_tol=args.tol,
            residual_tol=prof.residual_tol,
            fd_step=prof.fd_step,
        )
    u, h = polar_decompose(a, prof)
    _print_matrix("u", u)
    _print_matrix("h", h)
    uh = u.conj().T @ u
    print(
        "residuals: "
        f"reconstruction={frobenius(u @ h - a):.6e} "
        f"isometry={frobenius(uh @ uh - uh):.6e} "
        f"support={frobenius(uh - support_projection(h, prof)):.6e}"
    )
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    algebra_blocks = _parse_blocks(args.algebra)
    from .algebra import BlockAlgebra

    algebra = BlockAlgebra(algebra_blocks)
    names = list(SUITE_NAMES) if args.suite == "all" else [args.suite]
    rows = []
    for name in names:
        rows.extend(
            run_suite(
                name,
                algebra,
                trials=args.trials,
                seed=args.seed,
                tol=args.tol,
                repair=args.repair,
            )
        )
    width = max(len(r.suite) for r in rows)
    for r in rows:
        print(
            f"{r.suite:<{width}}  trials={r.trials} seed={r.seed}  "
            f"max_residual={r.max_residual:.6e}  tol={r.tolerance:.1e}  "
            f"{r.status}"
        )
    failed = [r for r in rows if not r.passed]
    print(
        f"verify: {len(rows)} rows, {len(rows) - len(failed)} passed, "
        f"{len(failed)} failed"
    )
    if args.report is not None:
        with open(args.report, "w", encoding="utf-8") as fh:
            write_report_csv(rows, fh)
    return 2 if failed else 0


def cmd_amplitude(args: argparse.Namespace) -> int:
    vectors = load_vectors(args.file)
    report = feynman_amplitude(vectors)
    amp = report.amplitude
    print(f"steps: {report.steps}")
    print(f"amplitude: {amp.real:+.12f}{amp.imag:+.12f}j")
    print(f"probability: {report.probability:.12f}")
    return 0


def cmd_orbit(args: argparse.Namespace) -> int:
    algebra, matrices = load_algebra_spec(args.file)
    if args.algebra is not None:
        expected = _parse_blocks(args.algebra)
        if expected != algebra.blocks:
            raise UsageError(
                f"--algebra {expected} does not match the file's blocks "
                f"{algebra.blocks}"
            )
    d = _pick_matrix(matrices, args.name, args.file)
    phi = NormalFunctional(algebra, d)
    spectra = orbit_invariant(phi, DEFAULT_TOL)
    support = functional_support(phi, DEFAULT_TOL)
    ranks = block_ranks(algebra, support, DEFAULT_TOL)
    for i, (n, spec_i, rank_i) in enumerate(zip(algebra.blocks, spectra, ranks)):
        vals = ", ".join(f"{v:.6e}" for v in spec_i)
        print(f"block {i} ({n}x{n}): spectrum [{vals}] support rank {rank_i}")
    stab = stabilizer_lie_algebra(phi, DEFAULT_TOL)
    print(f"stabilizer dimension: {stab.dimension}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required (polar, verify, amplitude, orbit)")
        handler = {
            "polar": cmd_polar,
            "verify": cmd_verify,
            "amplitude": cmd_amplitude,
            "orbit": cmd_orbit,
        }[args.command]
        return handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2


def console_entry() -> None:
    sys.exit(main())
