"""CLI for Hodge cycle computations on hypersurfaces.

Run with: python -m src.cli.hodge_cli --help
"""

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from src.config import get_config
from src.cycles import express_in_point_basis, fake_point_poly, is_fake_linear, join_poly, join_spec, point_poly
from src.errors import HodgeError, ParseError, RootCollision
from src.exactfield import format_field, is_rational, zeta_pow
from src.fixtures import fixture_ids, run_all, run_fixture
from src.jacobian import HypersurfaceSpec, hilbert_function
from src.polyring import binary_form_from_roots, fermat_form, parse_field_element
from src.problem import load_problem, run_problem
from src.qform import fake_point_certificate
from src.utils import atomic_write_json, dumps_line

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SMOOTHNESS = 3
EXIT_DOMAIN = 4
EXIT_MISMATCH = 5

EXIT_CODES_HELP = """exit codes:
  0  success
  2  malformed problem file, polynomial or argument
  3  hypersurface failed the smoothness certificate
  4  any other domain error (zero class, root collision, ...)
  5  a fixture recomputed to a different value
"""


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _rationals(text: str, option: str) -> list[Fraction]:
    values = []
    offset = 0
    for piece in text.split(","):
        value = is_rational(parse_field_element(piece, column_offset=offset))
        if value is None:
            raise ParseError(f"{option} expects rational numbers, got '{piece.strip()}'", column=offset + 1)
        values.append(value)
        offset += len(piece) + 1
    return values


def _resolve_problem(name: str) -> Path | None:
    """The file as given, else the sample of that name under problems_dir."""
    path = Path(name)
    if path.exists():
        return path
    sample = get_config().problems_dir / name
    return sample if sample.exists() else None


def cmd_compute(args: argparse.Namespace) -> int:
    path = _resolve_problem(args.file)
    if path is None:
        print(f"Error: Problem file not found: {args.file}", file=sys.stderr)
        return EXIT_PARSE

    problem = load_problem(path)
    reports = run_problem(problem, parallel=args.parallel, timing=args.timing)

    if args.out is not None:
        out_dir = Path(args.out) if args.out else get_config().output_dir
        for index, report in enumerate(reports, start=1):
            target = out_dir / f"{index:03d}-{report.operation}.json"
            atomic_write_json(report.to_dict(), target)
            print(target)
    else:
        for report in reports:
            print(dumps_line(report.to_dict()))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    params = {
        "d": args.d,
        "alpha0": args.alpha0,
        "r": args.r,
        "rcheck": args.rcheck,
        "seed": args.seed,
        "count": args.count,
        "workers": args.workers,
    }
    if args.fixture == "all":
        results = run_all(params)
    else:
        results = [run_fixture(args.fixture, params)]

    failed = []
    for result in results:
        print(dumps_line(result.to_dict(timing=args.timing)))
        if not result.passed:
            failed.append(result)
    for result in failed:
        print(f"Error: Fixture {result.fixture_id} failed: {', '.join(result.mismatches)}", file=sys.stderr)
    return EXIT_MISMATCH if failed else EXIT_OK


def _join_row(spec: HypersurfaceSpec, c: Fraction, fake, n: int) -> dict:
    """Join the fake point with n/2 Fermat points of the same degree."""
    fermat = HypersurfaceSpec(fermat_form(2, spec.d), spec.order)
    root = zeta_pow(2 * spec.d, 1)
    point = point_poly(fermat, root)
    joint, cycle = spec, fake
    for _ in range(n // 2):
        joint, cycle = join_spec(joint, fermat), join_poly(cycle, point)
    verdict = is_fake_linear(joint, cycle)
    row = {"join_hilbert": hilbert_function(joint, cycle), "join_verdict": verdict.verdict}
    if (spec.d - 2) * n >= 6:
        factors = [spec] + [fermat] * (n // 2)
        parameters = [c] + [root] * (n // 2)
        row["certificate"] = fake_point_certificate(factors, parameters).to_dict()
    return row


def cmd_explore_fake(args: argparse.Namespace) -> int:
    roots = _rationals(args.roots, "--roots")
    if args.d is not None and args.d != len(roots):
        raise ParseError(f"--d {args.d} does not match {len(roots)} roots")
    if args.join and (args.n < 2 or args.n % 2):
        raise ParseError(f"--n must be even and at least 2, got {args.n}")

    spec = HypersurfaceSpec(binary_form_from_roots(roots), get_config().monomial_order)
    spec.require_smooth()
    for c in _rationals(args.c, "--c"):
        try:
            fake = fake_point_poly(spec, c)
        except RootCollision as e:
            print(dumps_line({"c": format_field(c), "error": str(e)}))
            continue
        row = {
            "c": format_field(c),
            "P": fake.P.to_text(spec.order),
            "coefficients": [format_field(q) for q in express_in_point_basis(fake, roots)],
            "hilbert": hilbert_function(spec, fake),
            "verdict": is_fake_linear(spec, fake).verdict,
        }
        if args.join:
            row.update(_join_row(spec, c, fake, args.n))
        print(dumps_line(row))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Exact invariants of Hodge cycles on smooth hypersurfaces",
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    compute = subparsers.add_parser(
        "compute",
        help="Run the tasks of a problem file",
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    compute.add_argument("file", help="Problem file, or the name of a sample under problems/")
    compute.add_argument(
        "--out",
        nargs="?",
        const="",
        help="Write one JSON report per task into this directory (default: HODGE_OUTPUT_DIR)",
    )
    compute.add_argument("--parallel", action="store_true", help="Run tasks concurrently (output keeps task order)")
    compute.add_argument("--timing", action="store_true", help="Add wall-clock seconds to each report")
    compute.set_defaults(handler=cmd_compute)

    verify = subparsers.add_parser(
        "verify",
        help="Recompute published worked examples",
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    verify.add_argument("fixture", choices=fixture_ids() + ["all"], help="Fixture id or 'all'")
    verify.add_argument("--d", type=int, help="Degree (binary-determinant-witness)")
    verify.add_argument("--alpha0", type=int, help="Exponent of the second point")
    verify.add_argument("--r", type=Fraction, help="Multiplicity of the first point")
    verify.add_argument("--rcheck", type=Fraction, help="Multiplicity of the second point")
    verify.add_argument("--seed", type=int, help="Seed for randomized fixtures (default: HODGE_SEED)")
    verify.add_argument("--count", type=int, help="Number of randomized instances")
    verify.add_argument("--workers", type=int, help="Threads for quadratic form sweeps")
    verify.add_argument("--timing", action="store_true", help="Add wall-clock seconds to each result")
    verify.set_defaults(handler=cmd_verify)

    explore = subparsers.add_parser(
        "explore-fake",
        help="Tabulate fake points on a rational-root binary form",
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    explore.add_argument("--roots", required=True, help="Distinct rational roots, e.g. 0,1,1/2")
    explore.add_argument("--c", required=True, help="Fake point parameters, e.g. -1,3")
    explore.add_argument("--d", type=int, help="Degree (must equal the number of roots)")
    explore.add_argument("--join", action="store_true", help="Join with Fermat points up to dimension --n")
    explore.add_argument("--n", type=int, default=2, help="Dimension of the joined cycle (default: 2)")
    explore.set_defaults(handler=cmd_explore_fake)
    return parser


def main(argv: list[str] | None = None) -> int:
    """CLI entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    config = get_config()
    _configure_logging(config.log_level)

    try:
        return args.handler(args)
    except HodgeError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
