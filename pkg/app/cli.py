"""
Command-line front end.

Reports and expressions go to stdout; logs and diagnostics go to stderr.
Exit codes: 0 success, 1 computation failure or failed verification,
2 usage or expression syntax error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import ExpressionSyntaxError, GalileiToolkitError, InvalidParameterError
from app.models.galilei_schemas import REPRESENTATION_NAMES, ClassificationConfig, SimulationConfig
from app.models.report_schemas import Report
from app.services.opalgebra.operator_expr import OperatorExpr
from app.services.toolkit.toolkit_service import GalileiToolkitService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

EXPRESSION_COMMANDS = ("commute", "normal-form")
_FLAG_ARGUMENTS = frozenset({"--unicode", "--json", "-h", "--help"})


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--unicode", action="store_true", help="Pretty-print with λ, 𝟙 and superscripts")
    group.add_argument("--json", action="store_true", help="Print the full JSON report")


def _separate_operands(argv: List[str]) -> List[str]:
    """Place '--' before the expression operands so they may start with a minus sign."""
    if not argv or argv[0] not in EXPRESSION_COMMANDS or "--" in argv:
        return argv
    flags = [arg for arg in argv[1:] if arg in _FLAG_ARGUMENTS]
    operands = [arg for arg in argv[1:] if arg not in _FLAG_ARGUMENTS]
    return [argv[0], *flags, "--", *operands]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="galilei",
        description=f"{settings.APP_TITLE}: operator algebra, invariant classification and hybrid dynamics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    commute = subparsers.add_parser("commute", help="Normal form of the commutator [A, B]")
    commute.add_argument("left", help="Operator expression A")
    commute.add_argument("right", help="Operator expression B")
    _add_output_flags(commute)

    normal = subparsers.add_parser("normal-form", help="Canonical form of an expression")
    normal.add_argument("expression", help="Operator expression")
    _add_output_flags(normal)

    verify = subparsers.add_parser("verify", help="Check the Galilei brackets of a representation")
    verify.add_argument("--rep", choices=REPRESENTATION_NAMES, default="hybrid", help="Representation")
    verify.add_argument("--interaction", default=None, help="Interaction term or two-particle potential")

    classify = subparsers.add_parser("classify", help="Solve for Galilei-invariant interaction terms")
    classify.add_argument("--max-degree", type=int, default=2, help="Maximum total degree (default: 2)")
    classify.add_argument("--lp-degree", type=int, default=1, help="Maximum degree in lp (default: 1)")
    classify.add_argument("--conserve-momentum", action="store_true", help="Also require [k+p, H] = 0")
    classify.add_argument("--allow-lambda-q", action="store_true", help="Include lq building blocks")
    classify.add_argument("--no-hermitian", action="store_true", help="Skip symmetrization of candidates")
    classify.add_argument(
        "--masses",
        nargs=2,
        type=int,
        metavar=("M", "m"),
        default=None,
        help="Generic numeric masses for the constraint system",
    )

    liouvillian = subparsers.add_parser("liouvillian", help="Liouvillian of a classical Hamiltonian")
    liouvillian.add_argument("--hamiltonian", required=True, help="Polynomial in q[i], p[i] (and q2, p2)")
    _add_output_flags(liouvillian)

    simulate = subparsers.add_parser("simulate", help="Run the hybrid split-step simulation")
    simulate.add_argument("--config", required=True, type=Path, help="SimulationConfig JSON document")
    simulate.add_argument("--out", required=True, type=Path, help="CSV output path")

    return parser


def _print_expression(result: OperatorExpr, report: Report, args: argparse.Namespace) -> None:
    if args.json:
        print(report.to_json())
    elif args.unicode:
        print(result.to_unicode())
    else:
        print(result.to_dsl())


def _classification_config(args: argparse.Namespace) -> ClassificationConfig:
    values = {
        "max_degree": args.max_degree,
        "max_lambda_p_degree": args.lp_degree,
        "include_lambda_q": args.allow_lambda_q,
        "require_hermitian": not args.no_hermitian,
        "require_total_momentum_conservation": args.conserve_momentum,
    }
    if args.masses:
        values["quantum_mass"], values["classical_mass"] = args.masses
    try:
        return ClassificationConfig(**values)
    except ValidationError as e:
        raise InvalidParameterError(f"Invalid classification options: {e.errors()[0]['msg']}") from e


def _simulation_config(path: Path) -> SimulationConfig:
    try:
        return SimulationConfig.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise InvalidParameterError(f"Invalid simulation config: {location}: {first['msg']}", field=location) from e


def _dispatch(args: argparse.Namespace, service: GalileiToolkitService) -> int:
    if args.command == "commute":
        result, report = service.commute(args.left, args.right)
        _print_expression(result, report, args)
        return EXIT_OK
    if args.command == "normal-form":
        result, report = service.normal_form(args.expression)
        _print_expression(result, report, args)
        return EXIT_OK
    if args.command == "liouvillian":
        result, report = service.liouvillian(args.hamiltonian)
        _print_expression(result, report, args)
        return EXIT_OK
    if args.command == "verify":
        report = service.verify(args.rep, args.interaction)
    elif args.command == "classify":
        report = service.classify(_classification_config(args))
    else:
        _, report = service.simulate(_simulation_config(args.config), args.out)
    print(report.to_json())
    return EXIT_OK if report.passed else EXIT_FAILURE


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=settings.LOG_LEVEL,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    parser = build_parser()
    try:
        args = parser.parse_args(_separate_operands(list(sys.argv[1:] if argv is None else argv)))
    except SystemExit as exit_request:
        return int(exit_request.code or 0)

    try:
        return _dispatch(args, GalileiToolkitService())
    except ExpressionSyntaxError as e:
        print(f"error: {e.message}", file=sys.stderr)
        if "text" in e.details:
            text = e.details["text"]
            column = len(text.encode("utf-8")[: e.position].decode("utf-8", errors="ignore"))
            print(f"  {text}\n  {' ' * column}^", file=sys.stderr)
        return EXIT_USAGE
    except GalileiToolkitError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())
