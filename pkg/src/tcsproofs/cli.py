from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Mapping
from pathlib import Path

from dbetto import utils

from . import _version, ord_proofs, php_dual
from .acceptance import LEVELS, run_acceptance, tally
from .certificates import ProofCertificate, verify_certificate
from .lp import MODES, SIDES, mode_support, solve_tcs
from .systems import Family, build_ord, build_php
from .tables import FORMATS, TABLE_IDS, TableSpec, lp_options, reproduce_table
from .utils import dump_dict, load_config, parse_n_range, write_dict

log = logging.getLogger(__name__)


def tcsproofs_cli(argv: list[str] | None = None) -> None:
    args = _parse_cli_args(argv)

    logging.basicConfig()
    if args.verbose:
        logging.getLogger("tcsproofs").setLevel(logging.DEBUG)
    if args.debug:
        logging.root.setLevel(logging.DEBUG)

    config = load_config(args.config)
    if args.seed is not None:
        config["acceptance"]["seed"] = args.seed
    if args.threads is not None:
        config["tables"]["workers"] = args.threads

    code = _COMMANDS[args.command](args, config)
    if code:
        sys.exit(code)


def _build_system(family: str, n: int):
    return build_php(n) if Family(family) is Family.PHP else build_ord(n)


def _emit(args: argparse.Namespace, data: Mapping | str) -> None:
    """Write to ``--out`` (format from the suffix) or to standard output."""
    if args.out is None:
        text = data if isinstance(data, str) else dump_dict(data, "json")
        sys.stdout.write(text)
    elif isinstance(data, str):
        Path(args.out).write_text(data)
        log.info("written %s", args.out)
    else:
        write_dict(data, args.out)
        log.info("written %s", args.out)


def _sys_export(args, config) -> int:  # noqa: ARG001
    _emit(args, _build_system(args.family, args.n).to_dict())
    return 0


def _lp_solve(args, config) -> int:
    system = _build_system(args.family, args.n)
    result = solve_tcs(
        system,
        args.mode,
        side=args.side,
        congen=args.congen,
        batch=config.lp.batch,
        max_rounds=config.lp.max_rounds,
        bland=config.simplex.bland,
    )
    data = {"family": args.family, "n": args.n, "mode": args.mode, **result.to_dict()}
    data["witness_path"] = None
    if args.functional is not None:
        write_dict(result.functional().to_dict(), args.functional)
        data["witness_path"] = args.functional
    if args.certificate is not None and args.mode != "resolution-like":
        write_dict(result.certificate().to_dict(), args.certificate)
        data["witness_path"] = args.certificate
    _emit(args, data)
    return 0


def _php_dual_report(args, config) -> int:  # noqa: ARG001
    _emit(args, php_dual.dual_report(args.n))
    return 0


def _ord_command(args, config) -> int:  # noqa: ARG001
    if args.ord_command == "build-proof":
        cert = ord_proofs.build_ord_proof(args.n)
    elif args.ord_command == "build-sos":
        cert = ord_proofs.build_sos_ord_proof(args.n)
    else:
        cert = ord_proofs.restrict_to_no_min(
            ProofCertificate.from_dict(utils.load_dict(args.input))
        )
    _emit(args, cert.to_dict())
    return 0


def _verify(args, config) -> int:
    cert = ProofCertificate.from_dict(utils.load_dict(args.certificate))
    support = None
    if args.support != "full":
        support = mode_support(cert.system, args.support)
    result = verify_certificate(cert, support, chunk_size=config.verify.chunk_size)
    data = {
        **result.to_dict(),
        "entries": len(cert),
        "total_coefficient_size": cert.total_coefficient_size(),
    }
    _emit(args, data)
    return 0 if result.ok else 1


def _table(args, config) -> int:
    spec = TableSpec(args.table_id, tuple(parse_n_range(args.n_range)), args.mode)
    result = reproduce_table(
        spec,
        timeout=config.tables.timeout,
        workers=config.tables.workers,
        options=lp_options(config),
    )
    _emit(args, result.render(args.format))
    return 0


def _accept(args, config) -> int:
    report = run_acceptance(args.level, config)
    log.info("acceptance (%s): %s", args.level, tally(report))
    _emit(args, report.to_dict())
    return report.exit_code


_COMMANDS = {
    "sys": _sys_export,
    "lp": _lp_solve,
    "php": _php_dual_report,
    "ord": _ord_command,
    "verify": _verify,
    "table": _table,
    "accept": _accept,
}


def _add_system_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--family",
        choices=[f.value for f in (Family.PHP, Family.ORD)],
        required=True,
        help="""Axiom system family""",
    )
    parser.add_argument("--n", type=int, required=True, help="""Number of pigeons or elements""")


def _parse_cli_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="tcsproofs",
        description="%(prog)s command line interface",
    )

    # global options
    parser.add_argument(
        "--version",
        action="version",
        help="""Print %(prog)s version and exit""",
        version=_version.__version__,
    )
    parser.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="""Increase the program verbosity""",
    )
    parser.add_argument(
        "--debug",
        "-d",
        action="store_true",
        help="""Increase the program verbosity to maximum""",
    )
    parser.add_argument(
        "--config",
        default=None,
        help="""Configuration file (YAML or JSON) merged over the bundled defaults""",
    )
    parser.add_argument(
        "--out",
        "-o",
        default=None,
        help="""Output file (JSON or YAML by suffix for reports, text for tables)""",
    )
    parser.add_argument(
        "--format",
        choices=FORMATS,
        default="md",
        help="""Table output format""",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="""Number of table cells computed concurrently""",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="""Seed of the random property checks""",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    sys_parser = sub.add_parser("sys", help="""Axiom systems""")
    sys_sub = sys_parser.add_subparsers(dest="sys_command", required=True)
    _add_system_args(sys_sub.add_parser("export", help="""Export an axiom system"""))

    lp_parser = sub.add_parser("lp", help="""Total coefficient size programs""")
    lp_sub = lp_parser.add_subparsers(dest="lp_command", required=True)
    solve = lp_sub.add_parser("solve", help="""Solve the program of an axiom system""")
    _add_system_args(solve)
    solve.add_argument("--mode", choices=MODES, default="full", help="""Assignment support""")
    solve.add_argument("--side", choices=SIDES, default="dual", help="""Program to solve""")
    solve.add_argument(
        "--congen",
        action="store_true",
        help="""Generate weakening constraints lazily""",
    )
    solve.add_argument("--certificate", default=None, help="""Write the optimal refutation""")
    solve.add_argument("--functional", default=None, help="""Write the optimal dual functional""")

    php_parser = sub.add_parser("php", help="""The explicit PHP dual certificate""")
    php_sub = php_parser.add_subparsers(dest="php_command", required=True)
    report = php_sub.add_parser("dual-report", help="""Closed forms and checks for one n""")
    report.add_argument("--n", type=int, required=True, help="""Number of pigeons""")

    ord_parser = sub.add_parser("ord", help="""Explicit ORD refutations""")
    ord_sub = ord_parser.add_subparsers(dest="ord_command", required=True)
    for name, text in (
        ("build-proof", """Refutation of size 2^n - n"""),
        ("build-sos", """Sum-of-squares refutation"""),
    ):
        cmd = ord_sub.add_parser(name, help=text)
        cmd.add_argument("--n", type=int, required=True, help="""Number of elements""")
    restrict = ord_sub.add_parser(
        "restrict", help="""Extend a refutation valid without a minimum"""
    )
    restrict.add_argument(
        "--in", dest="input", required=True, help="""Certificate file"""
    )

    verify = sub.add_parser("verify", help="""Check a certificate pointwise""")
    verify.add_argument("certificate", help="""Certificate file""")
    verify.add_argument(
        "--support",
        choices=("full", "restricted"),
        default="full",
        help="""Assignments to check""",
    )

    table = sub.add_parser("table", help="""Reproduce a reference table""")
    table.add_argument("table_id", choices=TABLE_IDS, help="""Table id""")
    table.add_argument("--n-range", required=True, help="""Range of n, e.g. 3..5""")
    table.add_argument("--mode", default=None, help="""Table mode (default from the manifest)""")

    accept = sub.add_parser("accept", help="""Run the acceptance suite""")
    accept.add_argument("--level", choices=LEVELS, default="quick", help="""Suite level""")

    args = parser.parse_args(argv)

    if args.command == "table":
        try:
            TableSpec(args.table_id, tuple(parse_n_range(args.n_range)), args.mode)
        except ValueError as exc:
            parser.error(str(exc))

    return args
