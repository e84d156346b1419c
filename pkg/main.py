#!/usr/bin/env python3
"""
RANK FLOW: exact verification of rank f(A) + rank g(A) = rank D(A) + rank M(A)

Main entry point. Subcommands verify the rank identity with a full
certificate, classify matrices by rank statements, print minimal and
characteristic polynomials and ranks, re-check stored certificates, and run
the seeded fuzz suite.

Exit status: 0 all contracts agree, 1 contract violation, 2 usage or parse error.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from src.classifiers import PROPERTY_NAMES, classify
from src.config_loader import GENERATOR_NAMES, load_fuzz_config
from src.error_handler import ErrorHandler, ExitCode, with_error_handling
from src.exact_matrix import mat_rank
from src.fuzz_harness import run_fuzz
from src.matrix_io import format_poly, parse_factor_list, parse_matrix_file, parse_poly
from src.metrics_logger import FuzzMetricsLogger
from src.rank_theorem import (
    build_certificate, certificate_from_document, certificate_to_document, verify_certificate
)
from src.schemas import CertificateDocument
from src.spectral_poly import char_poly, min_poly


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--log-level',
        type=str,
        default='WARNING',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
        help='Console log level on stderr (default: WARNING)'
    )
    common.add_argument(
        '--log-file',
        type=str,
        default=None,
        help='Also write a DEBUG log to this file'
    )
    common.add_argument(
        '--json',
        action='store_true',
        help='Print machine-readable JSON on stdout'
    )

    parser = argparse.ArgumentParser(
        description="RANK FLOW - exact rank identities for matrix polynomials",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Verify the identity for f = x, g = 1 - x and keep the certificate
  python main.py verify --matrix data/diag_idempotent_q.txt --f "0 1" --g "1 -1" --cert-out cert.json

  # Classify a matrix (a single negative coefficient needs the --f=-3/4 form)
  python main.py classify --matrix data/diag_1_2_q.txt --property charfactors --factors "-1 1 ; -2 1"

  # Minimal polynomial
  python main.py minpoly --matrix data/identity3_gf7.txt

  # Seeded fuzz run
  python main.py fuzz --field 7 --n 1..6 --deg 0..5 --trials 500 --seed 42
        """
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    verify = subparsers.add_parser('verify', parents=[common], help='Build and verify a rank identity certificate')
    verify.add_argument('--matrix', type=str, required=True, help='Matrix file')
    verify.add_argument('--f', type=str, required=True, help='Ascending coefficients of f, e.g. "0 1"')
    verify.add_argument('--g', type=str, required=True, help='Ascending coefficients of g')
    verify.add_argument('--cert-out', type=str, default=None, help='Write the certificate JSON here')

    classify_cmd = subparsers.add_parser('classify', parents=[common], help='Evaluate rank statements for a property')
    classify_cmd.add_argument('--matrix', type=str, required=True, help='Matrix file')
    classify_cmd.add_argument('--property', type=str, required=True, choices=PROPERTY_NAMES, help='Property to decide')
    classify_cmd.add_argument('--factors', type=str, default=None,
                              help='Characteristic polynomial factors "c... ; c..." (charfactors only)')

    for name, text in (('minpoly', 'Print the minimal polynomial'),
                       ('charpoly', 'Print the characteristic polynomial'),
                       ('rank', 'Print the rank')):
        sub = subparsers.add_parser(name, parents=[common], help=text)
        sub.add_argument('--matrix', type=str, required=True, help='Matrix file')

    recheck = subparsers.add_parser('recheck', parents=[common], help='Re-verify a certificate JSON file')
    recheck.add_argument('--cert', type=str, required=True, help='Certificate JSON file')

    fuzz = subparsers.add_parser('fuzz', parents=[common], help='Run the seeded randomized contract suite')
    fuzz.add_argument('--config', type=str, default=None, help='YAML/JSON fuzz configuration')
    fuzz.add_argument('--field', type=str, default=None, help='Q or a prime p < 2^31')
    fuzz.add_argument('--n', type=str, default=None, help='Matrix order range LO..HI')
    fuzz.add_argument('--deg', type=str, default=None, help='Polynomial degree range LO..HI')
    fuzz.add_argument('--trials', type=int, default=None, help='Number of trials')
    fuzz.add_argument('--seed', type=int, default=None, help='64-bit unsigned seed')
    fuzz.add_argument('--generators', type=str, default=None,
                      help=f'Comma-separated subset of {",".join(GENERATOR_NAMES)}')
    fuzz.add_argument('--workers', type=int, default=None, help='Worker threads (default: 1)')
    fuzz.add_argument('--progress', action='store_true', help='Show a progress bar on stderr')
    fuzz.add_argument('--out', type=str, default=None, help='Write the fuzz report JSON here')

    return parser.parse_args(argv)


def cmd_verify(matrix_path: str, f_text: str, g_text: str, cert_out_path: Optional[str] = None,
               as_json: bool = False) -> ExitCode:
    """Build and verify the certificate for (A, f, g); print the four ranks."""
    A = parse_matrix_file(matrix_path)
    f = parse_poly(f_text, A.domain)
    g = parse_poly(g_text, A.domain)
    cert = build_certificate(A, f, g)
    result = verify_certificate(cert)
    document = certificate_to_document(cert, verified=result.ok)

    if cert_out_path:
        Path(cert_out_path).write_text(document.model_dump_json(indent=2))

    if as_json:
        print(document.model_dump_json(indent=2))
    else:
        print(f"field: {A.domain}")
        print(f"D = {cert.bezout.D}")
        print(f"M = {cert.bezout.M}")
        print(f"rank f(A) = {cert.rank_f}")
        print(f"rank g(A) = {cert.rank_g}")
        print(f"rank D(A) = {cert.rank_D}")
        print(f"rank M(A) = {cert.rank_M}")
        print(f"{cert.rank_f} + {cert.rank_g} = {cert.rank_D} + {cert.rank_M}: "
              f"{'verified' if result.ok else 'FAILED'}")

    if not result.ok:
        print(f"failed invariants: {', '.join(result.failed)}", file=sys.stderr)
        return ExitCode.CONTRACT_VIOLATION
    return ExitCode.OK


def cmd_classify(matrix_path: str, property_name: str, factors_text: Optional[str] = None) -> ExitCode:
    """Print the classification report JSON; exit 0 iff the report is consistent."""
    A = parse_matrix_file(matrix_path)
    factors = parse_factor_list(factors_text, A.domain) if factors_text else None
    report = classify(A, property_name, factors)
    print(report.to_document().model_dump_json(indent=2, by_alias=True))
    return ExitCode.OK if report.consistent else ExitCode.CONTRACT_VIOLATION


def cmd_minpoly(matrix_path: str) -> ExitCode:
    print(format_poly(min_poly(parse_matrix_file(matrix_path))))
    return ExitCode.OK


def cmd_charpoly(matrix_path: str) -> ExitCode:
    print(format_poly(char_poly(parse_matrix_file(matrix_path))))
    return ExitCode.OK


def cmd_rank(matrix_path: str) -> ExitCode:
    print(mat_rank(parse_matrix_file(matrix_path)))
    return ExitCode.OK


def cmd_recheck(cert_path: str) -> ExitCode:
    """Re-verify a certificate file from scratch."""
    document = CertificateDocument.model_validate_json(Path(cert_path).read_text())
    result = verify_certificate(certificate_from_document(document))
    if result.ok:
        print("verified")
        return ExitCode.OK
    print(f"failed invariants: {', '.join(result.failed)}")
    return ExitCode.CONTRACT_VIOLATION


def cmd_fuzz(args: argparse.Namespace) -> ExitCode:
    """Run the fuzz suite from --config and flag overrides."""
    overrides = {
        'field': args.field,
        'n': args.n,
        'deg': args.deg,
        'trials': args.trials,
        'seed': args.seed,
        'generators': args.generators,
        'workers': args.workers,
        'progress': True if args.progress else None,
    }
    config = load_fuzz_config(args.config, overrides)
    metrics = FuzzMetricsLogger(args.out)
    report = run_fuzz(config, metrics)

    if args.json:
        print(report.to_document().model_dump_json(indent=2))
    else:
        summary = metrics.summary()
        print(f"field: {config.field}")
        print(f"trials: {summary['trials_run']}")
        print(f"checks: {summary['total_checks']} over {len(report.contract_checks)} contracts")
        print(f"failures: {summary['total_failures']}")
        for contract, count in summary['failures_per_contract'].items():
            trials = [f.trial_index for f in report.failures if f.contract == contract]
            print(f"  {contract}: {count} (trials {', '.join(map(str, trials))})")
        print(f"elapsed: {report.elapsed:.2f}s")
    return ExitCode.OK if report.passed else ExitCode.CONTRACT_VIOLATION


def dispatch(args: argparse.Namespace) -> ExitCode:
    """Run the selected subcommand."""
    if args.command == 'verify':
        return cmd_verify(args.matrix, args.f, args.g, args.cert_out, args.json)
    if args.command == 'classify':
        return cmd_classify(args.matrix, args.property, args.factors)
    if args.command == 'minpoly':
        return cmd_minpoly(args.matrix)
    if args.command == 'charpoly':
        return cmd_charpoly(args.matrix)
    if args.command == 'rank':
        return cmd_rank(args.matrix)
    if args.command == 'recheck':
        return cmd_recheck(args.cert)
    return cmd_fuzz(args)


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, configure logging and run one subcommand."""
    args = parse_arguments(argv)
    error_handler = ErrorHandler(log_file=args.log_file, level=args.log_level)
    try:
        command = with_error_handling('cli', args.command, error_handler)(dispatch)
        return int(command(args))
    finally:
        error_handler.shutdown()


if __name__ == "__main__":
    sys.exit(main())
