import argparse
import logging

from bellsim.commands.common import add_order_flag, add_out_flag, resolve_order
from bellsim.exceptions import VerificationError
from bellsim.services.checks import run_verification
from bellsim.services.tables import output_stream

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("verify", help="Run the table and cross-validation checks.")
    add_order_flag(parser)
    add_out_flag(parser)
    parser.add_argument("--perturb", type=float, default=None, metavar="EPS",
                        help="Perturb the detector matrices by EPS before the selectivity checks.")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    report = run_verification(resolve_order(args.order), args.perturb)
    with output_stream(args.out) as out:
        for check in report.checks:
            out.write(f"{'PASS' if check.passed else 'FAIL'} {check.name}: {check.detail}\n")
    if not report.passed:
        raise VerificationError(f"{len(report.failed)} of {len(report.checks)} checks failed")
    logger.info("All %d checks passed", len(report.checks))
    return 0
