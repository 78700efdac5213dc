import argparse
import logging

from bellsim.commands.common import (
    DEFAULT_ETAS,
    DEFAULT_NUS,
    add_detector_flags,
    add_grid_flags,
    add_order_flag,
    add_out_flag,
    resolve_bell,
    resolve_order,
)
from bellsim.core.detector import confidence_expansion
from bellsim.services.curves import confidence_curve, grid_points
from bellsim.services.tables import (
    coefficient_table,
    output_stream,
    write_coefficients_csv,
    write_coefficients_json,
    write_curve_csv,
)

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("confidence", help="Confidence of a Bell state detector.")
    add_detector_flags(parser)
    add_order_flag(parser)
    add_grid_flags(parser)
    add_out_flag(parser)
    parser.add_argument("--format", choices=["csv", "json"], default="csv", help="Coefficient table format.")
    parser.add_argument("--dense", action="store_true", help="Add the dense-operator value to each curve point.")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    order = resolve_order(args.order)
    bell = resolve_bell(args)
    logger.info("Confidence expansion: N_tilde=%d, m=%d, order=%s", bell.N_tilde, bell.phase_index, order)
    expansion = confidence_expansion(bell, order)
    table = coefficient_table("confidence", f"phi_minus({bell.N_tilde},{bell.phase_index})", bell.N_tilde, expansion)
    points = grid_points(args.eta or DEFAULT_ETAS, args.nu or DEFAULT_NUS)
    curve = confidence_curve(bell, expansion, points, dense=args.dense)

    with output_stream(args.out) as out:
        if args.format == "json":
            write_coefficients_json(table, out)
        else:
            write_coefficients_csv(table, out)
        out.write("\n")
        write_curve_csv(curve, out)
    return 0
