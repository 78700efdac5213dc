import argparse
import logging

from bellsim.commands.common import add_grid_flags, add_order_flag, add_out_flag, resolve_order
from bellsim.core.teleport import fidelity_expansion
from bellsim.services.curves import fidelity_curve, grid_points
from bellsim.services.scenarios import build_spec, load_scenario
from bellsim.services.tables import (
    coefficient_table,
    output_stream,
    write_coefficients_csv,
    write_coefficients_json,
    write_curve_csv,
)

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("fidelity", help="Fidelity of a teleportation-based manipulation.")
    parser.add_argument("--scenario", required=True, help="Scenario JSON file.")
    add_order_flag(parser)
    add_grid_flags(parser)
    add_out_flag(parser)
    parser.add_argument("--format", choices=["csv", "json"], default="csv", help="Coefficient table format.")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    # Флаг --order важнее порядка из сценария
    order = resolve_order(args.order or scenario.order)
    spec = build_spec(scenario, order)
    expansion = fidelity_expansion(spec, order)
    table = coefficient_table("fidelity", spec.label.value, scenario.n, expansion)
    points = grid_points(args.eta or scenario.eta, args.nu or scenario.nu)
    curve = fidelity_curve(spec, expansion, points, with_probability=scenario.success_probability)

    with output_stream(args.out) as out:
        if args.format == "json":
            write_coefficients_json(table, out)
        else:
            write_coefficients_csv(table, out)
        out.write("\n")
        write_curve_csv(curve, out)
    logger.info("Fidelity of %s, N=%d done", spec.label.value, scenario.n)
    return 0
