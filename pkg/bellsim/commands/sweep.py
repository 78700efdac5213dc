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
from bellsim.config import settings
from bellsim.core.detector import confidence_expansion
from bellsim.core.teleport import fidelity_expansion
from bellsim.exceptions import InvalidInputError
from bellsim.services.curves import confidence_curve, fidelity_curve, grid_points
from bellsim.services.scenarios import build_spec, load_scenario
from bellsim.services.tables import output_stream, write_curve_csv

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("sweep", help="Series and dense values on an (eta, nu) grid.")
    parser.add_argument("--scenario", default=None, help="Scenario JSON file; without it the confidence is swept.")
    add_detector_flags(parser, required=False)
    add_order_flag(parser)
    add_grid_flags(parser)
    add_out_flag(parser)
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (default BELLSIM_THREADS).")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    threads = args.threads or settings.THREADS
    if threads < 1:
        raise InvalidInputError(f"--threads must be positive, got {threads}")

    if args.scenario:
        scenario = load_scenario(args.scenario)
        order = resolve_order(args.order or scenario.order)
        spec = build_spec(scenario, order)
        points = grid_points(args.eta or scenario.eta, args.nu or scenario.nu)
        curve = fidelity_curve(
            spec, fidelity_expansion(spec, order), points,
            dense=True, with_probability=scenario.success_probability, max_workers=threads,
        )
    else:
        if args.n is None:
            raise InvalidInputError("sweep needs --scenario or --n")
        order = resolve_order(args.order)
        bell = resolve_bell(args)
        points = grid_points(args.eta or DEFAULT_ETAS, args.nu or DEFAULT_NUS)
        curve = confidence_curve(bell, confidence_expansion(bell, order), points, dense=True, max_workers=threads)

    with output_stream(args.out) as out:
        write_curve_csv(curve, out)
    return 0
