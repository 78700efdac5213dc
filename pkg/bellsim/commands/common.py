"""Общие флаги подкоманд."""
import argparse
from typing import Optional

from bellsim.config import settings
from bellsim.core.detector import BellSpec, bell_spec
from bellsim.core.fock import bell_amplitudes
from bellsim.core.interferometer import load_interferometer
from bellsim.core.poly import ExpansionOrder

DEFAULT_ETAS = [1.0, 0.9, 0.8, 0.7]
DEFAULT_NUS = [0.0, 0.05, 0.1]


def add_order_flag(parser: argparse.ArgumentParser):
    parser.add_argument("--order", default=None, help=f"Expansion order A,B (default {settings.DEFAULT_ORDER}).")


def add_grid_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--eta", type=float, nargs="+", default=None, help="Quantum efficiencies of the curve grid.")
    parser.add_argument("--nu", type=float, nargs="+", default=None, help="Dark counts of the curve grid.")


def add_out_flag(parser: argparse.ArgumentParser):
    parser.add_argument("--out", default=None, help="Write results to this path instead of stdout.")


def add_detector_flags(parser: argparse.ArgumentParser, required: bool = True):
    parser.add_argument("--n", type=int, required=required, help="Number sum of the target Bell state.")
    parser.add_argument("--m", type=int, default=0, help="Phase index of the target Bell state.")
    parser.add_argument("--interferometer", default=None, help="JSON file with a custom detector matrix.")


def resolve_order(text: Optional[str]) -> ExpansionOrder:
    return ExpansionOrder.parse(text or settings.DEFAULT_ORDER)


def resolve_bell(args: argparse.Namespace) -> BellSpec:
    """Встроенный детектор или матрица из --interferometer."""
    if args.interferometer:
        return BellSpec(load_interferometer(args.interferometer), bell_amplitudes(args.n, args.m))
    return bell_spec(args.n, args.m)
