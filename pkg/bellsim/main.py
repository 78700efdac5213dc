import argparse
import logging
import sys
from typing import List, Optional

from bellsim.config import settings
from bellsim.exceptions import BellSimError

# --- Импорты команд ---
from bellsim.commands import confidence
from bellsim.commands import decompose
from bellsim.commands import fidelity
from bellsim.commands import sweep
from bellsim.commands import verify
# --- Конец импортов команд ---

logger = logging.getLogger("bellsim")

LOG_FORMAT = "%(asctime)s [%(levelname)s] [%(name)s] %(message)s"


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellsim",
        description="Number-sum Bell state detectors with imperfect photodetectors: confidence and manipulation fidelity.",
    )
    parser.add_argument(
        "--verbosity",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default=settings.LOG_LEVEL,
        help="Logging level (default BELLSIM_LOG_LEVEL).",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    # --- Регистрация команд ---
    confidence.register(subparsers)
    fidelity.register(subparsers)
    verify.register(subparsers)
    decompose.register(subparsers)
    sweep.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse сам печатает ошибку; код 2 для неверных флагов
        return int(e.code or 0)

    logging.basicConfig(level=args.verbosity, format=LOG_FORMAT, stream=sys.stderr, force=True)
    logging.getLogger().setLevel(args.verbosity)

    try:
        return args.handler(args)
    except BellSimError as e:
        logger.critical("%s failed: %s", args.command, e.detail)
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
