import argparse
import json
import logging

import numpy as np

from bellsim.commands.common import add_out_flag
from bellsim.core.interferometer import (
    Interferometer,
    builtin_detector,
    decompose_reck,
    load_interferometer,
    published_three_factor_product,
)
from bellsim.exceptions import InvalidInputError
from bellsim.schemas.interferometer import BeamSplitterResponse, DecompositionResponse
from bellsim.services.tables import output_stream

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("decompose", help="Reck decomposition of a detector matrix.")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--n", type=int, help="Built-in detector for this number sum.")
    source.add_argument("--interferometer", help="JSON file with a detector matrix.")
    source.add_argument("--published", action="store_true", help="Three-factor product for number sum 2 as displayed.")
    add_out_flag(parser)
    parser.set_defaults(handler=run)


def _source(args: argparse.Namespace) -> Interferometer:
    if args.interferometer:
        return load_interferometer(args.interferometer)
    if args.published:
        return Interferometer(published_three_factor_product())
    if args.n is None:
        raise InvalidInputError("decompose needs --n, --interferometer or --published")
    return builtin_detector(args.n)


def run(args: argparse.Namespace) -> int:
    itf = _source(args)
    dec = decompose_reck(itf)
    error = float(np.abs(dec.reconstruct() - itf.U).max())
    response = DecompositionResponse(
        M=dec.M,
        rotations=[BeamSplitterResponse.model_validate(rot) for rot in dec.rotations],
        phases_re=dec.phases.real.tolist(),
        phases_im=dec.phases.imag.tolist(),
        reconstruction_error=error,
    )
    logger.info("Decomposed M=%d interferometer into %d beam splitters", dec.M, len(dec.rotations))
    with output_stream(args.out) as out:
        json.dump(response.model_dump(), out, indent=2)
        out.write("\n")
    return 0
