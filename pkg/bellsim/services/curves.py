"""Выборки C(η, ν) и F(η, ν) на сетке, последовательно или в пуле потоков."""
import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import product
from typing import Callable, List, Optional, Sequence, Tuple

from bellsim.core.detector import BellSpec, DetectorNoise
from bellsim.core.oracle import dense_confidence, dense_fidelity
from bellsim.core.poly import BivariatePoly
from bellsim.core.teleport import ManipulationSpec, success_probability, truncation_quality
from bellsim.schemas.results import CurvePoint

logger = logging.getLogger(__name__)

GridPoint = Tuple[float, float]


def grid_points(etas: Sequence[float], nus: Sequence[float]) -> List[GridPoint]:
    """Сначала ν, затем η: порядок строк CSV."""
    return [(eta, nu) for nu, eta in product(nus, etas)]


def _evaluate(points: List[GridPoint], evaluate: Callable[[GridPoint], CurvePoint], max_workers: int) -> List[CurvePoint]:
    if max_workers <= 1 or len(points) <= 1:
        return [evaluate(p) for p in points]
    logger.info("Evaluating %d grid points with %d threads", len(points), max_workers)
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        # map сохраняет порядок точек
        return list(executor.map(evaluate, points))


def confidence_curve(
    bell: BellSpec,
    expansion: BivariatePoly,
    points: List[GridPoint],
    dense: bool = False,
    max_workers: int = 1,
) -> List[CurvePoint]:
    def evaluate(point: GridPoint) -> CurvePoint:
        eta, nu = point
        deta = 1.0 - eta
        noise = DetectorNoise(eta, nu)
        return CurvePoint(
            eta=eta,
            nu=nu,
            value=expansion.evaluate(deta, nu).real,
            dense_value=dense_confidence(bell, noise) if dense else None,
            truncation_quality=truncation_quality(expansion, deta, nu),
        )

    return _evaluate(points, evaluate, max_workers)


def fidelity_curve(
    spec: ManipulationSpec,
    expansion: BivariatePoly,
    points: List[GridPoint],
    dense: bool = False,
    with_probability: bool = True,
    max_workers: int = 1,
    N_max: Optional[int] = None,
) -> List[CurvePoint]:
    def evaluate(point: GridPoint) -> CurvePoint:
        eta, nu = point
        deta = 1.0 - eta
        noise = DetectorNoise(eta, nu)
        return CurvePoint(
            eta=eta,
            nu=nu,
            value=expansion.evaluate(deta, nu).real,
            dense_value=dense_fidelity(spec, noise, N_max) if dense else None,
            truncation_quality=truncation_quality(expansion, deta, nu),
            success_probability=success_probability(spec, noise, N_max) if with_probability else None,
        )

    return _evaluate(points, evaluate, max_workers)
