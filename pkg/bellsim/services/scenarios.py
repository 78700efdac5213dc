"""Сценарии: JSON-файл → ScenarioCreate → ManipulationSpec."""
import json
import logging
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from bellsim.core.poly import ExpansionOrder
from bellsim.core.teleport import (
    ManipulationLabel,
    ManipulationSpec,
    generalized_bell_prep_spec,
    msv_prep_spec,
    reversal_spec,
    scissors_spec,
)
from bellsim.exceptions import InvalidInputError
from bellsim.schemas.scenario import ScenarioCreate

logger = logging.getLogger(__name__)


def validation_detail(source: str, error: ValidationError) -> str:
    """Одна строка `поле: сообщение` на каждую ошибку pydantic."""
    lines = []
    for err in error.errors():
        field = ".".join(str(p) for p in err["loc"]) or "<root>"
        lines.append(f"{source}: {field}: {err['msg']}")
    return "\n".join(lines)


def parse_scenario(raw: dict, source: str = "<scenario>") -> ScenarioCreate:
    try:
        return ScenarioCreate.model_validate(raw)
    except ValidationError as e:
        raise InvalidInputError(validation_detail(source, e))


def load_scenario(path: Union[str, Path]) -> ScenarioCreate:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise InvalidInputError(f"scenario file not found: {path}")
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}")
    if not isinstance(raw, dict):
        raise InvalidInputError(f"{path}: top-level value must be an object")
    scenario = parse_scenario(raw, str(path))
    logger.info("Loaded scenario %s: %s, N=%d", path, scenario.manipulation.value, scenario.n)
    return scenario


def build_spec(scenario: ScenarioCreate, order: ExpansionOrder) -> ManipulationSpec:
    label = scenario.manipulation
    if label == ManipulationLabel.SCISSORS:
        return scissors_spec(scenario.n, scenario.alpha_complex, order)
    if label == ManipulationLabel.REVERSAL:
        return reversal_spec(scenario.n, scenario.alpha_complex, order)
    if label == ManipulationLabel.GENERALIZED_BELL_PREP:
        r = scenario.lam_prime / scenario.lam
        return generalized_bell_prep_spec(scenario.n, scenario.lam, r, order, scenario.reading)
    if label == ManipulationLabel.MSV_PREP:
        return msv_prep_spec(scenario.n, scenario.lam, scenario.swapped, order, scenario.reading)
    raise InvalidInputError(f"unsupported manipulation: {label.value}")
