"""Тесты сценариев, таблиц и кривых."""
import io
import json
from pathlib import Path

import numpy as np
import pytest

from bellsim.core.detector import bell_spec, confidence_expansion
from bellsim.core.poly import ExpansionOrder
from bellsim.core.teleport import InputReading, ManipulationLabel, fidelity_expansion, scissors_spec
from bellsim.exceptions import InvalidInputError
from bellsim.schemas.results import CurvePoint
from bellsim.services.curves import confidence_curve, fidelity_curve, grid_points
from bellsim.services.scenarios import build_spec, load_scenario, parse_scenario
from bellsim.services.tables import coefficient_table, format_number, write_coefficients_csv, write_curve_csv

ORDER = ExpansionOrder()
SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


class TestScenarios:
    """Разбор и проверка сценариев"""

    def test_defaults(self):
        scenario = parse_scenario({"manipulation": "msv_prep", "n": 1, "lam": 0.25})
        assert scenario.reading == InputReading.FULL
        assert scenario.order == "4,1"
        assert scenario.success_probability is True
        assert not scenario.swapped

    def test_alpha_phase(self):
        scenario = parse_scenario({"manipulation": "scissors", "n": 1, "alpha": 2.0, "alpha_phase": np.pi / 2})
        assert scenario.alpha_complex == pytest.approx(2j)

    @pytest.mark.parametrize("raw, field", [
        ({"manipulation": "reversal", "n": 1}, "alpha"),
        ({"manipulation": "generalized_bell_prep", "n": 1, "lam": 0.25}, "lam_prime"),
        ({"manipulation": "msv_prep", "n": 2}, "lam"),
        ({"manipulation": "scissors", "n": 3, "alpha": 1.0}, "n"),
        ({"manipulation": "msv_prep", "n": 1, "lam": 1.2}, "lam"),
        ({"manipulation": "custom", "n": 1}, "custom"),
        ({"manipulation": "scissors", "n": 1, "alpha": 1.0, "eta": [1.5]}, "eta"),
    ])
    def test_invalid(self, raw, field):
        with pytest.raises(InvalidInputError, match=field):
            parse_scenario(raw)

    def test_top_level_must_be_object(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(InvalidInputError, match="object"):
            load_scenario(path)

    def test_build_generalized_bell(self):
        scenario = parse_scenario({"manipulation": "generalized_bell_prep", "n": 1, "lam": 0.125, "lam_prime": 0.25})
        spec = build_spec(scenario, ORDER)
        assert spec.label == ManipulationLabel.GENERALIZED_BELL_PREP
        assert spec.resource.weights[1] / spec.resource.weights[0] == pytest.approx(0.25)
        assert spec.input_amplitudes.shape[1] > 1

    def test_build_vacuum_column_reading(self):
        scenario = parse_scenario({"manipulation": "msv_prep", "n": 2, "lam": 0.25, "reading": "unmeasured_vacuum"})
        spec = build_spec(scenario, ORDER)
        assert spec.input_amplitudes.shape[1] == 1

    def test_sample_generalized_bell_scenario_reading(self):
        scenario = load_scenario(SCENARIOS / "generalized_bell_n1.json")
        assert scenario.reading == InputReading.UNMEASURED_VACUUM


class TestTables:
    """Вывод коэффициентов"""

    def test_format_number(self):
        assert format_number(None) == ""
        assert format_number(0.5625) == "0.5625"

    def test_coefficient_table(self):
        table = coefficient_table("confidence", "phi_minus(1,0)", 1, confidence_expansion(bell_spec(1), ORDER))
        assert len(table.coefficients) == 9
        assert table.value(0, 0) is None
        assert table.value(1, 0) == pytest.approx(3)
        assert table.value(5, 0) is None

    def test_coefficients_csv(self):
        expansion = fidelity_expansion(scissors_spec(1, np.sqrt(3)), ORDER)
        table = coefficient_table("fidelity", "scissors", 1, expansion)
        stream = io.StringIO()
        write_coefficients_csv(table, stream)
        lines = stream.getvalue().splitlines()
        assert lines[0] == "a,b,f"
        assert lines[1].startswith("0,1,")
        assert len(lines) == 10

    def test_json_round_trip(self):
        table = coefficient_table("confidence", "phi_minus(2,0)", 2, confidence_expansion(bell_spec(2), ORDER))
        payload = json.loads(table.model_dump_json())
        assert payload["n"] == 2
        assert payload["kind"] == "confidence"

    def test_curve_csv(self):
        stream = io.StringIO()
        write_curve_csv([CurvePoint(eta=0.9, nu=0.0, value=0.97, dense_value=0.96)], stream)
        header, row = stream.getvalue().splitlines()
        assert header == "eta,nu,value,dense_value,gap,truncation_quality,success_probability"
        assert row.split(",")[4] == format_number(abs(0.97 - 0.96))
        assert row.endswith(",,")


class TestCurves:
    """Выборки на сетке"""

    def test_grid_order(self):
        assert grid_points([1.0, 0.9], [0.0, 0.1]) == [(1.0, 0.0), (0.9, 0.0), (1.0, 0.1), (0.9, 0.1)]

    def test_threads_keep_order(self):
        bell = bell_spec(1)
        expansion = confidence_expansion(bell, ORDER)
        points = grid_points([1.0, 0.9, 0.8], [0.0, 1e-4])
        serial = confidence_curve(bell, expansion, points, dense=True)
        pooled = confidence_curve(bell, expansion, points, dense=True, max_workers=3)
        assert [p.model_dump() for p in serial] == [p.model_dump() for p in pooled]

    def test_fidelity_curve(self):
        spec = scissors_spec(1, np.sqrt(3))
        curve = fidelity_curve(spec, fidelity_expansion(spec, ORDER), [(1.0, 0.0), (0.9, 0.0)], dense=True)
        assert curve[0].value == pytest.approx(1.0)
        assert curve[1].value < 1.0
        assert curve[1].gap < 2e-4
        assert all(p.success_probability > 0 for p in curve)
