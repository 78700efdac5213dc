"""Вывод таблиц коэффициентов (JSON) и кривых (CSV)."""
import csv
import json
import logging
import sys
from contextlib import contextmanager
from typing import IO, Iterable, List, Optional

from bellsim.core.poly import BivariatePoly, deficit_coefficients
from bellsim.schemas.results import CoefficientRow, CoefficientTableResponse, CurvePoint

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 15

CURVE_COLUMNS = ["eta", "nu", "value", "dense_value", "gap", "truncation_quality", "success_probability"]


def format_number(x) -> str:
    if x is None:
        return ""
    return f"{x:.{SIGNIFICANT_DIGITS}g}"


def coefficient_table(kind: str, label: str, n: int, expansion: BivariatePoly) -> CoefficientTableResponse:
    """Строки (a, b) разложения 1 − p без члена (0,0)."""
    deficit = deficit_coefficients(expansion)
    rows: List[CoefficientRow] = []
    for a in range(expansion.order.max_deta + 1):
        for b in range(expansion.order.max_nu + 1):
            if (a, b) == (0, 0):
                continue
            rows.append(CoefficientRow(a=a, b=b, value=float(deficit[a, b])))
    return CoefficientTableResponse(kind=kind, label=label, n=n, order=str(expansion.order), coefficients=rows)


def write_coefficients_csv(table: CoefficientTableResponse, stream: IO[str]):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["a", "b", "q" if table.kind == "confidence" else "f"])
    for row in table.coefficients:
        writer.writerow([row.a, row.b, format_number(row.value)])


def write_coefficients_json(table: CoefficientTableResponse, stream: IO[str]):
    json.dump(table.model_dump(), stream, indent=2)
    stream.write("\n")


def write_curve_csv(points: Iterable[CurvePoint], stream: IO[str]):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CURVE_COLUMNS)
    for p in points:
        writer.writerow([
            format_number(p.eta),
            format_number(p.nu),
            format_number(p.value),
            format_number(p.dense_value),
            format_number(p.gap),
            format_number(p.truncation_quality),
            format_number(p.success_probability),
        ])


@contextmanager
def output_stream(path: Optional[str]):
    """Файл по --out или stdout."""
    if not path:
        yield sys.stdout
        return
    with open(path, "w", newline="", encoding="utf-8") as f:
        yield f
    logger.info("Results written to %s", path)
