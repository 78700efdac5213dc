from typing import List, Optional

from pydantic import BaseModel


class CoefficientRow(BaseModel):
    a: int
    b: int
    value: float # q^(a,b) или f^(a,b) разложения 1 − C, 1 − F


class CoefficientTableResponse(BaseModel):
    kind: str # "confidence" / "fidelity"
    label: str
    n: int
    order: str
    coefficients: List[CoefficientRow] = []

    def value(self, a: int, b: int) -> Optional[float]:
        for row in self.coefficients:
            if row.a == a and row.b == b:
                return row.value
        return None


class CurvePoint(BaseModel):
    eta: float
    nu: float
    value: float
    dense_value: Optional[float] = None
    truncation_quality: Optional[float] = None
    success_probability: Optional[float] = None

    @property
    def gap(self) -> Optional[float]:
        if self.dense_value is None:
            return None
        return abs(self.value - self.dense_value)


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class VerifyReport(BaseModel):
    checks: List[CheckResult] = []

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]
