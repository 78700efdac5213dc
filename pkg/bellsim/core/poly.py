"""Усечённые многочлены от двух переменных (δη, ν).

Все вероятности и отношения (достоверность, точность) хранятся как
многочлены с комплексными коэффициентами c[a][b] при δη^a ν^b; члены
выше заданного порядка отбрасываются.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.signal import convolve2d

from bellsim.exceptions import ContractViolationError, DivisionSingularError, InvalidInputError

logger = logging.getLogger(__name__)

DIVISION_TOLERANCE = 1e-12

Scalar = Union[int, float, complex]


@dataclass(frozen=True)
class ExpansionOrder:
    max_deta: int = 4
    max_nu: int = 1

    def __post_init__(self):
        if self.max_deta < 0 or self.max_nu < 0:
            raise InvalidInputError(f"expansion order must be nonnegative, got ({self.max_deta},{self.max_nu})")

    @classmethod
    def parse(cls, text: str) -> "ExpansionOrder":
        """Разбирает строку вида "4,1"."""
        try:
            a, b = (int(part) for part in text.split(","))
        except ValueError:
            raise InvalidInputError(f"order must look like 'A,B', got {text!r}")
        return cls(a, b)

    @property
    def shape(self) -> tuple:
        return (self.max_deta + 1, self.max_nu + 1)

    def __str__(self) -> str:
        return f"{self.max_deta},{self.max_nu}"


class BivariatePoly:
    """Многочлен от (δη, ν), усечённый до ExpansionOrder.

    Значения неизменяемы: арифметика возвращает новые объекты, массив
    коэффициентов помечен только для чтения.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: ExpansionOrder, coeffs=None):
        grid = np.zeros(order.shape, dtype=complex)
        if coeffs is not None:
            src = np.asarray(coeffs, dtype=complex)
            rows = min(src.shape[0], grid.shape[0])
            cols = min(src.shape[1], grid.shape[1])
            grid[:rows, :cols] = src[:rows, :cols]
        grid.setflags(write=False)
        self.order = order
        self.coeffs = grid

    # --- Конструкторы ---
    @classmethod
    def zero(cls, order: ExpansionOrder) -> "BivariatePoly":
        return cls(order)

    @classmethod
    def constant(cls, value: Scalar, order: ExpansionOrder) -> "BivariatePoly":
        return cls.monomial(0, 0, order, value)

    @classmethod
    def one(cls, order: ExpansionOrder) -> "BivariatePoly":
        return cls.constant(1.0, order)

    @classmethod
    def monomial(cls, a: int, b: int, order: ExpansionOrder, coeff: Scalar = 1.0) -> "BivariatePoly":
        """coeff·δη^a ν^b; за пределами порядка даёт ноль."""
        grid = np.zeros(order.shape, dtype=complex)
        if a <= order.max_deta and b <= order.max_nu:
            grid[a, b] = coeff
        return cls(order, grid)

    @classmethod
    def deta(cls, order: ExpansionOrder) -> "BivariatePoly":
        return cls.monomial(1, 0, order)

    @classmethod
    def nu(cls, order: ExpansionOrder) -> "BivariatePoly":
        return cls.monomial(0, 1, order)

    # --- Доступ ---
    def coefficient(self, a: int, b: int) -> complex:
        if a > self.order.max_deta or b > self.order.max_nu:
            return 0j
        return complex(self.coeffs[a, b])

    def evaluate(self, deta: float, nu: float) -> complex:
        return complex(npoly.polyval2d(deta, nu, self.coeffs))

    def conj(self) -> "BivariatePoly":
        return BivariatePoly(self.order, self.coeffs.conj())

    def is_close(self, other: "BivariatePoly", atol: float = 1e-12) -> bool:
        self._check_order(other)
        return bool(np.allclose(self.coeffs, other.coeffs, atol=atol, rtol=0))

    # --- Арифметика ---
    def _check_order(self, other: "BivariatePoly"):
        if self.order != other.order:
            raise ContractViolationError(f"expansion order mismatch: ({self.order}) vs ({other.order})")

    def _coerce(self, other) -> "BivariatePoly":
        if isinstance(other, BivariatePoly):
            self._check_order(other)
            return other
        return BivariatePoly.constant(other, self.order)

    def __add__(self, other) -> "BivariatePoly":
        other = self._coerce(other)
        return BivariatePoly(self.order, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self) -> "BivariatePoly":
        return BivariatePoly(self.order, -self.coeffs)

    def __sub__(self, other) -> "BivariatePoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "BivariatePoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "BivariatePoly":
        if isinstance(other, BivariatePoly):
            return poly_mul(self, other)
        return BivariatePoly(self.order, self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "BivariatePoly":
        if isinstance(other, BivariatePoly):
            return poly_div(self, other)
        return BivariatePoly(self.order, self.coeffs / other)

    def __rtruediv__(self, other) -> "BivariatePoly":
        return poly_div(self._coerce(other), self)

    def __pow__(self, power: int) -> "BivariatePoly":
        result = BivariatePoly.one(self.order)
        for _ in range(power):
            result = result * self
        return result

    def __repr__(self) -> str:
        terms = []
        for a in range(self.order.max_deta + 1):
            for b in range(self.order.max_nu + 1):
                c = self.coeffs[a, b]
                if abs(c) > 1e-15:
                    terms.append(f"({c:.6g})·δη^{a}ν^{b}")
        return "BivariatePoly(" + (" + ".join(terms) or "0") + ")"


def poly_mul(a: BivariatePoly, b: BivariatePoly) -> BivariatePoly:
    """Произведение с отбрасыванием членов выше порядка."""
    a._check_order(b)
    full = convolve2d(a.coeffs, b.coeffs)
    return BivariatePoly(a.order, full)


def poly_div(num: BivariatePoly, den: BivariatePoly) -> BivariatePoly:
    """Деление рядов: q·den = num до хранимого порядка."""
    num._check_order(den)
    d0 = den.coeffs[0, 0]
    if abs(d0) < DIVISION_TOLERANCE:
        raise DivisionSingularError("series division by a polynomial with vanishing constant term")
    rows, cols = num.order.shape
    q = np.zeros((rows, cols), dtype=complex)
    for a in range(rows):
        for b in range(cols):
            # q[a, b] ещё ноль, поэтому член (0,0) в свёртке не мешает
            acc = num.coeffs[a, b] - np.sum(den.coeffs[: a + 1, : b + 1] * q[a::-1, b::-1])
            q[a, b] = acc / d0
    return BivariatePoly(num.order, q)


def poly_eval(p: BivariatePoly, deta: float, nu: float) -> complex:
    return p.evaluate(deta, nu)


def deficit_coefficients(p: BivariatePoly) -> np.ndarray:
    """Коэффициенты разложения 1 − p (табличные q^(a,b) и f^(a,b))."""
    return (BivariatePoly.one(p.order) - p).coeffs.real.copy()


def omitted_terms(wide: BivariatePoly, order: ExpansionOrder, deta: float, nu: float) -> complex:
    """Значение членов wide, не входящих в order: оценка ошибки усечения до order."""
    if wide.order.max_deta < order.max_deta or wide.order.max_nu < order.max_nu:
        raise ContractViolationError(f"series of order {wide.order} does not extend order {order}")
    beyond = wide.coeffs.copy()
    beyond[: order.max_deta + 1, : order.max_nu + 1] = 0
    return complex(npoly.polyval2d(deta, nu, beyond))
