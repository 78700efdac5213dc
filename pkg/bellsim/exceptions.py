from typing import Optional


class BellSimError(Exception):
    """Базовая ошибка симулятора: код выхода CLI и описание."""

    exit_code: int = 1

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class InvalidInputError(BellSimError, ValueError):
    exit_code = 2


class ContractViolationError(BellSimError):
    exit_code = 2


class DivisionSingularError(BellSimError, ZeroDivisionError):
    exit_code = 2


class DegenerateManipulationError(BellSimError):
    exit_code = 2


class SelectivityError(BellSimError):
    exit_code = 2


class VerificationError(BellSimError):
    exit_code = 3
