import pytest


@pytest.fixture
def tol():
    """Допуск сравнения чисел с плавающей точкой."""
    return 1e-10


@pytest.fixture
def table_tol():
    """Допуск сравнения с табличными рациональными коэффициентами."""
    return 1e-9
