"""Учёт фоковского пространства: распределения чисел фотонов, секторы,
двухмодовые базисы Белла, фазовые состояния Пегга–Барнетта."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import List, Tuple

import numpy as np

from bellsim.exceptions import InvalidInputError

# Распределение (n_1, ..., n_M) по выходным модам
NumberDistribution = Tuple[int, ...]


def total(dist: NumberDistribution) -> int:
    return int(sum(dist))


def enumerate_sector(M: int, N: int) -> List[NumberDistribution]:
    """Все слабые композиции N на M частей, лексикографически по убыванию."""
    if M < 1:
        raise InvalidInputError(f"number of modes must be positive, got {M}")
    if N < 0:
        raise InvalidInputError(f"photon number must be nonnegative, got {N}")
    # Звёзды и перегородки: позиции M−1 перегородок среди N+M−1 мест
    out = []
    for bars in combinations(range(N + M - 1), M - 1):
        edges = (-1,) + bars + (N + M - 1,)
        out.append(tuple(edges[i + 1] - edges[i] - 1 for i in range(M)))
    out.reverse()
    return out


def count_click_pattern(M: int, N_tilde: int) -> NumberDistribution:
    """Ожидаемый отсчёт n^cnt = (1, ..., 1, 0, ..., 0) с Ñ единицами."""
    if not 0 <= N_tilde <= M:
        raise InvalidInputError(f"click pattern needs 0 <= N_tilde <= M, got N_tilde={N_tilde}, M={M}")
    return tuple([1] * N_tilde + [0] * (M - N_tilde))


@dataclass(frozen=True)
class TwoModeBasisIndex:
    """|(N,k)⟩ = |N−k⟩₁|k⟩₂."""

    number_sum: int
    k: int

    def __post_init__(self):
        if not 0 <= self.k <= self.number_sum:
            raise InvalidInputError(f"basis index needs 0 <= k <= N, got N={self.number_sum}, k={self.k}")


def two_mode_basis(N_max: int) -> List[TwoModeBasisIndex]:
    return [TwoModeBasisIndex(N, k) for N in range(N_max + 1) for k in range(N + 1)]


def omega(N: int) -> complex:
    return complex(np.exp(2j * np.pi / (N + 1)))


def normalization(N: int, r: float) -> float:
    """D(N,r): нормировка обобщённого состояния Белла, D(N,1) = 1/√(N+1)."""
    if r <= 0:
        raise InvalidInputError(f"scale r must be positive, got {r}")
    # Сумма вместо дроби (1−r²)/(1−r^{2(N+1)}): без особенности при r = 1
    return float(1.0 / np.sqrt(np.sum(np.float64(r) ** (2 * np.arange(N + 1)))))


@dataclass(frozen=True)
class BellAmplitudes:
    number_sum: int
    phase_index: int
    scale: float
    d: np.ndarray

    def vector(self) -> np.ndarray:
        return np.array(self.d, dtype=complex)


def _check_phase_index(N: int, m: int):
    if N < 0:
        raise InvalidInputError(f"number sum must be nonnegative, got {N}")
    if not 0 <= m <= N:
        raise InvalidInputError(f"phase index m must satisfy 0 <= m <= N, got m={m}, N={N}")


def bell_amplitudes(N: int, m: int = 0, r: float = 1.0) -> BellAmplitudes:
    """Амплитуды d_k = D(N,r) r^k ω^{−mk} состояния |φ₋(N,m,r)⟩."""
    _check_phase_index(N, m)
    k = np.arange(N + 1)
    d = normalization(N, r) * np.float64(r) ** k * omega(N) ** (-m * k)
    d.setflags(write=False)
    return BellAmplitudes(number_sum=N, phase_index=m, scale=r, d=d)


def phase_state(N: int, m: int) -> np.ndarray:
    """Фазовое состояние: амплитуда ω^{mn}/√(N+1) при |n⟩."""
    _check_phase_index(N, m)
    n = np.arange(N + 1)
    return omega(N) ** (m * n) / np.sqrt(N + 1)


def sector_slices(N_max: int) -> List[slice]:
    """Срезы блоков с фиксированной суммой N в базисе two_mode_basis."""
    slices, start = [], 0
    for N in range(N_max + 1):
        slices.append(slice(start, start + N + 1))
        start += N + 1
    return slices


def build_number_sum_operator(N_max: int) -> np.ndarray:
    return np.diag([float(idx.number_sum) for idx in two_mode_basis(N_max)]).astype(complex)


def build_phase_difference_operator(N_max: int) -> np.ndarray:
    """Оператор разности фаз, блочно-диагональный по сумме чисел.

    В секторе N собственные векторы - |φ₋(N,m)⟩ с собственными значениями
    2πm/(N+1).
    """
    if N_max < 0:
        raise InvalidInputError(f"N_max must be nonnegative, got {N_max}")
    dim = (N_max + 1) * (N_max + 2) // 2
    op = np.zeros((dim, dim), dtype=complex)
    for N, block in enumerate(sector_slices(N_max)):
        for m in range(N + 1):
            d = bell_amplitudes(N, m).vector()
            op[block, block] += 2 * np.pi * m / (N + 1) * np.outer(d, d.conj())
    return op
