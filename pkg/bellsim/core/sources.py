"""Входные состояния и ЭПР-ресурсы.

Двухмодовый ресурс задаётся матрицей E_{l′l} = δ_{l′ s(l)} E_l: столбец l -
число фотонов в моде, уходящей на детектор Белла, строка s(l) - в
оставшейся моде.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import factorial

from bellsim.core.fock import normalization, omega
from bellsim.exceptions import InvalidInputError

NORM_TOLERANCE = 1e-10


@dataclass(frozen=True)
class SingleModeState:
    amplitudes: np.ndarray

    @property
    def n_max(self) -> int:
        return len(self.amplitudes) - 1

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def coherent_state(alpha: complex, n_max: int) -> SingleModeState:
    """Когерентное состояние, усечённое до |n_max⟩."""
    if n_max < 0:
        raise InvalidInputError(f"n_max must be nonnegative, got {n_max}")
    n = np.arange(n_max + 1)
    radius, angle = abs(alpha), np.angle(alpha)
    c = np.exp(-radius ** 2 / 2) * np.float64(radius) ** n * np.exp(1j * angle * n) / np.sqrt(factorial(n))
    return SingleModeState(amplitudes=c)


@dataclass(frozen=True)
class EprMatrix:
    targets: Tuple[int, ...]
    weights: Tuple[complex, ...]
    tail_bound: float = 0.0
    label: str = "custom"

    def __post_init__(self):
        if len(self.targets) != len(self.weights):
            raise InvalidInputError("EPR matrix needs one target per weight")
        support = [s for s, w in zip(self.targets, self.weights) if w != 0]
        if len(set(support)) != len(support):
            raise InvalidInputError("EPR permutation s(l) must be injective")

    @property
    def max_l(self) -> int:
        return len(self.weights) - 1

    def entry(self, l: int) -> Optional[Tuple[int, complex]]:
        """(s(l), E_l) или None за пределами усечения."""
        if l > self.max_l or self.weights[l] == 0:
            return None
        return self.targets[l], self.weights[l]

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(np.array(self.weights)) ** 2))

    @property
    def output_size(self) -> int:
        return max(self.targets) + 1

    def matrix(self, size: Optional[int] = None) -> np.ndarray:
        """Плотная матрица E_{l′l}, обрезанная до size×size."""
        size = size or max(self.output_size, self.max_l + 1)
        E = np.zeros((size, size), dtype=complex)
        for l, (s, w) in enumerate(zip(self.targets, self.weights)):
            if l < size and s < size:
                E[s, l] = w
        return E


def squeezed_vacuum(lam: float, l_max: int) -> EprMatrix:
    """Двухмодовый сжатый вакуум |λ⟩: s(l) = l, E_l = √(1−λ²) λ^l."""
    if not 0.0 <= lam < 1.0:
        raise InvalidInputError(f"squeezing parameter must satisfy 0 <= lambda < 1, got {lam}")
    l = np.arange(l_max + 1)
    weights = np.sqrt(1 - lam ** 2) * np.float64(lam) ** l
    return EprMatrix(
        targets=tuple(int(x) for x in l),
        weights=tuple(complex(w) for w in weights),
        tail_bound=float(lam ** (2 * (l_max + 1))),
        label="squeezed_vacuum",
    )


def generalized_bell_resource(N: int, m: int = 0, r: float = 1.0) -> EprMatrix:
    """|φ₋(N,m,r)⟩ как ресурс: s(l) = N − l, E_l = D(N,r) r^l ω^{−ml}."""
    if not 0 <= m <= N:
        raise InvalidInputError(f"phase index m must satisfy 0 <= m <= N, got m={m}, N={N}")
    if r <= 0:
        raise InvalidInputError(f"scale r must be positive, got {r}")
    l = np.arange(N + 1)
    weights = normalization(N, r) * np.float64(r) ** l * omega(N) ** (-m * l)
    return EprMatrix(
        targets=tuple(int(N - x) for x in l),
        weights=tuple(complex(w) for w in weights),
        label="generalized_bell",
    )


def truncated_msv(N: int) -> EprMatrix:
    """Усечённый максимально сжатый вакуум |λ=1,N⟩."""
    if N < 0:
        raise InvalidInputError(f"N must be nonnegative, got {N}")
    return EprMatrix(
        targets=tuple(range(N + 1)),
        weights=tuple([complex(1 / np.sqrt(N + 1))] * (N + 1)),
        label="truncated_msv",
    )
