"""M-портовый линейно-оптический интерферометр детектора Белла.

Соглашение о матрице: a_i = Σ_j U_ij b_j (картина Гейзенберга), поэтому
операторы рождения входных мод преобразуются через U*:
a_i† = Σ_j U*_ij b_j†. Сигнальные входы - моды 0 и 1, остальные входы
(анциллы) в вакууме.
"""
from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Dict, List, Union

import numpy as np
from pydantic import ValidationError
from scipy.special import factorial

from bellsim.core.fock import NumberDistribution, enumerate_sector
from bellsim.exceptions import InvalidInputError
from bellsim.schemas.interferometer import InterferometerFile

logger = logging.getLogger(__name__)

UNITARY_TOLERANCE = 1e-10

# Сектор N: распределение n -> вектор (B_0[n], ..., B_N[n])
BCoefficients = Dict[NumberDistribution, np.ndarray]


@dataclass
class Interferometer:
    U: np.ndarray
    _b_cache: Dict[int, BCoefficients] = field(default_factory=dict, repr=False, compare=False)
    # sweep считает точки в пуле потоков, кэш общий
    _b_lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        self.U = np.array(self.U, dtype=complex)
        if self.U.ndim != 2 or self.U.shape[0] != self.U.shape[1]:
            raise InvalidInputError(f"interferometer matrix must be square, got shape {self.U.shape}")
        if self.U.shape[0] < 2:
            raise InvalidInputError("interferometer needs at least the two signal modes")
        if not np.allclose(self.U.conj().T @ self.U, np.eye(self.M), atol=UNITARY_TOLERANCE, rtol=0):
            raise InvalidInputError("The input matrix is not unitary")

    @property
    def M(self) -> int:
        return self.U.shape[0]

    @property
    def input_modes(self) -> tuple:
        return (0, 1)

    @property
    def ancilla_count(self) -> int:
        return self.M - 2

    def with_input_phase(self, phase: complex) -> "Interferometer":
        """Фазовый сдвиг a₂ → phase·a₂ на втором сигнальном входе."""
        U = self.U.copy()
        U[1] = U[1] * np.conj(phase)
        return Interferometer(U)


# --- Встроенные детекторы ---
def _beam_splitter_50_50() -> np.ndarray:
    s2 = np.sqrt(2)
    return np.array([[1 / s2, -1 / s2], [1 / s2, 1 / s2]], dtype=complex)


def _three_factors():
    s2, s3, s5, s6 = np.sqrt([2.0, 3.0, 5.0, 6.0])
    outer = np.array([[1 / s2, 0, -1 / s2], [0, 1, 0], [1 / s2, 0, 1 / s2]], dtype=complex)
    middle = np.array([[1, 0, 0], [0, 2 / s6, -1 / s3], [0, (1 + 1j) / s6, (1 + 1j) / s3]], dtype=complex)
    inner = np.array(
        [[1, 0, 0], [0, s3 * (3 + 1j) / (4 * s5), -(3 + 1j) / 4], [0, s5 / (2 * s2), s3 / (2 * s2)]],
        dtype=complex,
    )
    return outer, middle, inner


def published_three_factor_product() -> np.ndarray:
    """Произведение трёх множителей Ñ=2 в том виде, как они выписаны."""
    outer, middle, inner = _three_factors()
    return outer @ middle @ inner


def _selective_three_factor_detector() -> np.ndarray:
    # Те же множители: блок внутреннего перенесён на моды (0,1) и сопряжён,
    # моды циклически перенумерованы, второй вход сдвинут на π.
    # Только такая расстановка выделяет |φ₋(2,0)⟩ при n^cnt = (1,1,0).
    outer, middle, inner = _three_factors()
    perm = [1, 2, 0]
    inner_moved = inner[np.ix_(perm, perm)].conj()
    U = (outer @ middle @ inner_moved)[np.ix_(perm, perm)]
    U[1] = -U[1]
    return U


def builtin_detector(N_tilde: int) -> Interferometer:
    """Детектор из каталога: Ñ=1 (M=2, светоделитель 50:50) или Ñ=2 (M=3)."""
    if N_tilde == 1:
        return Interferometer(_beam_splitter_50_50())
    if N_tilde == 2:
        return Interferometer(_selective_three_factor_detector())
    raise InvalidInputError(f"no built-in detector for N_tilde={N_tilde}; supported: 1, 2")


# --- Коэффициенты B ---
def _prefactor(dist: NumberDistribution, N: int, k: int) -> float:
    return float(np.sqrt(np.prod(factorial(dist, exact=False))) / np.sqrt(factorial(N - k) * factorial(k)))


def _multiply_linear(poly: Dict[NumberDistribution, complex], linear: np.ndarray) -> Dict[NumberDistribution, complex]:
    out: Dict[NumberDistribution, complex] = {}
    for exps, c in poly.items():
        for j, u in enumerate(linear):
            if u == 0:
                continue
            bumped = exps[:j] + (exps[j] + 1,) + exps[j + 1:]
            out[bumped] = out.get(bumped, 0j) + c * u
    return out


def compute_b_coefficients(itf: Interferometer, N: int) -> BCoefficients:
    """B_k[n] через разложение (Σ_j U*_1j x_j)^{N−k} (Σ_j U*_2j x_j)^k."""
    if N < 0:
        raise InvalidInputError(f"sector must be nonnegative, got {N}")
    with itf._b_lock:
        cached = itf._b_cache.get(N)
        if cached is None:
            cached = _fill_b_coefficients(itf, N)
            itf._b_cache[N] = cached
    return cached


def _fill_b_coefficients(itf: Interferometer, N: int) -> BCoefficients:
    row1, row2 = itf.U[0].conj(), itf.U[1].conj()
    sector = enumerate_sector(itf.M, N)
    result = {dist: np.zeros(N + 1, dtype=complex) for dist in sector}
    for k in range(N + 1):
        poly = {tuple([0] * itf.M): 1.0 + 0j}
        for _ in range(N - k):
            poly = _multiply_linear(poly, row1)
        for _ in range(k):
            poly = _multiply_linear(poly, row2)
        for dist, c in poly.items():
            result[dist][k] = c * _prefactor(dist, N, k)

    for vec in result.values():
        vec.setflags(write=False)
    logger.debug("B coefficients: M=%d, N=%d, %d distributions", itf.M, N, len(result))
    return result


def compute_b_coefficients_by_tuples(itf: Interferometer, N: int) -> BCoefficients:
    """Тот же B_k[n], но прямой суммой по наборам индексов (j_1, ..., j_N)."""
    row1, row2 = itf.U[0].conj(), itf.U[1].conj()
    result = {dist: np.zeros(N + 1, dtype=complex) for dist in enumerate_sector(itf.M, N)}
    for k in range(N + 1):
        rows = [row1] * (N - k) + [row2] * k
        for indices in product(range(itf.M), repeat=N):
            amp = 1.0 + 0j
            for row, j in zip(rows, indices):
                amp *= row[j]
            dist = tuple(int(c) for c in np.bincount(np.array(indices, dtype=int), minlength=itf.M))
            result[dist][k] += amp
        for dist in result:
            result[dist][k] *= _prefactor(dist, N, k)
    return result


# --- Разложение Река ---
@dataclass(frozen=True)
class BeamSplitterRotation:
    """Двухмодовое вращение на модах (m, m+1): угол theta, фаза phi."""

    m: int
    n: int
    theta: float
    phi: float

    @property
    def transmissivity(self) -> float:
        return float(np.cos(self.theta) ** 2)

    def matrix(self, M: int) -> np.ndarray:
        mat = np.identity(M, dtype=complex)
        mat[self.m, self.m] = np.exp(1j * self.phi) * np.cos(self.theta)
        mat[self.m, self.n] = -np.sin(self.theta)
        mat[self.n, self.m] = np.exp(1j * self.phi) * np.sin(self.theta)
        mat[self.n, self.n] = np.cos(self.theta)
        return mat


@dataclass(frozen=True)
class ReckDecomposition:
    M: int
    rotations: List[BeamSplitterRotation]
    phases: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """U = D·T_K ⋯ T_1."""
        qrec = np.identity(self.M, dtype=complex)
        for rot in self.rotations:
            qrec = rot.matrix(self.M) @ qrec
        return np.diag(self.phases) @ qrec


def decompose_reck(itf: Interferometer, tol: float = 1e-12) -> ReckDecomposition:
    """Треугольное разложение на светоделители соседних мод и фазы."""
    W = itf.U.copy()
    M = itf.M
    rotations: List[BeamSplitterRotation] = []
    for row in range(M - 1, 0, -1):
        for col in range(row):
            a, b = W[row, col], W[row, col + 1]
            theta = float(np.arctan2(abs(a), abs(b)))
            phi = float(np.angle(a) - np.angle(b)) if abs(a) > tol else 0.0
            rot = BeamSplitterRotation(col, col + 1, theta, phi)
            if abs(theta) < tol and abs(np.exp(1j * phi) - 1) < tol:
                continue
            W = W @ rot.matrix(M).conj().T
            rotations.append(rot)
    phases = np.diag(W).copy()
    residual = np.abs(W - np.diag(phases)).max()
    logger.debug("Reck decomposition: %d rotations, off-diagonal residual %.2e", len(rotations), residual)
    return ReckDecomposition(M=M, rotations=rotations, phases=phases)


# --- Файлы интерферометров ---
def load_interferometer(path: Union[str, Path]) -> Interferometer:
    """Читает JSON {"M": int, "U_re": [[...]], "U_im": [[...]]}."""
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InvalidInputError(f"interferometer file not found: {path}")
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"{path}: line {e.lineno}: {e.msg}")
    try:
        spec = InterferometerFile.model_validate(raw)
    except ValidationError as e:
        lines = [f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()]
        raise InvalidInputError(f"{path}: " + "; ".join(lines))
    return Interferometer(spec.matrix())


def dump_interferometer(itf: Interferometer) -> dict:
    return InterferometerFile.from_matrix(itf.U).model_dump()
