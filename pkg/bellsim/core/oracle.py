"""Независимая проверка: плотные операторы при численных (η, ν), без рядов."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from bellsim.core.detector import BellSpec, DetectorNoise, p_pd_numeric
from bellsim.core.fock import enumerate_sector, sector_slices
from bellsim.core.interferometer import compute_b_coefficients
from bellsim.core.teleport import ManipulationSpec, outcome_amplitudes
from bellsim.exceptions import DegenerateManipulationError

logger = logging.getLogger(__name__)

HERMITIAN_TOLERANCE = 1e-10
DEFAULT_GUARD_SECTORS = 6


@dataclass(frozen=True)
class DenseOperator:
    """Оператор на усечённом базисе {|(N,k)⟩ : N ≤ N_max}."""

    matrix: np.ndarray
    N_max: int

    def block(self, N: int) -> np.ndarray:
        s = sector_slices(self.N_max)[N]
        return self.matrix[s, s]

    def is_hermitian(self, atol: float = HERMITIAN_TOLERANCE) -> bool:
        return bool(np.allclose(self.matrix, self.matrix.conj().T, atol=atol, rtol=0))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix).min())

    def cross_sector_norm(self) -> float:
        """Наибольший модуль элементов между разными секторами."""
        off = self.matrix.copy()
        for s in sector_slices(self.N_max):
            off[s, s] = 0
        return float(np.abs(off).max()) if off.size else 0.0

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def default_n_max(N_tilde: int) -> int:
    return N_tilde + DEFAULT_GUARD_SECTORS


def dense_gamma(bell: BellSpec, noise: DetectorNoise, N_max: Optional[int] = None) -> DenseOperator:
    """POM Γ детектора Белла с точными экспоненциальными множителями."""
    N_max = default_n_max(bell.N_tilde) if N_max is None else N_max
    dim = (N_max + 1) * (N_max + 2) // 2
    gamma = np.zeros((dim, dim), dtype=complex)
    for N, s in enumerate(sector_slices(N_max)):
        for dist, b in compute_b_coefficients(bell.interferometer, N).items():
            if not b.any():
                continue
            gamma[s, s] += p_pd_numeric(dist, bell.N_tilde, noise) * np.outer(b.conj(), b)
    logger.debug("dense gamma: N_tilde=%d, N_max=%d, dim=%d", bell.N_tilde, N_max, dim)
    return DenseOperator(matrix=gamma, N_max=N_max)


def dense_confidence(bell: BellSpec, noise: DetectorNoise, N_max: Optional[int] = None) -> float:
    gamma = dense_gamma(bell, noise, N_max)
    d = bell.d
    hit = float(np.vdot(d, gamma.block(bell.N_tilde) @ d).real)
    return hit / gamma.trace()


def dense_fidelity(spec: ManipulationSpec, noise: DetectorNoise, N_max: Optional[int] = None) -> float:
    """Три следа формулы точности, посчитанные напрямую."""
    bell = spec.bell
    N_max = default_n_max(bell.N_tilde) if N_max is None else N_max
    psi = outcome_amplitudes(spec, bell.n_cnt)
    psi_norm = float(np.vdot(psi, psi).real)
    if psi_norm < 1e-28:
        raise DegenerateManipulationError(f"{spec.label.value}: ideal outcome has zero amplitude")

    overlap, total = 0.0, 0.0
    for N in range(N_max + 1):
        for dist in enumerate_sector(bell.M, N):
            u = outcome_amplitudes(spec, dist)
            weight = float(np.vdot(u, u).real)
            if weight == 0.0:
                continue
            prob = p_pd_numeric(dist, bell.N_tilde, noise)
            overlap += prob * abs(np.vdot(u, psi)) ** 2
            total += prob * weight
    return overlap / (total * psi_norm)
