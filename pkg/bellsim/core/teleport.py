"""Манипуляции на основе телепортации: ножницы, обращение, приготовление
обобщённых состояний Белла и усечённого максимально сжатого вакуума.

Разводка мод: детектор Белла получает на вход 1 моду 0 ресурса (l фотонов),
на вход 2 - измеряемую моду входного состояния (k фотонов), так что
|(N,k)⟩ = |N−k⟩₁|k⟩₂ и l = N − k. Выходная мода ресурса получает s(l)
фотонов, неизмеряемая мода входа (если есть) - индекс j.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from bellsim.config import settings
from bellsim.core.detector import (
    BellSpec,
    DetectorNoise,
    bell_spec,
    ideal_success_probability,
    p_pd,
    p_pd_numeric,
    sector_range,
)
from bellsim.core.fock import NumberDistribution, enumerate_sector
from bellsim.core.interferometer import compute_b_coefficients
from bellsim.core.poly import BivariatePoly, ExpansionOrder
from bellsim.core.sources import (
    EprMatrix,
    SingleModeState,
    coherent_state,
    generalized_bell_resource,
    squeezed_vacuum,
    truncated_msv,
)
from bellsim.exceptions import DegenerateManipulationError, InvalidInputError

logger = logging.getLogger(__name__)

ZERO_AMPLITUDE = 1e-14


class ManipulationLabel(str, Enum):
    SCISSORS = "scissors"
    REVERSAL = "reversal"
    GENERALIZED_BELL_PREP = "generalized_bell_prep"
    MSV_PREP = "msv_prep"
    CUSTOM = "custom"


class InputReading(str, Enum):
    # FULL: вся матрица c^in[k, j]; UNMEASURED_VACUUM: только столбец j = 0
    FULL = "full"
    UNMEASURED_VACUUM = "unmeasured_vacuum"


@dataclass(frozen=True)
class ManipulationSpec:
    """Вход c^in[k, j], ЭПР-ресурс и измерение Белла."""

    input_amplitudes: np.ndarray
    resource: EprMatrix
    bell: BellSpec
    label: ManipulationLabel = ManipulationLabel.CUSTOM

    def __post_init__(self):
        if np.ndim(self.input_amplitudes) != 2:
            raise InvalidInputError("input amplitudes must be a matrix c_in[k, j]")

    @property
    def output_shape(self) -> tuple:
        return (self.resource.output_size, self.input_amplitudes.shape[1])


# --- Входные состояния ---
def single_mode_input(state: SingleModeState) -> np.ndarray:
    return np.asarray(state.amplitudes, dtype=complex)[:, None]


def two_mode_input(epr: EprMatrix, reading: InputReading = InputReading.FULL) -> np.ndarray:
    """c^in_{kj} = E_{kj}: строка - измеряемая мода, столбец - оставшаяся."""
    E = epr.matrix()
    if reading == InputReading.UNMEASURED_VACUUM:
        return E[:, :1]
    return E


def input_levels(N_tilde: int, order: ExpansionOrder) -> int:
    """Старший уровень Фока, влияющий на коэффициенты до заданного порядка."""
    return N_tilde + order.max_deta + settings.GUARD_LEVELS


# --- Каталог манипуляций ---
def scissors_spec(N: int, alpha: complex, order: ExpansionOrder = ExpansionOrder()) -> ManipulationSpec:
    return ManipulationSpec(
        input_amplitudes=single_mode_input(coherent_state(alpha, input_levels(N, order))),
        resource=generalized_bell_resource(N, 0, 1.0),
        bell=bell_spec(N),
        label=ManipulationLabel.SCISSORS,
    )


def reversal_spec(N: int, alpha: complex, order: ExpansionOrder = ExpansionOrder()) -> ManipulationSpec:
    return ManipulationSpec(
        input_amplitudes=single_mode_input(coherent_state(alpha, input_levels(N, order))),
        resource=truncated_msv(N),
        bell=bell_spec(N),
        label=ManipulationLabel.REVERSAL,
    )


def generalized_bell_prep_spec(
    N: int,
    lam: float,
    r: float = 1.0,
    order: ExpansionOrder = ExpansionOrder(),
    reading: InputReading = InputReading.FULL,
) -> ManipulationSpec:
    """|λ⟩ → |φ₋(N,0,r)⟩ с ресурсом |λ′ = rλ⟩."""
    levels = input_levels(N, order)
    return ManipulationSpec(
        input_amplitudes=two_mode_input(squeezed_vacuum(lam, levels), reading),
        resource=squeezed_vacuum(r * lam, levels),
        bell=bell_spec(N),
        label=ManipulationLabel.GENERALIZED_BELL_PREP,
    )


def msv_prep_spec(
    N: int,
    lam: float,
    swapped: bool = False,
    order: ExpansionOrder = ExpansionOrder(),
    reading: InputReading = InputReading.FULL,
) -> ManipulationSpec:
    """|φ₋(N,0,1/λ)⟩ → |λ=1,N⟩ с ресурсом |λ⟩; swapped меняет их местами."""
    if not 0.0 < lam < 1.0:
        raise InvalidInputError(f"squeezing parameter must satisfy 0 < lambda < 1, got {lam}")
    squeezed = squeezed_vacuum(lam, input_levels(N, order))
    bell_state = generalized_bell_resource(N, 0, 1.0 / lam)
    source, resource = (squeezed, bell_state) if swapped else (bell_state, squeezed)
    return ManipulationSpec(
        input_amplitudes=two_mode_input(source, reading),
        resource=resource,
        bell=bell_spec(N),
        label=ManipulationLabel.MSV_PREP,
    )


# --- Амплитуды исхода ---
def transform_matrix(spec: ManipulationSpec, dist: NumberDistribution) -> np.ndarray:
    """T[n] = E·R_N·B[n]: столбец k, строка - число фотонов выходной моды."""
    N = int(sum(dist))
    b = compute_b_coefficients(spec.bell.interferometer, N)[tuple(dist)]
    size = max(spec.resource.output_size, spec.resource.max_l + 1, N + 1)
    E = spec.resource.matrix(size)
    R = np.zeros((size, N + 1))
    R[N - np.arange(N + 1), np.arange(N + 1)] = 1.0
    return (E @ R @ np.diag(b))[: spec.resource.output_size]


def outcome_amplitudes(spec: ManipulationSpec, dist: NumberDistribution) -> np.ndarray:
    """c^out[n] по выходной моде ресурса и неизмеряемой моде входа."""
    N = int(sum(dist))
    c_in = np.zeros((N + 1, spec.input_amplitudes.shape[1]), dtype=complex)
    rows = min(N + 1, spec.input_amplitudes.shape[0])
    c_in[:rows] = spec.input_amplitudes[:rows]
    return transform_matrix(spec, dist) @ c_in


def ideal_output(spec: ManipulationSpec) -> np.ndarray:
    """Нормированный выход при идеальном отсчёте n^cnt."""
    out = outcome_amplitudes(spec, spec.bell.n_cnt)
    norm = np.linalg.norm(out)
    if norm < ZERO_AMPLITUDE:
        raise DegenerateManipulationError(f"{spec.label.value}: ideal outcome has zero amplitude")
    out = out / norm
    # Глобальная фаза: первая ненулевая амплитуда вещественна и положительна
    flat = out.ravel()
    first = flat[np.flatnonzero(np.abs(flat) > ZERO_AMPLITUDE)[0]]
    return out * (abs(first) / first)


# --- Точность ---
def fidelity_expansion(spec: ManipulationSpec, order: ExpansionOrder = ExpansionOrder()) -> BivariatePoly:
    """F = Tr[ρ_out|ψ⟩⟨ψ|] / (Tr[ρ_out]·⟨ψ|ψ⟩) как ряд по (δη, ν)."""
    bell = spec.bell
    psi = outcome_amplitudes(spec, bell.n_cnt)
    psi_norm = float(np.vdot(psi, psi).real)
    if psi_norm < ZERO_AMPLITUDE ** 2:
        raise DegenerateManipulationError(f"{spec.label.value}: ideal outcome has zero amplitude")

    numerator = np.zeros(order.shape, dtype=complex)
    denominator = np.zeros(order.shape, dtype=complex)
    for N in sector_range(bell.N_tilde, order):
        for dist in enumerate_sector(bell.M, N):
            u = outcome_amplitudes(spec, dist)
            weight = float(np.vdot(u, u).real)
            if weight == 0.0:
                continue
            prob = p_pd(dist, bell.N_tilde, order).coeffs
            numerator += abs(np.vdot(u, psi)) ** 2 * prob
            denominator += weight * psi_norm * prob
    logger.debug("fidelity expansion for %s: N_tilde=%d, order=%s", spec.label.value, bell.N_tilde, order)
    # Свободные члены числителя и знаменателя равны ⟨ψ|ψ⟩²
    scale = psi_norm ** 2
    return BivariatePoly(order, numerator / scale) / BivariatePoly(order, denominator / scale)


def success_probability(spec: ManipulationSpec, noise: DetectorNoise, N_max: Optional[int] = None) -> float:
    """e^{−Mν}·Σ_n P_PD[n]‖c^out[n]‖², суммирование до сектора N_max."""
    bell = spec.bell
    if N_max is None:
        N_max = input_levels(bell.N_tilde, ExpansionOrder())
    total = 0.0
    for N in range(N_max + 1):
        for dist in enumerate_sector(bell.M, N):
            u = outcome_amplitudes(spec, dist)
            weight = float(np.vdot(u, u).real)
            if weight:
                total += p_pd_numeric(dist, bell.N_tilde, noise) * weight
    return total


def truncation_quality(expansion: BivariatePoly, deta: float, nu: float) -> float:
    """Доля старшего по δη слагаемого в полной поправке 1 − F."""
    top = expansion.order.max_deta
    head = sum(expansion.coeffs[top, b] * deta ** top * nu ** b for b in range(expansion.order.max_nu + 1))
    correction = 1.0 - expansion.evaluate(deta, nu)
    if abs(correction) < 1e-15:
        return 0.0
    return float(abs(head) / abs(correction))


def rough_success_probability(
    label: ManipulationLabel,
    N: int,
    lam: float,
    lam_prime: Optional[float] = None,
    p: Optional[float] = None,
) -> float:
    """Грубая оценка вероятности успеха по идеальным детекторам.

    lam - сжатие ресурса для ножниц и входа для GB; lam_prime - сжатие
    ресурса для обращения, GB и MSV. p по умолчанию - p(N) встроенного
    детектора.
    """
    if p is None:
        p = ideal_success_probability(bell_spec(N))
    if label == ManipulationLabel.SCISSORS:
        return p ** 2 / (N + 1) ** 2 * lam ** (2 * N)
    if lam_prime is None:
        raise InvalidInputError(f"{label.value} estimate needs the second squeezing parameter")
    if label == ManipulationLabel.REVERSAL:
        return p ** 3 / (N + 1) ** 4 * lam_prime ** (2 * N)
    if label == ManipulationLabel.GENERALIZED_BELL_PREP:
        r_squared = (lam_prime / lam) ** 2
        if 0.5 <= r_squared <= 2.0:
            return p * lam ** (2 * N)
        return p * max(lam, lam_prime) ** (2 * N) / (N + 1)
    if label == ManipulationLabel.MSV_PREP:
        return p ** 2 / (N + 1) ** 2 * lam_prime ** (2 * N)
    raise InvalidInputError(f"no success-probability estimate for {label.value}")
