"""Неидеальные фотодетекторы и детектор состояний Белла.

Вероятности отсчётов хранятся без общего множителя e^{−Mν}: он одинаков у
всех распределений и сокращается в отношениях (достоверность, точность).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.special import comb, factorial

from bellsim.core.fock import (
    BellAmplitudes,
    NumberDistribution,
    bell_amplitudes,
    count_click_pattern,
    enumerate_sector,
    omega,
)
from bellsim.core.interferometer import Interferometer, builtin_detector, compute_b_coefficients
from bellsim.core.poly import BivariatePoly, ExpansionOrder
from bellsim.exceptions import InvalidInputError, SelectivityError

logger = logging.getLogger(__name__)

SELECTIVITY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class DetectorNoise:
    eta: float
    nu: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise InvalidInputError(f"quantum efficiency must lie in [0, 1], got {self.eta}")
        if self.nu < 0.0:
            raise InvalidInputError(f"dark count must be nonnegative, got {self.nu}")

    @property
    def deta(self) -> float:
        return 1.0 - self.eta


# --- POM фотодетектора ---
@lru_cache(maxsize=None)
def pd_pom_diagonal(count: int, n: int, order: ExpansionOrder = ExpansionOrder()) -> BivariatePoly:
    """⟨n|Π(count)|n⟩/e^{−ν} для count ∈ {0, 1} как многочлен от (δη, ν)."""
    deta = BivariatePoly.deta(order)
    if count == 0:
        return deta ** n
    if count == 1:
        nu = BivariatePoly.nu(order)
        if n == 0:
            return nu
        return deta ** (n - 1) * (n * (1 - deta) + nu * deta)
    raise InvalidInputError(f"zero-one detector model only covers counts 0 and 1, got {count}")


def pd_pom_general(N: int, eta: float, nu: float, cap: int) -> np.ndarray:
    """⟨n|Π(N)|n⟩ для n = 0..cap при эффективности η и темновом счёте ν."""
    if cap < N:
        raise InvalidInputError(f"cap must be at least the count N={N}, got {cap}")
    out = np.zeros(cap + 1)
    for n in range(cap + 1):
        m = np.arange(min(N, n) + 1)
        out[n] = np.sum(
            np.exp(-nu) * nu ** (N - m) / factorial(N - m)
            * comb(n, m) * eta ** m * (1 - eta) ** (n - m)
        )
    return out


@lru_cache(maxsize=None)
def p_pd(dist: NumberDistribution, N_tilde: int, order: ExpansionOrder = ExpansionOrder()) -> BivariatePoly:
    """P_PD[n]: единичный отсчёт на первых Ñ детекторах, ноль на остальных."""
    if len(dist) < N_tilde:
        raise InvalidInputError(f"distribution over {len(dist)} modes cannot carry {N_tilde} clicks")
    result = BivariatePoly.one(order)
    for i, n in enumerate(dist):
        result = result * pd_pom_diagonal(1 if i < N_tilde else 0, n, order)
    return result


def p_pd_numeric(dist: NumberDistribution, N_tilde: int, noise: DetectorNoise) -> float:
    """P_PD[n] при конкретных (η, ν), вместе с множителем e^{−Mν}."""
    prob = 1.0
    for i, n in enumerate(dist):
        count = 1 if i < N_tilde else 0
        prob *= pd_pom_general(count, noise.eta, noise.nu, max(n, count))[n]
    return float(prob)


# --- Детектор состояния Белла ---
def selectivity_gain(itf: Interferometer, d: np.ndarray, N_tilde: int) -> complex:
    """g из условия B[n^cnt] = g·d̃*; иначе SelectivityError."""
    b = compute_b_coefficients(itf, N_tilde)[count_click_pattern(itf.M, N_tilde)]
    g = complex(np.sum(b * d))
    mismatch = float(np.linalg.norm(b - g * np.conj(d)))
    if abs(g) < SELECTIVITY_TOLERANCE or mismatch > SELECTIVITY_TOLERANCE:
        raise SelectivityError(
            f"interferometer does not select the target at n_cnt: |g|={abs(g):.3e}, mismatch={mismatch:.3e}"
        )
    return g


@dataclass(frozen=True)
class BellSpec:
    interferometer: Interferometer
    target: BellAmplitudes

    def __post_init__(self):
        if self.target.number_sum > self.interferometer.M:
            raise InvalidInputError("target number sum exceeds the number of detectors")
        selectivity_gain(self.interferometer, self.d, self.N_tilde)

    @property
    def N_tilde(self) -> int:
        return self.target.number_sum

    @property
    def phase_index(self) -> int:
        return self.target.phase_index

    @property
    def d(self) -> np.ndarray:
        return self.target.vector()

    @property
    def M(self) -> int:
        return self.interferometer.M

    @property
    def n_cnt(self) -> NumberDistribution:
        return count_click_pattern(self.M, self.N_tilde)

    @property
    def gain(self) -> complex:
        return selectivity_gain(self.interferometer, self.d, self.N_tilde)


def bell_spec(N_tilde: int, m: int = 0) -> BellSpec:
    """Встроенный детектор |φ₋(Ñ,m)⟩; m ≠ 0 через фазовый сдвиг входа 2."""
    target = bell_amplitudes(N_tilde, m)
    itf = builtin_detector(N_tilde)
    if m:
        itf = itf.with_input_phase(omega(N_tilde) ** m)
    return BellSpec(itf, target)


def ideal_success_probability(bell: BellSpec) -> float:
    b = compute_b_coefficients(bell.interferometer, bell.N_tilde)[bell.n_cnt]
    return float(abs(np.sum(b * bell.d)) ** 2)


@dataclass(frozen=True)
class KMatrix:
    """K_{k′k}(N) = Σ_n B*_{k′}[n] B_k[n] P_PD[n]; entries[k′, k] - коэффициенты многочлена."""

    sector: int
    order: ExpansionOrder
    entries: np.ndarray

    def entry(self, k_prime: int, k: int) -> BivariatePoly:
        return BivariatePoly(self.order, self.entries[k_prime, k])

    def evaluate(self, deta: float, nu: float) -> np.ndarray:
        powers = np.outer(deta ** np.arange(self.order.max_deta + 1), nu ** np.arange(self.order.max_nu + 1))
        return np.einsum("ijab,ab->ij", self.entries, powers)

    def quadratic_form(self, d: np.ndarray) -> BivariatePoly:
        return BivariatePoly(self.order, np.einsum("i,ijab,j->ab", np.conj(d), self.entries, d))

    def trace(self) -> BivariatePoly:
        return BivariatePoly(self.order, np.einsum("iiab->ab", self.entries))


def sector_range(N_tilde: int, order: ExpansionOrder) -> range:
    """Секторы, дающие вклад в пределах порядка: Ñ−B ≤ N ≤ Ñ+A."""
    return range(max(0, N_tilde - order.max_nu), N_tilde + order.max_deta + 1)


def build_k_matrix(bell: BellSpec, N: int, order: ExpansionOrder) -> KMatrix:
    entries = np.zeros((N + 1, N + 1) + order.shape, dtype=complex)
    for dist, b in compute_b_coefficients(bell.interferometer, N).items():
        if not b.any():
            continue
        entries += np.einsum("i,j,ab->ijab", b.conj(), b, p_pd(dist, bell.N_tilde, order).coeffs)
    entries.setflags(write=False)
    return KMatrix(sector=N, order=order, entries=entries)


def build_k_matrices(bell: BellSpec, order: ExpansionOrder = ExpansionOrder()) -> List[KMatrix]:
    mats = [build_k_matrix(bell, N, order) for N in sector_range(bell.N_tilde, order)]
    logger.debug("K matrices for N_tilde=%d: sectors %s", bell.N_tilde, [k.sector for k in mats])
    return mats


def sector_traces(bell: BellSpec, order: ExpansionOrder = ExpansionOrder()) -> Dict[int, BivariatePoly]:
    """Tr[Γ P_N] по секторам: вероятность приписать отсчёт n^cnt сектору N."""
    return {k.sector: k.trace() for k in build_k_matrices(bell, order)}


def lowest_order(p: BivariatePoly, tol: float = 1e-12) -> Optional[Tuple[int, int]]:
    """Младший ненулевой член (a, b) по суммарной степени, затем по a."""
    terms = [
        (a + b, a, b)
        for a in range(p.order.max_deta + 1)
        for b in range(p.order.max_nu + 1)
        if abs(p.coeffs[a, b]) > tol
    ]
    if not terms:
        return None
    _, a, b = min(terms)
    return (a, b)


def confidence_expansion(bell: BellSpec, order: ExpansionOrder = ExpansionOrder()) -> BivariatePoly:
    """Достоверность C = Tr[Γ|d̃⟩⟨d̃|]/Tr[Γ] как ряд по (δη, ν)."""
    mats = build_k_matrices(bell, order)
    numerator = next(k for k in mats if k.sector == bell.N_tilde).quadratic_form(bell.d)
    denominator = BivariatePoly.zero(order)
    for k in mats:
        denominator = denominator + k.trace()
    return numerator / denominator
