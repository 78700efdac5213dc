"""Сверка рядов с плотными операторами."""
import numpy as np
import pytest

from bellsim.core.detector import DetectorNoise, bell_spec, confidence_expansion
from bellsim.core.oracle import dense_confidence, dense_fidelity, dense_gamma, default_n_max
from bellsim.core.poly import ExpansionOrder
from bellsim.core.teleport import fidelity_expansion, generalized_bell_prep_spec, msv_prep_spec, scissors_spec
from bellsim.services.checks import (
    CONFIDENCE_GUARD_SECTORS,
    ORACLE_ETAS,
    ORACLE_NUS,
    describe_residuals,
    oracle_residuals,
    two_path_bound,
)

ORDER = ExpansionOrder()
WIDER = ExpansionOrder(ORDER.max_deta + 1, ORDER.max_nu + 1)
IDEAL = DetectorNoise(1.0, 0.0)


class TestDenseGamma:
    """Плотный POM детектора Белла"""

    def test_ideal_projector(self, tol):
        bell = bell_spec(1)
        gamma = dense_gamma(bell, IDEAL)
        d = bell.d
        assert np.allclose(gamma.block(1), np.outer(d, d.conj()), atol=tol)
        assert gamma.trace() == pytest.approx(1.0)

    def test_ideal_single_eigenvalue(self, tol):
        bell = bell_spec(2)
        eigs = np.linalg.eigvalsh(dense_gamma(bell, IDEAL).block(2))
        assert eigs.max() == pytest.approx(0.5)
        assert np.allclose(np.sort(eigs)[:-1], 0, atol=tol)

    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("eta, nu", [(0.8, 0.0), (0.9, 1e-3), (0.7, 0.05)])
    def test_structure(self, n, eta, nu):
        gamma = dense_gamma(bell_spec(n), DetectorNoise(eta, nu))
        assert gamma.N_max == default_n_max(n)
        assert gamma.is_hermitian()
        assert gamma.min_eigenvalue() > -1e-12
        assert gamma.cross_sector_norm() == 0.0


class TestTwoPaths:
    """Ряд и плотный расчёт совпадают до первых отброшенных членов"""

    @staticmethod
    def report(title, rows):
        print(f"\n{title}")
        for r in rows:
            print(f"  eta={r.eta:<4g} nu={r.nu:<6g} residual={r.residual:.3e} bound={r.bound:.3e}")

    @pytest.mark.parametrize("n", [1, 2])
    def test_confidence(self, n):
        bell = bell_spec(n)
        rows = oracle_residuals(
            confidence_expansion(bell, WIDER),
            ORDER,
            lambda noise, N_max: dense_confidence(bell, noise, N_max),
            n + CONFIDENCE_GUARD_SECTORS,
        )
        self.report(f"confidence N_tilde={n}", rows)
        assert len(rows) == len(ORACLE_ETAS) * len(ORACLE_NUS)
        assert all(r.within for r in rows), describe_residuals(rows)
        assert max(r.dense for r in rows) <= 1.0 + 1e-12

    @pytest.mark.parametrize("build", [
        lambda n: scissors_spec(n, np.sqrt(3), WIDER),
        lambda n: generalized_bell_prep_spec(n, 0.25, 1.0, WIDER),
        lambda n: msv_prep_spec(n, 0.25, order=WIDER),
    ], ids=["scissors", "generalized_bell_prep", "msv_prep"])
    @pytest.mark.parametrize("n", [1, 2])
    def test_fidelity(self, build, n):
        spec = build(n)
        rows = oracle_residuals(
            fidelity_expansion(spec, WIDER),
            ORDER,
            lambda noise, N_max: dense_fidelity(spec, noise, N_max),
            default_n_max(n),
        )
        self.report(f"{spec.label.value} N={n}", rows)
        assert all(r.within for r in rows), describe_residuals(rows)
        assert all(0.0 < r.dense <= 1.0 + 1e-12 for r in rows)

    def test_ideal_point_is_exact(self):
        rows = oracle_residuals(
            confidence_expansion(bell_spec(1), WIDER),
            ORDER,
            lambda noise, N_max: dense_confidence(bell_spec(1), noise, N_max),
            1 + CONFIDENCE_GUARD_SECTORS,
        )
        ideal = next(r for r in rows if r.eta == 1.0 and r.nu == 0.0)
        assert ideal.residual < 1e-12

    def test_bound_grows_with_omitted_terms(self):
        assert two_path_bound(0.0, 0.0) == pytest.approx(1e-9)
        assert two_path_bound(1e-3, 0.0) > two_path_bound(1e-4, 0.0)
        assert two_path_bound(0.0, -1e-5) == pytest.approx(4e-5 + 1e-9)

    def test_ideal_fidelity(self):
        assert dense_fidelity(scissors_spec(1, np.sqrt(3)), IDEAL) == pytest.approx(1.0)

    def test_scissors_realistic_detectors(self):
        assert dense_fidelity(scissors_spec(1, np.sqrt(3)), DetectorNoise(0.8, 1e-4)) >= 0.9
