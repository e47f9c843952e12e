import math

import numpy as np
from django.test import SimpleTestCase

from core.eigensystem import (
    ANALYTIC, NUMERIC, _checked_sqrt, adiabatic_level, analytic_level, gauge_fix,
    numeric_level, numeric_levels, spectral_invariants,
)
from core.exceptions import DegenerateCoefficients, DegenerateSpectrum, RadicandNegative
from core.models import ModelParams, build_hamiltonian, phase_factors

EXAMPLE = ModelParams(J=1.3, D=0.7, B1=1.0, B2=3.0, theta=math.pi / 4, phi=0.9)


def _random_params(rng):
    J, D, B1, B2 = rng.uniform(-5, 5, 4)
    return ModelParams(J=J, D=D, B1=B1, B2=B2, theta=rng.uniform(0.1, math.pi - 0.1),
                       phi=rng.uniform(0, 2 * math.pi))


def _aligned(reference, vector):
    overlap = np.vdot(vector, reference)
    return vector * (overlap / abs(overlap))


class SpectralInvariantsTestCase(SimpleTestCase):
    """Testes para spectral_invariants"""

    def test_spins_desacoplados(self):
        """Teste energias ±B₁±B₂ com |d|² = 0"""
        invariants = spectral_invariants(ModelParams(J=0.0, D=0.0, B1=1.0, B2=2.0, theta=0.7))

        self.assertEqual(invariants.abs_d_sq, 0.0)
        self.assertAlmostEqual(invariants.xi_norm_sq, 8.0, places=12)
        np.testing.assert_allclose(invariants.xi, (3.0, -3.0, 1.0, -1.0), atol=1e-12)

    def test_simetria_dos_autovalores(self):
        invariants = spectral_invariants(EXAMPLE)
        self.assertEqual(invariants.xi[1], -invariants.xi[0])
        self.assertEqual(invariants.xi[3], -invariants.xi[2])
        self.assertGreaterEqual(invariants.xi[0], invariants.xi[2])
        self.assertGreaterEqual(invariants.xi[2], 0.0)

    def test_valores_do_exemplo(self):
        invariants = spectral_invariants(EXAMPLE)
        self.assertAlmostEqual(invariants.abs_d_sq, 8.72, places=12)
        numeric = np.linalg.eigvalsh(build_hamiltonian(EXAMPLE))
        np.testing.assert_allclose(np.sort(invariants.xi), numeric, atol=1e-10)

    def test_min_gap(self):
        invariants = spectral_invariants(ModelParams(J=0.0, D=0.0, B1=1.0, B2=2.0, theta=0.7))
        self.assertAlmostEqual(invariants.min_gap, 2.0, places=12)

    def test_radicando_negativo(self):
        """Teste truncamento de ruído e erro para radicandos negativos reais"""
        self.assertEqual(_checked_sqrt(-1e-14, 1.0, 'teste'), 0.0)
        with self.assertRaises(RadicandNegative):
            _checked_sqrt(-1e-3, 1.0, 'teste')


class AnalyticLevelTestCase(SimpleTestCase):
    """Testes para analytic_level"""

    def test_theta_zero_degenerado(self):
        with self.assertRaises(DegenerateCoefficients):
            analytic_level(EXAMPLE.with_changes(theta=0.0), 1)

    def test_sem_acoplamento_degenerado(self):
        with self.assertRaises(DegenerateCoefficients):
            analytic_level(ModelParams(J=0.0, D=0.0, B1=1.0, B2=2.0, theta=math.pi / 3), 1)

    def test_colisao_xi3_xi4(self):
        """Teste ξ₃ = ξ₄ = 0 com B₁ = B₂ e B₁ + B₂cosθ = 0"""
        params = ModelParams(J=1.0, D=0.0, B1=1.0, B2=1.0, theta=math.pi)
        with self.assertRaises(DegenerateSpectrum):
            analytic_level(params, 3)

    def test_vetor_contra_numerico(self):
        """Teste vetor analítico igual ao numérico após alinhamento de calibre"""
        for j in (1, 2, 3, 4):
            analytic = analytic_level(EXAMPLE, j)
            numeric = numeric_level(EXAMPLE, j)
            np.testing.assert_allclose(analytic.vector, _aligned(analytic.vector, numeric.vector), atol=1e-8)
            self.assertAlmostEqual(analytic.xi_j, numeric.xi_j, places=10)

    def test_normalizacao_e_quarta_componente(self):
        for j in (1, 2, 3, 4):
            level = analytic_level(EXAMPLE, j)
            self.assertEqual(level.source, ANALYTIC)
            self.assertAlmostEqual(np.linalg.norm(level.vector), 1.0, places=12)
            expected_norm = 1.0 / math.sqrt(abs(level.f) ** 2 + abs(level.m) ** 2 + abs(level.g) ** 2 + 1.0)
            self.assertAlmostEqual(level.N, expected_norm, places=14)
            self.assertAlmostEqual(abs(level.vector[3] - level.N), 0.0, places=14)

    def test_residuo_de_autovetor(self):
        hamiltonian = build_hamiltonian(EXAMPLE)
        bound = 1e-9 * (1.0 + np.linalg.norm(hamiltonian, 2))
        for j in (1, 2, 3, 4):
            level = analytic_level(EXAMPLE, j)
            residual = hamiltonian @ level.vector - level.xi_j * level.vector
            self.assertLessEqual(np.linalg.norm(residual), bound)

    def test_fases_do_azimute(self):
        """Teste vetor(φ) = diag(e^{-2iφ}, e^{-iφ}, e^{-iφ}, 1)·vetor(0)"""
        at_zero = EXAMPLE.with_changes(phi=0.0)
        for j in (1, 2, 3, 4):
            rotated = phase_factors(EXAMPLE.phi) * analytic_level(at_zero, j).vector
            np.testing.assert_allclose(analytic_level(EXAMPLE, j).vector, rotated, atol=1e-14)

    def test_ortogonalidade(self):
        vectors = np.column_stack([analytic_level(EXAMPLE, j).vector for j in (1, 2, 3, 4)])
        np.testing.assert_allclose(vectors.conj().T @ vectors, np.eye(4), atol=1e-10)


class NumericLevelTestCase(SimpleTestCase):
    """Testes para numeric_level e o caminho de fallback"""

    def test_hamiltoniana_diagonal(self):
        level = numeric_level(ModelParams(J=0.0, D=0.0, B1=1.0, B2=2.0, theta=0.0), 1)

        self.assertEqual(level.source, NUMERIC)
        self.assertAlmostEqual(level.xi_j, 3.0, places=12)
        np.testing.assert_allclose(level.vector, [1, 0, 0, 0], atol=1e-12)

    def test_residuo_aleatorio(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            params = _random_params(rng)
            hamiltonian = build_hamiltonian(params)
            bound = 1e-9 * (1.0 + np.linalg.norm(hamiltonian, 2))
            for level in numeric_levels(params):
                residual = hamiltonian @ level.vector - level.xi_j * level.vector
                self.assertLessEqual(np.linalg.norm(residual), bound)

    def test_concordancia_com_formas_fechadas(self):
        """Teste autovalores e sobreposições em sorteios aleatórios"""
        rng = np.random.default_rng(2024)
        for _ in range(300):
            params = _random_params(rng)
            invariants = spectral_invariants(params)
            numeric = np.linalg.eigvalsh(build_hamiltonian(params))
            self.assertLessEqual(
                np.max(np.abs(np.sort(invariants.xi) - numeric)), 1e-10 * params.scale
            )
            for j in (1, 2, 3, 4):
                try:
                    analytic = analytic_level(params, j)
                except DegenerateCoefficients:
                    continue
                overlap = abs(np.vdot(analytic.vector, numeric_level(params, j).vector))
                self.assertGreaterEqual(overlap, 1.0 - 1e-10)

    def test_espectro_degenerado(self):
        params = ModelParams(J=0.0, D=0.0, B1=1.0, B2=1.0, theta=0.0)
        with self.assertRaises(DegenerateSpectrum):
            numeric_level(params, 1)

    def test_calibre(self):
        """Teste quarta componente real positiva ou maior componente real positiva"""
        vector = np.array([0.1, 0.2, 0.3, 0.5j])
        fixed = gauge_fix(vector)
        self.assertAlmostEqual(fixed[3].imag, 0.0, places=15)
        self.assertGreater(fixed[3].real, 0.0)

        vector = np.array([0.9j, 0.1, 0.0, 0.05])
        fixed = gauge_fix(vector)
        self.assertAlmostEqual(fixed[0].imag, 0.0, places=15)
        self.assertGreater(fixed[0].real, 0.0)

    def test_fallback_em_theta_zero(self):
        level = adiabatic_level(EXAMPLE.with_changes(theta=0.0), 2)
        self.assertEqual(level.source, NUMERIC)
        self.assertIsNone(level.f)
        self.assertFalse(level.is_analytic)

    def test_numerico_covariante_em_phi(self):
        """Teste vetor numérico em φ igual à fase diagonal aplicada ao vetor em 0"""
        at_zero = EXAMPLE.with_changes(phi=0.0)
        for j in (1, 2, 3, 4):
            rotated = phase_factors(EXAMPLE.phi) * numeric_level(at_zero, j).vector
            direct = numeric_level(EXAMPLE, j).vector
            np.testing.assert_allclose(_aligned(rotated, direct), rotated, atol=1e-9)
