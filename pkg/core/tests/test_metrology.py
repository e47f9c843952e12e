import math

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from core.eigensystem import analytic_level, numeric_level
from core.exceptions import NonNormalizedInput, ZeroSupportDerivative
from core.metrology import (
    CLOSED_FORM, FIDELITY_ORACLE, SPECTRAL, check_density_matrix, closed_form_reduced_state,
    cramer_rao, qfi, qfi_all, qfi_one_qubit, qfi_pure_oracle, qfi_pure_state, qfi_spectral,
    qfi_two_qubit, reduce, sld,
)
from core.models import ModelParams

EXAMPLE = ModelParams(J=1.3, D=0.7, B1=1.0, B2=3.0, theta=math.pi / 4, phi=0.9)
FIG1 = ModelParams(J=0.1, D=0.8, B1=1.2, B2=3.0, theta=math.pi / 4)
FIG6 = ModelParams(J=0.5, D=1.0, B1=3.0, B2=2.2, theta=1.1)


def _numeric_family(params, j):
    return lambda phi: numeric_level(params.with_changes(phi=phi), j).vector


def _relative(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


class TwoQubitQfiTestCase(SimpleTestCase):
    """Testes para qfi_two_qubit e os oráculos de estado puro"""

    def test_theta_zero(self):
        """Teste QFI nula com o campo ao longo de z"""
        for j in (1, 2, 3, 4):
            value = qfi_two_qubit(EXAMPLE.with_changes(theta=0.0), j)
            self.assertLessEqual(value.value, 1e-12)
            self.assertEqual(value.method, FIDELITY_ORACLE)
            self.assertTrue(value.fallback)

    def test_estado_produto(self):
        """Teste J = D = 0 dá sin²θ"""
        params = ModelParams(J=0.0, D=0.0, B1=1.0, B2=2.0, theta=math.pi / 2)
        self.assertAlmostEqual(qfi_two_qubit(params, 1).value, 1.0, delta=1e-8)

        params = params.with_changes(theta=0.6)
        for j in (1, 2, 3, 4):
            self.assertAlmostEqual(qfi_two_qubit(params, j).value, math.sin(0.6) ** 2, delta=1e-8)

    def test_forma_fechada_contra_oraculo(self):
        for params, levels in ((FIG1, (1, 2, 3, 4)), (EXAMPLE, (3,))):
            for j in levels:
                closed = qfi_two_qubit(params, j)
                self.assertEqual(closed.method, CLOSED_FORM)
                oracle = qfi_pure_oracle(_numeric_family(params, j), params.phi)
                self.assertLessEqual(_relative(closed.value, oracle), 1e-6)

    def test_forma_fechada_contra_variancia(self):
        for j in (1, 2, 3, 4):
            closed = qfi_two_qubit(EXAMPLE, j).value
            exact = qfi_pure_state(analytic_level(EXAMPLE, j).vector)
            self.assertLessEqual(_relative(closed, exact), 1e-12)

    def test_oraculo_estado_constante(self):
        state = np.array([0.6, 0.0, 0.8j, 0.0])
        self.assertAlmostEqual(qfi_pure_oracle(lambda phi: state, 0.3), 0.0, places=12)

    def test_oraculo_superposicao_equatorial(self):
        """Teste (e^{-iφ}|↑↓⟩ + |↓↑⟩)/√2 dá F = 1"""
        def state_at(phi):
            return np.array([0.0, np.exp(-1j * phi), 1.0, 0.0]) / math.sqrt(2.0)

        self.assertAlmostEqual(qfi_pure_oracle(state_at, 0.4), 1.0, delta=1e-8)

    def test_oraculo_nao_depende_do_calibre(self):
        family = _numeric_family(EXAMPLE, 1)
        regauged = lambda phi: np.exp(1j * 3.0 * phi) * family(phi)
        self.assertAlmostEqual(
            qfi_pure_oracle(family, 0.9), qfi_pure_oracle(regauged, 0.9), delta=1e-8
        )

    def test_oraculo_estado_nao_normalizado(self):
        with self.assertRaises(NonNormalizedInput):
            qfi_pure_oracle(lambda phi: np.array([1.0, 1.0, 0.0, 0.0]), 0.0)

    def test_delta_fora_do_intervalo(self):
        state = np.array([1.0, 0.0, 0.0, 0.0])
        with self.assertRaises(ValidationError):
            qfi_pure_oracle(lambda phi: state, 0.0, delta=0.1)
        with self.assertRaises(ValidationError):
            qfi_pure_oracle(lambda phi: state, 0.0, delta=1e-8)

    def test_limite_superior(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            J, D, B1, B2 = rng.uniform(-5, 5, 4)
            params = ModelParams(J=J, D=D, B1=B1, B2=B2, theta=rng.uniform(0.1, 3.0))
            for j in (1, 2, 3, 4):
                value = qfi_two_qubit(params, j).value
                self.assertGreaterEqual(value, 0.0)
                self.assertLessEqual(value, 4.0 + 1e-9)


class ReducedStateTestCase(SimpleTestCase):
    """Testes para reduce e o estado reduzido em forma fechada"""

    def test_estado_produto(self):
        state = np.array([0.0, 1.0, 0.0, 0.0])
        np.testing.assert_allclose(reduce(state, 'A'), np.diag([1.0, 0.0]), atol=1e-15)
        np.testing.assert_allclose(reduce(state, 'B'), np.diag([0.0, 1.0]), atol=1e-15)

    def test_estado_maximamente_emaranhado(self):
        state = np.array([0.0, 1.0, 1.0, 0.0]) / math.sqrt(2.0)
        np.testing.assert_allclose(reduce(state, 'A'), np.diag([0.5, 0.5]), atol=1e-15)

    def test_qubit_invalido(self):
        with self.assertRaises(ValidationError):
            reduce(np.array([1.0, 0.0, 0.0, 0.0]), 'C')

    def test_forma_fechada(self):
        """Teste traço parcial numérico contra a expressão em f, m, g, N"""
        for j in (1, 2, 3, 4):
            level = analytic_level(EXAMPLE, j)
            for keep in ('A', 'B'):
                rho = reduce(level.vector, keep)
                np.testing.assert_allclose(
                    rho, closed_form_reduced_state(level, keep, EXAMPLE.phi), atol=1e-12
                )
                check_density_matrix(rho)

    def test_matriz_densidade_invalida(self):
        with self.assertRaises(ValidationError):
            check_density_matrix(np.diag([0.7, 0.7]))
        with self.assertRaises(ValidationError):
            check_density_matrix(np.array([[0.5, 0.1], [0.2, 0.5]]))
        with self.assertRaises(ValidationError):
            check_density_matrix(np.diag([1.2, -0.2]))


class OneQubitQfiTestCase(SimpleTestCase):
    """Testes para qfi_one_qubit"""

    def test_desacoplado(self):
        params = ModelParams(J=0.0, D=0.0, B1=1.0, B2=2.0, theta=1.0)
        for j in (1, 2, 3, 4):
            value = qfi_one_qubit(params, j, 'A')
            self.assertLessEqual(value.value, 1e-12)
            self.assertEqual(value.method, SPECTRAL)

    def test_reflexao_do_campo(self):
        params = ModelParams(J=1.3, D=-0.9, B1=1.0, B2=1.0, theta=0.6)
        mirrored = params.with_changes(B1=-1.0, theta=math.pi - 0.6)
        for j in (1, 2, 3, 4):
            self.assertLessEqual(
                _relative(qfi_one_qubit(params, j, 'A').value, qfi_one_qubit(mirrored, j, 'A').value),
                1e-9,
            )

    def test_forma_fechada_contra_espectral(self):
        for params in (FIG6, EXAMPLE):
            for j in (1, 2, 3, 4):
                family = _numeric_family(params, j)
                for probe in ('A', 'B'):
                    closed = qfi_one_qubit(params, j, probe)
                    self.assertEqual(closed.method, CLOSED_FORM)
                    spectral = qfi_spectral(lambda phi: reduce(family(phi), probe), params.phi)
                    self.assertLessEqual(_relative(closed.value, spectral), 1e-6)

    def test_sonda_invalida(self):
        with self.assertRaises(ValidationError):
            qfi_one_qubit(EXAMPLE, 1, 'two-qubit')
        with self.assertRaises(ValidationError):
            qfi_one_qubit(EXAMPLE, 5, 'A')


class PropertyTestCase(SimpleTestCase):
    """Propriedades sobre sorteios semeados"""

    def setUp(self):
        rng = np.random.default_rng(17)
        self.samples = []
        for _ in range(60):
            J, D, B1, B2 = rng.uniform(-5, 5, 4)
            self.samples.append(ModelParams(
                J=J, D=D, B1=B1, B2=B2, theta=rng.uniform(0.1, math.pi - 0.1),
                phi=rng.uniform(0, 2 * math.pi),
            ))

    def test_independencia_de_phi(self):
        for params in self.samples:
            shifted = params.with_changes(phi=params.phi + 0.37)
            for probe in ('two-qubit', 'A', 'B'):
                for j in (1, 2, 3, 4):
                    self.assertLessEqual(
                        _relative(qfi(params, j, probe).value, qfi(shifted, j, probe).value), 1e-9
                    )

    def test_simetria_de_troca(self):
        """Teste J ↔ D, J → −J e D → −D, cada troca isolada"""
        for params in self.samples:
            variants = (
                params.with_changes(J=params.D, D=params.J),
                params.with_changes(J=-params.J),
                params.with_changes(D=-params.D),
            )
            for probe in ('two-qubit', 'A', 'B'):
                for j in (1, 2, 3, 4):
                    value = qfi(params, j, probe).value
                    for variant in variants:
                        self.assertLessEqual(_relative(value, qfi(variant, j, probe).value), 1e-9)

    def test_monotonicidade_do_traco_parcial(self):
        for params in self.samples:
            for j in (1, 2, 3, 4):
                two = qfi(params, j, 'two-qubit').value
                a = qfi(params, j, 'A').value
                b = qfi(params, j, 'B').value
                self.assertGreaterEqual(two, max(a, b) - 1e-9)

    def test_qfi_all(self):
        values = qfi_all(EXAMPLE)
        self.assertEqual(len(values), 12)
        self.assertEqual(values[('A', 2)].value, qfi_one_qubit(EXAMPLE, 2, 'A').value)
        self.assertEqual(values[('two-qubit', 4)].probe, 'two-qubit')


class SldTestCase(SimpleTestCase):
    """Testes para sld e qfi_spectral"""

    def test_estado_puro(self):
        """Teste L = 2∂ρ para estado puro"""
        theta, phi = 1.1, 0.3
        psi = np.array([math.cos(theta / 2), math.sin(theta / 2) * np.exp(-1j * phi)])
        dpsi = np.array([0.0, -1j * math.sin(theta / 2) * np.exp(-1j * phi)])
        rho = np.outer(psi, psi.conj())
        drho = np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj())

        operator = sld(rho, drho)
        np.testing.assert_allclose(operator, 2 * drho, atol=1e-10)
        residual = drho - 0.5 * (operator @ rho + rho @ operator)
        self.assertLessEqual(np.max(np.abs(residual)), 1e-10)

    def test_caso_comutativo(self):
        p, q = 0.3, 0.1
        operator = sld(np.diag([p, 1 - p]), np.diag([q, -q]))
        np.testing.assert_allclose(operator, np.diag([q / p, -q / (1 - p)]), atol=1e-12)

    def test_residuo_aleatorio(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            rho = a @ a.conj().T
            rho = rho / np.trace(rho).real
            rho = 0.5 * (rho + rho.conj().T)
            h = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            drho = 0.5 * (h + h.conj().T)
            drho = drho - np.trace(drho).real / 2 * np.eye(2)

            operator = sld(rho, drho)
            residual = drho - 0.5 * (operator @ rho + rho @ operator)
            self.assertLessEqual(np.max(np.abs(residual)), 1e-10)

    def test_derivada_fora_do_suporte(self):
        with self.assertRaises(ZeroSupportDerivative):
            sld(np.diag([1.0, 0.0]), np.diag([0.1, -0.1]))

    def test_espectral_constante(self):
        rho = np.diag([0.25, 0.75]).astype(complex)
        self.assertAlmostEqual(qfi_spectral(lambda phi: rho, 0.5), 0.0, places=12)

    def test_espectral_rotacao_no_equador(self):
        """Teste família (cos(θ/2), sin(θ/2)e^{-iφ}) dá sin²θ"""
        theta = 1.1

        def rho_at(phi):
            psi = np.array([math.cos(theta / 2), math.sin(theta / 2) * np.exp(-1j * phi)])
            return np.outer(psi, psi.conj())

        self.assertAlmostEqual(qfi_spectral(rho_at, 0.2), math.sin(theta) ** 2, delta=1e-8)


class CramerRaoTestCase(SimpleTestCase):
    """Testes para cramer_rao"""

    def test_valores(self):
        self.assertEqual(cramer_rao(1.0, 1), 1.0)
        self.assertEqual(cramer_rao(4.0, 1), 0.5)
        self.assertAlmostEqual(cramer_rao(1.0, 100), 0.1, places=15)

    def test_qfi_nula(self):
        self.assertEqual(cramer_rao(0.0), math.inf)

    def test_entradas_invalidas(self):
        with self.assertRaises(ValidationError):
            cramer_rao(-1.0)
        with self.assertRaises(ValidationError):
            cramer_rao(1.0, 0)
