import math

import numpy as np
from scipy.linalg import expm
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from core.dynamics import (
    MIN_STEPS, default_steps, evolve, qfi_from_trajectory, state_qfis,
)
from core.eigensystem import adiabatic_level, spectral_invariants
from core.exceptions import NotAdiabatic, StepTooCoarse
from core.metrology import qfi
from core.models import ModelParams, build_hamiltonian, phase_factors, phase_generator

EXAMPLE = ModelParams(J=1.3, D=0.7, B1=1.0, B2=3.0, theta=math.pi / 4, phi=0.9)
FIELD_SWEEP_BASE = ModelParams(J=1.3, D=0.0, B1=1.5, B2=3.0, theta=math.pi / 4)


class EvolveTestCase(SimpleTestCase):
    """Testes para evolve"""

    def test_campo_parado(self):
        """Teste ω = 0: o autoestado só acumula fase"""
        steps = default_steps(EXAMPLE, 0.0, 10.0)
        trajectory = evolve(EXAMPLE, 0.0, 10.0, steps, 2)

        self.assertEqual(trajectory.states.shape, (steps + 1, 4))
        self.assertEqual(len(trajectory.times), steps + 1)
        self.assertGreaterEqual(trajectory.min_fidelity, 1.0 - 1e-10)
        self.assertLessEqual(trajectory.max_renormalization, 1e-9)

    def test_estado_inicial(self):
        trajectory = evolve(EXAMPLE, 0.01, 1.0, MIN_STEPS, 3)
        np.testing.assert_allclose(trajectory.states[0], adiabatic_level(EXAMPLE, 3).vector, atol=1e-15)
        self.assertEqual(trajectory.fidelities[0], 1.0)

    def test_rotacao_lenta_segue_o_autoestado(self):
        omega, t_final = 0.01, 50.0
        trajectory = evolve(EXAMPLE, omega, t_final, default_steps(EXAMPLE, omega, t_final), 1)
        self.assertGreaterEqual(trajectory.min_fidelity, 0.999)

    def test_rotacao_rapida_perde_o_autoestado(self):
        slow = evolve(EXAMPLE, 0.01, 2.0, 2000, 1)
        fast = evolve(EXAMPLE, 5.0, 2.0, 2000, 1)
        self.assertLess(fast.min_fidelity, 0.99)
        self.assertLess(fast.min_fidelity, slow.min_fidelity)

    def test_ordem_do_integrador(self):
        """Teste erro global de quarta ordem: dobrar os passos divide o erro por ~16"""
        reference = evolve(EXAMPLE, 0.5, 2.0, 1600, 1).final_state
        coarse = np.linalg.norm(evolve(EXAMPLE, 0.5, 2.0, 200, 1).final_state - reference)
        fine = np.linalg.norm(evolve(EXAMPLE, 0.5, 2.0, 400, 1).final_state - reference)
        self.assertGreaterEqual(coarse / fine, 8.0)

    def test_propagador_exato(self):
        """
        Teste contra ψ(t) = e^{-iGωt} exp(−i(H(φ₀) − ωG)t) ψ(0), a solução exata
        no referencial que gira com o campo
        """
        omega, t_final = 0.5, 2.0
        trajectory = evolve(EXAMPLE, omega, t_final, 1600, 1)

        generator = phase_generator()
        rotating_frame = expm(-1j * (build_hamiltonian(EXAMPLE) - omega * generator) * t_final)
        exact = phase_factors(omega * t_final) * (rotating_frame @ trajectory.states[0])
        self.assertLessEqual(np.linalg.norm(trajectory.final_state - exact), 1e-8)

    def test_fidelidade_melhora_com_rotacao_mais_lenta(self):
        """Teste cinco metades de ω: min_fidelity nunca cai mais que 1e-6"""
        params = FIELD_SWEEP_BASE
        omega, t_final = 1e-2 * spectral_invariants(params).min_gap, 20.0
        steps = default_steps(params, omega, t_final)

        previous = evolve(params, omega, t_final, steps, 1).min_fidelity
        for _ in range(5):
            omega /= 2.0
            current = evolve(params, omega, t_final, steps, 1).min_fidelity
            self.assertGreaterEqual(current, previous - 1e-6)
            previous = current

    def test_passo_grosso(self):
        with self.assertRaises(StepTooCoarse):
            evolve(EXAMPLE, 0.01, 100.0, 100, 1)

    def test_entradas_invalidas(self):
        with self.assertRaises(ValidationError):
            evolve(EXAMPLE, 0.01, 1.0, MIN_STEPS - 1, 1)
        with self.assertRaises(ValidationError):
            evolve(EXAMPLE, 0.01, 1.0, MIN_STEPS, 5)
        with self.assertRaises(ValidationError):
            evolve(EXAMPLE, 0.01, -1.0, MIN_STEPS, 1)
        with self.assertRaises(ValidationError):
            evolve(EXAMPLE, float('inf'), 1.0, MIN_STEPS, 1)


class DefaultStepsTestCase(SimpleTestCase):
    """Testes para default_steps"""

    def test_minimo(self):
        self.assertEqual(default_steps(EXAMPLE, 0.0, 0.0), MIN_STEPS)

    def test_passo_de_fase(self):
        xi_max = spectral_invariants(EXAMPLE).xi[0]
        steps = default_steps(EXAMPLE, 0.0, 100.0)
        self.assertLessEqual(100.0 / steps * xi_max, 0.05 + 1e-12)

    def test_passos_por_revolucao(self):
        with self.settings(QFI_STEPS_PER_REVOLUTION=50000):
            steps = default_steps(EXAMPLE, 1.0, 2 * math.pi)
        self.assertGreaterEqual(steps, 50000)


class TrajectoryQfiTestCase(SimpleTestCase):
    """Testes para qfi_from_trajectory e state_qfis"""

    def test_autoestado_exato(self):
        vector = adiabatic_level(EXAMPLE, 1).vector
        two_qubit, qubit_a, qubit_b = state_qfis(vector, EXAMPLE.phi)
        for value, probe in ((two_qubit, 'two-qubit'), (qubit_a, 'A'), (qubit_b, 'B')):
            closed = qfi(EXAMPLE, 1, probe).value
            self.assertLessEqual(abs(value - closed) / max(1.0, closed), 1e-6)

    def test_limite_adiabatico(self):
        """Teste ω → 0: QFIs da trajetória convergem às formas fechadas"""
        omega = 1e-4 * spectral_invariants(EXAMPLE).min_gap
        result = qfi_from_trajectory(EXAMPLE, omega, 1, EXAMPLE.phi + 0.05)

        self.assertAlmostEqual(result.t_probe, 0.05 / omega, delta=1e-6 / omega)
        self.assertGreaterEqual(result.min_fidelity, 0.9999)
        for value, probe in ((result.two_qubit, 'two-qubit'), (result.qubit_a, 'A'), (result.qubit_b, 'B')):
            closed = qfi(EXAMPLE, 1, probe).value
            self.assertLessEqual(abs(value - closed), max(0.01 * closed, 2e-3))

    def test_uma_volta_completa(self):
        """
        Teste ω = 1e-3·min_gap por uma volta: o estado segue o autoestado e a
        QFI de dois qubits fica a 1% da forma fechada
        """
        params = FIELD_SWEEP_BASE
        omega = 1e-3 * spectral_invariants(params).min_gap
        # φ₀ − 1e-9 só é alcançado ao fim da volta
        result = qfi_from_trajectory(params, omega, 1, params.phi - 1e-9)

        self.assertAlmostEqual(result.t_probe, 2 * math.pi / omega, delta=1e-6 / omega)
        self.assertGreaterEqual(result.min_fidelity, 0.999)
        closed = qfi(params, 1, 'two-qubit').value
        self.assertLessEqual(abs(result.two_qubit - closed), 0.01 * closed)

    def test_omega_nulo(self):
        result = qfi_from_trajectory(EXAMPLE, 0.0, 2, EXAMPLE.phi)
        self.assertEqual(result.t_probe, 0.0)
        self.assertEqual(result.margin, math.inf)
        closed = qfi(EXAMPLE, 2, 'two-qubit').value
        self.assertLessEqual(abs(result.two_qubit - closed) / max(1.0, closed), 1e-6)

        with self.assertRaises(ValidationError):
            qfi_from_trajectory(EXAMPLE, 0.0, 2, EXAMPLE.phi + 0.1)

    def test_rotacao_negativa(self):
        result = qfi_from_trajectory(EXAMPLE, -0.01, 1, EXAMPLE.phi - 0.1)
        self.assertAlmostEqual(result.t_probe, 10.0, places=9)

    def test_nao_adiabatico(self):
        with self.assertRaises(NotAdiabatic):
            qfi_from_trajectory(EXAMPLE, 1.0, 1, EXAMPLE.phi + 0.5)
