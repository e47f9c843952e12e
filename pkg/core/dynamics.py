"""
Integração direta de i∂ₜψ = H(t)ψ com φ(t) = φ₀ + ωt.

Valida a aproximação adiabática comparando o estado integrado com o
autoestado instantâneo (apenas módulos de sobreposições, portanto sem
depender da fase dinâmica nem da geométrica).
"""
from dataclasses import dataclass
import logging
import math
import time

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from .adiabatic import adiabatic_margin
from .eigensystem import adiabatic_level, spectral_invariants
from .exceptions import NotAdiabatic, StepTooCoarse
from .logging_config import performance_logger
from .metrology import qfi_pure_oracle, qfi_spectral, reduce
from .models import ModelParams, build_hamiltonian, phase_factors
from .validators import validate_finite, validate_level, validate_non_negative

logger = logging.getLogger(__name__)

MIN_STEPS = 100
STEP_DRIFT_LIMIT = 1e-9
# |dt|·max|ξ| ≤ 0.05 mantém a perda de norma do RK4 por passo abaixo de 1e-9
STEP_PHASE = 0.05


@dataclass
class Trajectory:
    """Estados integrados e fidelidade com o autoestado instantâneo"""
    params: ModelParams
    level: int
    omega: float
    times: np.ndarray
    states: np.ndarray
    fidelities: np.ndarray
    max_renormalization: float

    @property
    def min_fidelity(self):
        return float(self.fidelities.min())

    @property
    def final_state(self):
        return self.states[-1]


@dataclass(frozen=True)
class TrajectoryQfi:
    """QFIs extraídas do estado integrado no instante em que φ(t*) = phi_probe"""
    phi_probe: float
    t_probe: float
    two_qubit: float
    qubit_a: float
    qubit_b: float
    min_fidelity: float
    margin: float


def default_steps(params: ModelParams, omega: float, t_final: float) -> int:
    """
    Passos suficientes para |dt|·ξ₁ ≤ 0.05, com o mínimo por revolução das configurações.
    """
    xi_max = spectral_invariants(params).xi[0]
    revolutions = abs(omega) * t_final / (2.0 * math.pi)
    per_revolution = getattr(settings, 'QFI_STEPS_PER_REVOLUTION', 10000)
    by_phase = math.ceil(t_final * xi_max / STEP_PHASE)
    return max(MIN_STEPS, math.ceil(per_revolution * revolutions), by_phase)


def _rk4_step(rhs, t, psi, dt):
    half = dt / 2.0
    k1 = rhs(t, psi)
    k2 = rhs(t + half, psi + half * k1)
    k3 = rhs(t + half, psi + half * k2)
    k4 = rhs(t + dt, psi + dt * k3)
    return psi + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (dt / 6.0)


def evolve(params: ModelParams, omega: float, t_final: float, steps: int, j: int) -> Trajectory:
    """
    RK4 de passo fixo partindo de |ξⱼ(0)⟩, com renormalização a cada passo.

    Levanta StepTooCoarse se a norma mudar mais de 1e-9 em um único passo.
    """
    j = validate_level(j)
    omega = validate_finite(omega, 'omega')
    t_final = validate_non_negative(t_final, 't_final')
    if isinstance(steps, bool) or int(steps) != steps or steps < MIN_STEPS:
        raise ValidationError(f'steps deve ser inteiro ≥ {MIN_STEPS} (recebido {steps!r}).')
    steps = int(steps)

    started = time.monotonic()
    initial = adiabatic_level(params, j).vector
    base = build_hamiltonian(params)

    # H(t) = U(ωt) H(φ₀) U(ωt)†, U = diag(e^{-2iωt}, e^{-iωt}, e^{-iωt}, 1)
    def rhs(t, psi):
        phases = phase_factors(omega * t)
        return -1j * phases * (base @ (phases.conj() * psi))

    dt = t_final / steps
    times = np.linspace(0.0, t_final, steps + 1)
    states = np.empty((steps + 1, 4), dtype=complex)
    fidelities = np.empty(steps + 1)
    states[0] = initial
    fidelities[0] = 1.0

    psi = initial.copy()
    max_renormalization = 0.0
    for n in range(steps):
        t = n * dt
        psi = _rk4_step(rhs, t, psi, dt)
        norm = np.linalg.norm(psi)
        drift = abs(norm - 1.0)
        if drift > STEP_DRIFT_LIMIT:
            raise StepTooCoarse(
                f'Deriva de norma {drift:.3e} no passo {n} (dt={dt:.3e}); aumente steps.'
            )
        max_renormalization = max(max_renormalization, drift)
        psi = psi / norm
        states[n + 1] = psi
        instantaneous = phase_factors(omega * times[n + 1]) * initial
        fidelities[n + 1] = min(abs(np.vdot(instantaneous, psi)) ** 2, 1.0)

    logger.debug(
        'Renormalização máxima por passo: %.3e', max_renormalization,
        extra={'action': 'renormalization', 'level_index': j, 'steps': steps},
    )
    performance_logger.log_evolve_time(steps, time.monotonic() - started, level_index=j)

    return Trajectory(
        params=params,
        level=j,
        omega=omega,
        times=times,
        states=states,
        fidelities=fidelities,
        max_renormalization=max_renormalization,
    )


def _time_to_probe(phi_start, phi_probe, omega):
    if omega == 0.0:
        offset = abs(math.remainder(phi_probe - phi_start, 2.0 * math.pi))
        if offset > 1e-12:
            raise ValidationError('Com omega = 0 o campo nunca atinge phi_probe.')
        return 0.0
    travel = (phi_probe - phi_start) if omega > 0 else (phi_start - phi_probe)
    return (travel % (2.0 * math.pi)) / abs(omega)


def qfi_from_trajectory(params: ModelParams, omega: float, j: int, phi_probe: float,
                        steps: int = None, margin_target: float = None) -> TrajectoryQfi:
    """
    QFIs de dois qubits e de cada qubit a partir do estado integrado em t*,
    o primeiro instante com φ(t*) = phi_probe.

    Levanta NotAdiabatic se a margem para |omega| fica abaixo do alvo.
    """
    j = validate_level(j)
    omega = validate_finite(omega, 'omega')
    phi_probe = validate_finite(phi_probe, 'phi_probe')

    report = adiabatic_margin(params, abs(omega), margin_target)
    if not report.is_adiabatic:
        raise NotAdiabatic(
            f'Margem {report.margin:.3g} abaixo do alvo {report.margin_target:.3g} '
            f'(phi_dot máximo {report.max_phi_dot:.3g}).'
        )

    t_probe = _time_to_probe(params.phi, phi_probe, omega)
    if steps is None:
        steps = default_steps(params, omega, t_probe)
    trajectory = evolve(params, omega, t_probe, steps, j)
    two_qubit, qubit_a, qubit_b = state_qfis(trajectory.final_state, phi_probe)

    return TrajectoryQfi(
        phi_probe=phi_probe,
        t_probe=t_probe,
        two_qubit=two_qubit,
        qubit_a=qubit_a,
        qubit_b=qubit_b,
        min_fidelity=trajectory.min_fidelity,
        margin=report.margin,
    )


def state_qfis(state: np.ndarray, phi: float):
    """
    (QFI de dois qubits, qfiᴬ, qfiᴮ) de um estado evoluído quando o campo está em φ.

    A família em φ vem da covariância da dinâmica: deslocar o azimute do
    campo por δ leva o estado ψ em e^{-iGδ}ψ.
    """
    def family(value):
        return phase_factors(value - phi) * state

    return (
        qfi_pure_oracle(family, phi),
        qfi_spectral(lambda value: reduce(family(value), 'A'), phi),
        qfi_spectral(lambda value: reduce(family(value), 'B'), phi),
    )
