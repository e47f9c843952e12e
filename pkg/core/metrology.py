"""
Informação de Fisher quântica (QFI) para o ângulo azimutal φ.

Formas fechadas para a sonda de dois qubits e para cada qubit isolado, mais
os oráculos independentes usados para validá-las: suscetibilidade de
fidelidade para estados puros e a soma espectral sobre a SLD para estados
mistos.
"""
from dataclasses import dataclass
from typing import Callable
import logging
import math

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from .eigensystem import EigenLevel, adiabatic_level
from .exceptions import NonNormalizedInput, ZeroSupportDerivative
from .models import ModelParams, PHASE_GENERATOR_DIAGONAL, phase_factors
from .validators import (
    LEVELS, PROBES, validate_keep, validate_level, validate_non_negative, validate_probe,
)

logger = logging.getLogger(__name__)

CLOSED_FORM = 'closed-form'
SPECTRAL = 'spectral'
FIDELITY_ORACLE = 'fidelity-oracle'

TWO_QUBIT = 'two-qubit'

NORM_TOLERANCE = 1e-9
SUPPORT_LEAK_TOLERANCE = 1e-8
DENSITY_TOLERANCE = 1e-12


def _eps_sld():
    return getattr(settings, 'QFI_EPS_SLD', 1e-12)


def _default_delta():
    return getattr(settings, 'QFI_FD_DELTA', 1e-4)


@dataclass(frozen=True)
class QfiValue:
    """Um valor de QFI com o nível, a sonda e o método que o produziram"""
    value: float
    level: int
    probe: str
    method: str

    @property
    def fallback(self):
        return self.method != CLOSED_FORM


def _validate_delta(delta):
    delta = validate_non_negative(delta, 'delta')
    if not 1e-6 <= delta <= 1e-2:
        raise ValidationError(f'delta deve estar em [1e-6, 1e-2] (recebido {delta}).')
    return delta


def _richardson(estimate, delta):
    """Um passo de Richardson sobre δ e δ/2 para erro O(δ²)"""
    return (4.0 * estimate(delta / 2.0) - estimate(delta)) / 3.0


# ---------------------------------------------------------------------------
# Estados puros
# ---------------------------------------------------------------------------

def _checked_state(vector):
    vector = np.asarray(vector, dtype=complex)
    norm = np.linalg.norm(vector)
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise NonNormalizedInput(f'Norma {norm!r} difere de 1')
    return vector


def _infidelity(a, b):
    """
    1 − |⟨a|b⟩| normalizado, calculado pelo resíduo ortogonal de b contra a
    """
    overlap = np.vdot(a, b)
    residual = b - (overlap / np.vdot(a, a).real) * a
    sin_sq = min(np.vdot(residual, residual).real / np.vdot(b, b).real, 1.0)
    return sin_sq / (1.0 + math.sqrt(1.0 - sin_sq))


def qfi_pure_oracle(state_at: Callable[[float], np.ndarray], phi: float, delta: float = None) -> float:
    """
    Suscetibilidade de fidelidade 8(1 − |⟨ψ|ψ'⟩|)/δ² com extrapolação de Richardson.

    O par de estados é centrado em φ (ψ(φ − δ/2), ψ(φ + δ/2)); depende só do
    módulo da sobreposição, portanto não depende do calibre de ``state_at``.
    """
    delta = _validate_delta(_default_delta() if delta is None else delta)

    def susceptibility(step):
        before = _checked_state(state_at(phi - step / 2.0))
        after = _checked_state(state_at(phi + step / 2.0))
        return 8.0 * _infidelity(before, after) / step ** 2

    return max(_richardson(susceptibility, delta), 0.0)


def qfi_pure_state(vector: np.ndarray) -> float:
    """
    QFI de estado puro com a derivada exata ∂φψ = −iGψ: F = 4 Var_ψ(G)
    """
    vector = _checked_state(vector)
    populations = np.abs(vector) ** 2
    populations = populations / populations.sum()
    mean = float(np.dot(populations, PHASE_GENERATOR_DIAGONAL))
    variance = float(np.dot(populations, (PHASE_GENERATOR_DIAGONAL - mean) ** 2))
    return 4.0 * variance


# ---------------------------------------------------------------------------
# Estados reduzidos
# ---------------------------------------------------------------------------

def reduce(state: np.ndarray, keep: str) -> np.ndarray:
    """
    Traço parcial de |ψ⟩⟨ψ| sobre o qubit descartado (base {↑↑, ↑↓, ↓↑, ↓↓}).
    """
    keep = validate_keep(keep)
    state = np.asarray(state, dtype=complex)
    rho = np.outer(state, state.conj()).reshape(2, 2, 2, 2)
    if keep == 'A':
        reduced = np.trace(rho, axis1=1, axis2=3)
    else:
        reduced = np.trace(rho, axis1=0, axis2=2)
    return 0.5 * (reduced + reduced.conj().T)


def closed_form_reduced_state(level: EigenLevel, keep: str, phi: float) -> np.ndarray:
    """
    ρᴬ (ou ρᴮ) montado diretamente de f, m, g, N de um nível analítico.
    """
    keep = validate_keep(keep)
    f, m, g, norm_sq = level.f, level.m, level.g, level.N ** 2
    phase = np.exp(-1j * phi)
    if keep == 'A':
        up, down = abs(f) ** 2 + abs(m) ** 2, abs(g) ** 2 + 1.0
        coherence = (f * g.conjugate() + m) * phase
    else:
        up, down = abs(f) ** 2 + abs(g) ** 2, abs(m) ** 2 + 1.0
        coherence = (f * m.conjugate() + g) * phase
    return norm_sq * np.array([[up, coherence], [np.conj(coherence), down]], dtype=complex)


def check_density_matrix(rho: np.ndarray) -> np.ndarray:
    """
    Valida uma matriz densidade 2×2: hermitiana, traço 1, autovalores ≥ −1e-12
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValidationError(f'Matriz densidade deve ser 2×2 (recebido {rho.shape}).')
    if np.max(np.abs(rho - rho.conj().T)) > DENSITY_TOLERANCE:
        raise ValidationError('Matriz densidade não é hermitiana.')
    if abs(np.trace(rho).real - 1.0) > DENSITY_TOLERANCE:
        raise ValidationError(f'Traço {np.trace(rho).real!r} difere de 1.')
    if np.linalg.eigvalsh(rho).min() < -DENSITY_TOLERANCE:
        raise ValidationError('Matriz densidade com autovalor negativo.')
    return rho


def _eigenbasis(rho):
    populations, basis = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    return np.clip(populations, 0.0, None), basis


def _support_terms(populations, projected):
    """
    Pares (i, k) com pᵢ + pₖ acima do corte; falha se ∂ρ vaza para fora do suporte
    """
    cutoff = _eps_sld()
    size = len(populations)
    for i in range(size):
        for k in range(size):
            total = populations[i] + populations[k]
            if total < cutoff:
                if abs(projected[i, k]) > SUPPORT_LEAK_TOLERANCE:
                    raise ZeroSupportDerivative(
                        f'⟨{i}|∂ρ|{k}⟩ = {abs(projected[i, k])!r} fora do suporte'
                    )
                continue
            yield i, k, total


def sld(rho: np.ndarray, drho: np.ndarray) -> np.ndarray:
    """
    Derivada logarítmica simétrica: L com ∂ρ = ½(Lρ + ρL), montada na base
    própria de ρ e restrita ao suporte.
    """
    rho = check_density_matrix(rho)
    drho = np.asarray(drho, dtype=complex)
    if np.max(np.abs(drho - drho.conj().T)) > 1e-10:
        raise ValidationError('∂ρ não é hermitiana.')
    if abs(np.trace(drho)) > 1e-10:
        raise ValidationError('∂ρ deve ter traço nulo.')

    populations, basis = _eigenbasis(rho)
    projected = basis.conj().T @ drho @ basis
    operator = np.zeros_like(projected)
    for i, k, total in _support_terms(populations, projected):
        operator[i, k] = 2.0 * projected[i, k] / total
    return basis @ operator @ basis.conj().T


def qfi_spectral(rho_at: Callable[[float], np.ndarray], phi: float, delta: float = None) -> float:
    """
    QFI espectral Σᵢₖ 2|⟨i|∂φρ|k⟩|²/(pᵢ + pₖ) com ∂φρ por diferença central
    extrapolada (Richardson).
    """
    delta = _validate_delta(_default_delta() if delta is None else delta)
    rho = check_density_matrix(rho_at(phi))

    def central(step):
        return (np.asarray(rho_at(phi + step), dtype=complex)
                - np.asarray(rho_at(phi - step), dtype=complex)) / (2.0 * step)

    drho = _richardson(central, delta)
    drho = 0.5 * (drho + drho.conj().T)

    populations, basis = _eigenbasis(rho)
    projected = basis.conj().T @ drho @ basis
    value = 0.0
    for i, k, total in _support_terms(populations, projected):
        value += 2.0 * abs(projected[i, k]) ** 2 / total
    return float(value)


def cramer_rao(F: float, N: int = 1) -> float:
    """
    Limite de Cramér-Rao quântico Δφ ≥ 1/√(N F); infinito quando F = 0.
    """
    F = validate_non_negative(F, 'F')
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise ValidationError(f'N deve ser inteiro positivo (recebido {N!r}).')
    if F == 0.0:
        return math.inf
    return 1.0 / math.sqrt(int(N) * F)


# ---------------------------------------------------------------------------
# QFI do modelo
# ---------------------------------------------------------------------------

def _state_family(params, level):
    # a dependência em φ dos autoestados é a fase diagonal e^{-iG(φ - φ₀)}
    return lambda phi: phase_factors(phi - params.phi) * level.vector


def qfi_two_qubit(params: ModelParams, j: int) -> QfiValue:
    """
    QFIⱼ = 4|Nⱼ|²(|gⱼ|² + |mⱼ|² + 4|fⱼ|² − |Nⱼ|²(|gⱼ|² + |mⱼ|² + 2|fⱼ|²)²)

    Estados com coeficientes degenerados usam o oráculo de fidelidade sobre
    o autovetor numérico.
    """
    j = validate_level(j)
    level = adiabatic_level(params, j)
    if level.is_analytic:
        f_sq, m_sq, g_sq = abs(level.f) ** 2, abs(level.m) ** 2, abs(level.g) ** 2
        norm_sq = level.N ** 2
        value = 4.0 * norm_sq * (g_sq + m_sq + 4.0 * f_sq - norm_sq * (g_sq + m_sq + 2.0 * f_sq) ** 2)
        return QfiValue(value=max(value, 0.0), level=j, probe=TWO_QUBIT, method=CLOSED_FORM)

    value = qfi_pure_oracle(_state_family(params, level), params.phi)
    return QfiValue(value=value, level=j, probe=TWO_QUBIT, method=FIDELITY_ORACLE)


def qfi_one_qubit(params: ModelParams, j: int, probe: str) -> QfiValue:
    """
    qfiᴬⱼ = 4|Nⱼ|⁴|mⱼ + fⱼgⱼ*|² e, para o qubit B, 4|Nⱼ|⁴|fⱼmⱼ* + gⱼ|².

    Com coeficientes degenerados, QFI espectral do estado reduzido numérico.
    """
    j = validate_level(j)
    probe = validate_probe(probe)
    if probe == TWO_QUBIT:
        raise ValidationError('qfi_one_qubit aceita apenas as sondas A ou B.')

    level = adiabatic_level(params, j)
    if level.is_analytic:
        f, m, g = level.f, level.m, level.g
        coherence = m + f * g.conjugate() if probe == 'A' else f * m.conjugate() + g
        value = 4.0 * level.N ** 4 * abs(coherence) ** 2
        return QfiValue(value=value, level=j, probe=probe, method=CLOSED_FORM)

    family = _state_family(params, level)
    value = qfi_spectral(lambda phi: reduce(family(phi), probe), params.phi)
    return QfiValue(value=value, level=j, probe=probe, method=SPECTRAL)


def qfi(params: ModelParams, j: int, probe: str) -> QfiValue:
    """QFI de um nível para qualquer sonda"""
    if validate_probe(probe) == TWO_QUBIT:
        return qfi_two_qubit(params, j)
    return qfi_one_qubit(params, j, probe)


def qfi_all(params: ModelParams, levels=LEVELS, probes=PROBES):
    """
    Todas as combinações (sonda, nível) pedidas, indexadas por (probe, j).
    """
    return {(probe, j): qfi(params, j, probe) for probe in probes for j in levels}
