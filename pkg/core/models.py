"""
Modelo físico: dois spins XX com interação Dzyaloshinskii-Moriya ao longo de z.

O spin 1 sente o campo estático B₁ẑ; o spin 2 sente o campo girante
B₂ n̂(θ, φ). Base fixa {↑↑, ↑↓, ↓↑, ↓↓}, ħ = 1 e os campos já absorvem os
fatores giromagnéticos.
"""
from dataclasses import dataclass, asdict, replace
import math

import numpy as np

from .validators import validate_finite, validate_polar_angle, wrap_azimuth

# Matrizes de Pauli na base {↑, ↓}
SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Autovalores do gerador de fase: H(φ) = e^{-iGφ} H(0) e^{iGφ}
PHASE_GENERATOR_DIAGONAL = np.array([2.0, 1.0, 1.0, 0.0])


def _on_spin_1(op):
    return np.kron(op, SIGMA_0)


def _on_spin_2(op):
    return np.kron(SIGMA_0, op)


@dataclass(frozen=True)
class ModelParams:
    """
    Os seis parâmetros físicos de uma instância do modelo.

    J, D, B1 e B2 podem ser negativos ou nulos; θ deve estar em [0, π] e φ é
    levado ao representante canônico em [0, 2π).
    """
    J: float
    D: float
    B1: float
    B2: float
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        for name in ('J', 'D', 'B1', 'B2'):
            object.__setattr__(self, name, validate_finite(getattr(self, name), name))
        object.__setattr__(self, 'theta', validate_polar_angle(self.theta))
        object.__setattr__(self, 'phi', wrap_azimuth(self.phi))

    @property
    def scale(self):
        """Escala de energia usada pelos limiares relativos"""
        return max(abs(self.J), abs(self.D), abs(self.B1), abs(self.B2), 1.0)

    @property
    def d(self):
        """Acoplamento complexo d = 2(J + iD)"""
        return 2.0 * complex(self.J, self.D)

    @property
    def abs_d_sq(self):
        return 4.0 * (self.J * self.J + self.D * self.D)

    def with_changes(self, **changes):
        """Cópia validada com alguns campos trocados"""
        return replace(self, **changes)

    def as_dict(self):
        return asdict(self)


def field_direction(theta, phi):
    """Vetor unitário n̂(θ, φ) do campo girante"""
    return np.array([
        math.sin(theta) * math.cos(phi),
        math.sin(theta) * math.sin(phi),
        math.cos(theta),
    ])


def build_hamiltonian(params: ModelParams) -> np.ndarray:
    """
    H = J(σ₁ˣσ₂ˣ + σ₁ʸσ₂ʸ) + B₁σ₁ᶻ + B₂ n̂·σ⃗₂ + D(σ⃗₁×σ⃗₂)ᶻ

    Montado por produtos tensoriais da forma de operadores; a matriz impressa
    com o elemento (4,4) = B₁ − B₂cosθ não é usada.
    """
    n = field_direction(params.theta, params.phi)

    exchange = np.kron(SIGMA_X, SIGMA_X) + np.kron(SIGMA_Y, SIGMA_Y)
    dm = np.kron(SIGMA_X, SIGMA_Y) - np.kron(SIGMA_Y, SIGMA_X)
    rotating = n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z

    hamiltonian = (
        params.J * exchange
        + params.B1 * _on_spin_1(SIGMA_Z)
        + params.B2 * _on_spin_2(rotating)
        + params.D * dm
    )
    return hamiltonian


def d_hamiltonian_d_phi(params: ModelParams) -> np.ndarray:
    """
    ∂H/∂φ analítico: só os elementos (1,2) e (3,4) dependem de φ.
    """
    element = -1j * params.B2 * math.sin(params.theta) * np.exp(-1j * params.phi)
    derivative = np.zeros((4, 4), dtype=complex)
    derivative[0, 1] = element
    derivative[2, 3] = element
    derivative[1, 0] = np.conj(element)
    derivative[3, 2] = np.conj(element)
    return derivative


def phase_generator() -> np.ndarray:
    """Gerador diagonal G = diag(2, 1, 1, 0) da dependência em φ"""
    return np.diag(PHASE_GENERATOR_DIAGONAL).astype(complex)


def phase_factors(phi) -> np.ndarray:
    """Fases (e^{-2iφ}, e^{-iφ}, e^{-iφ}, 1) dos autovetores"""
    return np.exp(-1j * PHASE_GENERATOR_DIAGONAL * phi)
