"""
Condição de validade adiabática para a rotação φ(t) = φ₀ + φ̇t.

Os autovalores não dependem de t e a dependência temporal dos autovetores é
uma fase diagonal, logo os módulos |⟨ξₖ|Ḣ|ξⱼ⟩| também não dependem de t: o
máximo e o mínimo sobre t ∈ [0, T] se reduzem a uma única avaliação e T só
entra por φ̇ = Δφ/T.
"""
from dataclasses import dataclass, asdict
from typing import Tuple
import logging
import math

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from .eigensystem import numeric_levels
from .models import ModelParams, d_hamiltonian_d_phi
from .validators import validate_non_negative

logger = logging.getLogger(__name__)

REDUCTION_NOTE = (
    'Eigenvalues and matrix-element moduli are time independent; the condition '
    'is evaluated once at phi and the total time T enters only through phi_dot = delta_phi / T.'
)


@dataclass(frozen=True)
class AdiabaticReport:
    """Resultado da verificação adiabática para uma taxa φ̇"""
    phi_dot: float
    margin_target: float
    max_coupling_ratio: float
    min_gap: float
    margin: float
    max_phi_dot: float
    coupling_per_unit_rate: float
    note: str = REDUCTION_NOTE

    @property
    def is_adiabatic(self):
        return self.margin >= self.margin_target

    def as_dict(self):
        return asdict(self)


def coupling_ratios(params: ModelParams) -> Tuple[np.ndarray, float]:
    """
    Matriz |⟨ξₖ|∂φH|ξⱼ⟩/(ξⱼ − ξₖ)| por unidade de φ̇ (diagonal nula).
    """
    levels = numeric_levels(params)
    vectors = np.column_stack([level.vector for level in levels])
    energies = np.array([level.xi_j for level in levels])
    elements = np.abs(vectors.conj().T @ d_hamiltonian_d_phi(params) @ vectors)
    gaps = np.abs(energies[None, :] - energies[:, None])
    ratios = np.zeros_like(elements)
    off_diagonal = ~np.eye(len(levels), dtype=bool)
    ratios[off_diagonal] = elements[off_diagonal] / gaps[off_diagonal]
    return ratios, float(gaps[off_diagonal].min())


def adiabatic_margin(params: ModelParams, phi_dot: float, margin_target: float = None) -> AdiabaticReport:
    """
    Margem min_gap / max|⟨ξₖ|Ḣ|ξⱼ⟩/(ξⱼ − ξₖ)| com Ḣ = φ̇ ∂H/∂φ e a maior taxa
    φ̇ que ainda mantém margem ≥ margin_target.
    """
    phi_dot = validate_non_negative(phi_dot, 'phi_dot')
    if margin_target is None:
        margin_target = getattr(settings, 'QFI_MARGIN_TARGET', 100.0)
    margin_target = validate_non_negative(margin_target, 'margin_target')
    if margin_target <= 1.0:
        raise ValidationError(f'margin_target deve ser > 1 (recebido {margin_target}).')

    ratios, min_gap = coupling_ratios(params)
    per_unit = float(ratios.max())
    max_ratio = phi_dot * per_unit

    margin = math.inf if max_ratio == 0.0 else min_gap / max_ratio
    max_phi_dot = math.inf if per_unit == 0.0 else min_gap / (margin_target * per_unit)

    logger.debug(
        'Margem adiabática %.6g (alvo %.6g) para phi_dot=%.6g', margin, margin_target, phi_dot,
        extra={'action': 'adiabatic_margin', 'params': params.as_dict()},
    )
    return AdiabaticReport(
        phi_dot=phi_dot,
        margin_target=margin_target,
        max_coupling_ratio=max_ratio,
        min_gap=min_gap,
        margin=margin,
        max_phi_dot=max_phi_dot,
        coupling_per_unit_rate=per_unit,
    )
