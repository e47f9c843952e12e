"""
Autovalores e autovetores instantâneos de H(t).

Dois caminhos independentes: as formas fechadas (autovalores ±ξ₁, ±ξ₃ e os
coeficientes f, m, g, P) e a diagonalização numérica com fixação
de calibre determinística. O numérico serve de oráculo e de fallback quando os
coeficientes analíticos ficam mal condicionados.
"""
from dataclasses import dataclass
from typing import Optional, Tuple
import logging
import math

import numpy as np
from django.conf import settings

from .exceptions import DegenerateCoefficients, DegenerateSpectrum, RadicandNegative
from .models import ModelParams, build_hamiltonian, phase_factors
from .validators import validate_level

logger = logging.getLogger(__name__)

ANALYTIC = 'analytic'
NUMERIC = 'numeric-fallback'

RADICAND_TOLERANCE = 1e-12
GAUGE_FOURTH_COMPONENT = 0.1


def _threshold(name, default):
    return getattr(settings, name, default)


@dataclass(frozen=True)
class SpectralInvariants:
    """|d|², o símbolo |ξ|² e os quatro autovalores (ξ₁, ξ₂, ξ₃, ξ₄)"""
    abs_d_sq: float
    xi_norm_sq: float
    xi: Tuple[float, float, float, float]

    @property
    def min_gap(self):
        ordered = sorted(self.xi)
        return min(b - a for a, b in zip(ordered, ordered[1:]))


@dataclass(frozen=True)
class EigenLevel:
    """
    Um nível adiabático: autovalor, coeficientes e vetor de estado.

    Para ``source == 'numeric-fallback'`` os coeficientes f, m, g, P e N
    ficam como ``None``; apenas ``vector`` e ``xi_j`` são definidos.
    """
    j: int
    xi_j: float
    vector: np.ndarray
    source: str
    f: Optional[complex] = None
    m: Optional[complex] = None
    g: Optional[complex] = None
    P: Optional[complex] = None
    N: Optional[float] = None

    @property
    def is_analytic(self):
        return self.source == ANALYTIC


def _checked_sqrt(radicand, reference, label):
    if radicand < -RADICAND_TOLERANCE * reference:
        raise RadicandNegative(f'Radicando de {label} negativo: {radicand!r}')
    if radicand < 0.0:
        logger.debug('Radicando de %s truncado para zero (%r)', label, radicand)
        return 0.0
    return math.sqrt(radicand)


def spectral_invariants(params: ModelParams) -> SpectralInvariants:
    """
    |d|² = 4(J² + D²), |ξ|² e ξ₁..ξ₄.

    ξ₃ é avaliado como √Q/ξ₁, com Q = ξ₁²ξ₃² = (B₁² − B₂²)² + |d|²(B₁ + B₂cosθ)²;
    é o mesmo valor de ½√(2|d|² + 4B₁² + 4B₂² − 2|ξ|²) sem o cancelamento.
    """
    scale = params.scale
    d_sq = params.abs_d_sq
    b1, b2 = params.B1, params.B2
    cos_t = math.cos(params.theta)

    inner = (
        -4.0 * cos_t ** 2 * d_sq * b2 ** 2
        - 8.0 * cos_t * d_sq * b1 * b2
        + d_sq ** 2
        + 4.0 * d_sq * b2 ** 2
        + 16.0 * b1 ** 2 * b2 ** 2
    )
    xi_norm_sq = _checked_sqrt(inner, scale ** 4, '|ξ|²')

    base = 2.0 * d_sq + 4.0 * b1 ** 2 + 4.0 * b2 ** 2
    xi_1 = 0.5 * _checked_sqrt(base + 2.0 * xi_norm_sq, scale ** 2, 'ξ₁')
    # só para a verificação do radicando impresso
    _checked_sqrt(base - 2.0 * xi_norm_sq, scale ** 2, 'ξ₃')

    product = (b1 ** 2 - b2 ** 2) ** 2 + d_sq * (b1 + b2 * cos_t) ** 2
    xi_3 = min(math.sqrt(product) / xi_1, xi_1) if xi_1 > 0.0 else 0.0

    return SpectralInvariants(
        abs_d_sq=d_sq,
        xi_norm_sq=xi_norm_sq,
        xi=(xi_1, -xi_1, xi_3, -xi_3),
    )


def _denominator(params, j, xi_j, xi_norm_sq):
    d_sq = params.abs_d_sq
    b1, b2 = params.B1, params.B2
    cos_t = math.cos(params.theta)
    if j in (1, 2):
        return (
            4.0 * b2 * (xi_norm_sq / 4.0 - d_sq / 4.0 + b1 * (b1 - xi_j)) * cos_t
            + (b1 - xi_j) * (xi_norm_sq - d_sq)
            + 4.0 * b1 * b2 ** 2
        )
    return (
        4.0 * b2 * (-xi_norm_sq / 4.0 - d_sq / 4.0 + b1 * (b1 - xi_j)) * cos_t
        + (-b1 + xi_j) * (xi_norm_sq + d_sq)
        + 4.0 * b1 * b2 ** 2
    )


def analytic_level(params: ModelParams, j: int) -> EigenLevel:
    """
    Autoestado |ξⱼ⟩ = Nⱼ (fⱼe^{-2iφ}, mⱼe^{-iφ}, gⱼe^{-iφ}, 1) pelas formas fechadas.

    Levanta DegenerateCoefficients fora do regime bem condicionado
    (|Pⱼ| ou B₂ sinθ |d| pequenos demais) e DegenerateSpectrum quando ξ₃ = ξ₄ = 0.
    """
    j = validate_level(j)
    invariants = spectral_invariants(params)
    scale = params.scale

    if abs(invariants.xi[2]) < _threshold('QFI_EPS_GAP', 1e-9) * scale:
        raise DegenerateSpectrum(f'ξ₃ = ξ₄ = 0 para {params}')

    sin_t = math.sin(params.theta)
    cos_t = math.cos(params.theta)
    d = params.d
    coupling = abs(params.B2 * sin_t) * abs(d)
    if coupling <= _threshold('QFI_EPS_C', 1e-10) * scale ** 3:
        raise DegenerateCoefficients(f'B₂ sinθ |d| = {coupling!r} anula f, m, g')

    xi_j = invariants.xi[j - 1]
    xi_norm_sq = invariants.xi_norm_sq
    denominator = _denominator(params, j, xi_j, xi_norm_sq)
    if abs(denominator) <= _threshold('QFI_EPS_P', 1e-8) * scale ** 3:
        raise DegenerateCoefficients(f'|P_{j}| = {abs(denominator)!r} abaixo do limiar')

    b1, b2 = params.B1, params.B2
    signed_xi_sq = xi_norm_sq if j in (1, 2) else -xi_norm_sq

    f = -2.0 * b2 ** 2 * d * sin_t ** 2 / denominator
    m = 2.0 * b2 * sin_t * d * (b2 * cos_t + b1 - xi_j) / denominator
    g = -b2 * sin_t * (4.0 * b1 ** 2 - 4.0 * b1 * xi_j + params.abs_d_sq + signed_xi_sq) / denominator

    norm = 1.0 / math.sqrt(abs(f) ** 2 + abs(m) ** 2 + abs(g) ** 2 + 1.0)
    amplitudes = np.array([f, m, g, 1.0], dtype=complex)
    vector = norm * phase_factors(params.phi) * amplitudes

    return EigenLevel(
        j=j, xi_j=xi_j, vector=vector, source=ANALYTIC,
        f=complex(f), m=complex(m), g=complex(g), P=complex(denominator), N=norm,
    )


def gauge_fix(vector: np.ndarray) -> np.ndarray:
    """
    Fixa a fase: quarta componente real positiva quando |v₄| > 0.1, senão a
    componente de maior módulo.
    """
    if abs(vector[3]) > GAUGE_FOURTH_COMPONENT:
        anchor = vector[3]
    else:
        anchor = vector[int(np.argmax(np.abs(vector)))]
    return vector * (abs(anchor) / anchor)


def _check_gaps(eigenvalues, params):
    gaps = np.diff(np.sort(eigenvalues))
    min_gap = float(gaps.min())
    if min_gap <= _threshold('QFI_EPS_GAP', 1e-9) * params.scale:
        raise DegenerateSpectrum(f'Gap mínimo {min_gap!r} para {params}')
    return min_gap


def numeric_levels(params: ModelParams):
    """
    Os quatro níveis por diagonalização numérica, na ordem j = 1..4.
    """
    hamiltonian = build_hamiltonian(params)
    eigenvalues, eigenvectors = np.linalg.eigh(hamiltonian)
    _check_gaps(eigenvalues, params)

    invariants = spectral_invariants(params)
    levels = []
    for j, target in enumerate(invariants.xi, start=1):
        index = int(np.argmin(np.abs(eigenvalues - target)))
        mismatch = abs(eigenvalues[index] - target)
        if mismatch > 1e-6 * params.scale:
            logger.warning(
                'Autovalor numérico %r distante de ξ_%d = %r', eigenvalues[index], j, target,
                extra={'action': 'level_pairing', 'level_index': j},
            )
        vector = gauge_fix(eigenvectors[:, index].astype(complex))
        vector = vector / np.linalg.norm(vector)
        levels.append(EigenLevel(j=j, xi_j=float(eigenvalues[index]), vector=vector, source=NUMERIC))
    return levels


def numeric_level(params: ModelParams, j: int) -> EigenLevel:
    """Nível j pela diagonalização numérica (oráculo independente)"""
    j = validate_level(j)
    return numeric_levels(params)[j - 1]


def adiabatic_level(params: ModelParams, j: int) -> EigenLevel:
    """
    Nível j pelas formas fechadas, caindo para o numérico quando os
    coeficientes são degenerados.
    """
    try:
        return analytic_level(params, j)
    except DegenerateCoefficients as exc:
        logger.debug(
            'Fallback numérico para o nível %s: %s', j, exc,
            extra={'action': 'numeric_fallback', 'level_index': j, 'params': params.as_dict()},
        )
        return numeric_level(params, j)
