"""
Especificação de varreduras e presets das figuras.

Cada preset reproduz um painel: parâmetros fixos, o parâmetro
varrido no eixo horizontal e a série de valores do parâmetro que distingue as
curvas. Faixas e séries são padrões sobrescrevíveis por arquivo:
D ∈ [−5, 5] e B ∈ [0, 10].
"""
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple
import math

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from .exceptions import UnknownPreset
from .models import ModelParams
from .validators import (
    LEVELS, validate_finite, validate_level, validate_polar_angle, validate_probe,
    validate_sweep_param,
)

COUPLING_RANGE = (-5.0, 5.0)
FIELD_RANGE = (0.0, 10.0)


@dataclass(frozen=True)
class SweepSpec:
    """Grade sobre um parâmetro, com série opcional sobre um segundo parâmetro"""
    base: ModelParams
    sweep_param: str
    start: float
    stop: float
    points: int
    levels: Tuple[int, ...] = LEVELS
    probes: Tuple[str, ...] = ('two-qubit',)
    preset_name: Optional[str] = None
    series_param: Optional[str] = None
    series: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        validate_sweep_param(self.sweep_param)
        start = validate_finite(self.start, 'start')
        stop = validate_finite(self.stop, 'stop')
        if self.sweep_param == 'theta':
            start, stop = max(start, 0.0), min(stop, math.pi)
        if not start < stop:
            raise ValidationError(f'start deve ser menor que stop ({start} >= {stop}).')
        if isinstance(self.points, bool) or int(self.points) != self.points or self.points < 2:
            raise ValidationError(f'points deve ser inteiro ≥ 2 (recebido {self.points!r}).')
        if not self.levels or not self.probes:
            raise ValidationError('levels e probes não podem ser vazios.')

        object.__setattr__(self, 'start', start)
        object.__setattr__(self, 'stop', stop)
        object.__setattr__(self, 'points', int(self.points))
        object.__setattr__(self, 'levels', tuple(sorted({validate_level(j) for j in self.levels})))
        object.__setattr__(self, 'probes', tuple(validate_probe(p) for p in dict.fromkeys(self.probes)))

        series = tuple(validate_finite(value, 'series') for value in self.series)
        if series and self.series_param is None:
            raise ValidationError('series exige series_param.')
        if self.series_param is not None:
            validate_sweep_param(self.series_param)
            if self.series_param == self.sweep_param:
                raise ValidationError('series_param deve diferir de sweep_param.')
            if self.series_param == 'theta':
                series = tuple(validate_polar_angle(value) for value in series)
        object.__setattr__(self, 'series', series)

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    def series_values(self):
        """Valores da série; sem série, uma única passada com ``None``"""
        return self.series if self.series else (None,)

    def with_points(self, points):
        return replace(self, points=points)


def _default_points():
    return getattr(settings, 'QFI_SWEEP_POINTS', 201)


def _spec(name, base, sweep_param, sweep_range, probes, levels, series_param, series):
    return SweepSpec(
        base=base,
        sweep_param=sweep_param,
        start=sweep_range[0],
        stop=sweep_range[1],
        points=_default_points(),
        levels=levels,
        probes=probes,
        preset_name=name,
        series_param=series_param,
        series=series,
    )


PI = math.pi

# nome -> (parâmetros fixos, parâmetro varrido, faixa, sondas, níveis, série)
FIGURE_PRESETS = {
    'fig1': (
        dict(J=0.1, D=0.0, B1=1.2, B2=3.0, theta=PI / 4),
        'D', COUPLING_RANGE, ('two-qubit',), (1, 3),
        ('theta', (PI / 8, PI / 4, 3 * PI / 8, PI / 2, 5 * PI / 8, 3 * PI / 4, 7 * PI / 8)),
    ),
    'fig2a': (
        dict(J=1.3, D=0.0, B1=1.5, B2=3.0, theta=PI / 4),
        'D', COUPLING_RANGE, ('two-qubit',), (1,),
        ('B1', (-1.5, 0.0, 0.5, 1.5, 3.0)),
    ),
    'fig2b': (
        dict(J=1.3, D=0.0, B1=1.5, B2=3.0, theta=PI / 4),
        'D', COUPLING_RANGE, ('two-qubit',), (1,),
        ('B2', (1.0, 2.0, 3.0, 5.0, 8.0)),
    ),
    'fig3': (
        dict(J=1.3, D=0.0, B1=1.0, B2=3.0, theta=PI / 4),
        'B2', FIELD_RANGE, ('two-qubit',), (1, 3),
        ('theta', (PI / 8, PI / 4, 3 * PI / 8, PI / 2)),
    ),
    'fig4': (
        dict(J=0.2, D=0.0, B1=3.0, B2=2.2, theta=0.6),
        'D', COUPLING_RANGE, ('A',), (1,),
        ('theta', (0.3, 0.6, 0.9, 1.2, PI / 2)),
    ),
    'fig5': (
        dict(J=0.5, D=0.0, B1=3.0, B2=2.5, theta=0.5),
        'D', COUPLING_RANGE, ('A',), (1,),
        ('J', (0.2, 0.5, 1.0, 2.0, 4.0)),
    ),
    'fig6a': (
        dict(J=0.5, D=0.0, B1=3.0, B2=2.2, theta=1.1),
        'D', COUPLING_RANGE, ('A',), (1,),
        ('B1', (0.0, 1.0, 2.0, 3.0, 5.0)),
    ),
    'fig6b': (
        dict(J=0.5, D=0.0, B1=3.0, B2=2.2, theta=1.1),
        'D', COUPLING_RANGE, ('A',), (1,),
        ('B2', (1.0, 2.2, 4.0, 6.0, 10.0)),
    ),
    # B₁ nos dois sinais
    'fig7': (
        dict(J=1.3, D=-0.9, B1=0.0, B2=1.0, theta=0.6),
        'B1', COUPLING_RANGE, ('A',), (1,),
        ('theta', (0.6, PI - 0.6)),
    ),
}


def figure_preset(name: str) -> SweepSpec:
    """
    SweepSpec completo para um painel de figura (fig1 ... fig7).
    """
    try:
        base, sweep_param, sweep_range, probes, levels, (series_param, series) = FIGURE_PRESETS[name]
    except KeyError:
        raise UnknownPreset(
            f'Preset desconhecido: {name!r}. Disponíveis: {", ".join(FIGURE_PRESETS)}.'
        )
    return _spec(name, ModelParams(**base), sweep_param, sweep_range, probes, levels,
                 series_param, series)
