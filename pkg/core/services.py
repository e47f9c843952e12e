from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional
import logging
import time

from django.conf import settings

from .adiabatic import adiabatic_margin
from .eigensystem import analytic_level, spectral_invariants
from .exceptions import DegenerateCoefficients, DegenerateSpectrum
from .logging_config import performance_logger
from .metrology import cramer_rao, qfi
from .models import ModelParams
from .presets import SweepSpec
from .validators import LEVELS, PROBES

logger = logging.getLogger(__name__)


def column_name(probe: str, j: int) -> str:
    """Nome da coluna de saída: qfi_two_qubit_1, qfi_A_3, ..."""
    return f"qfi_{probe.replace('-', '_')}_{j}"


@dataclass
class SweepRecord:
    """
    Um ponto da grade. Pontos com espectro degenerado ficam com valores
    ``None`` e ``degenerate = True``.
    """
    sweep_param: str
    sweep_value: float
    series_param: Optional[str] = None
    series_value: Optional[float] = None
    values: Dict[str, Optional[float]] = field(default_factory=dict)
    methods: Dict[str, str] = field(default_factory=dict)
    fallback: bool = False
    degenerate: bool = False
    error: Optional[str] = None


class BaseService:
    """
    Classe base para todos os services
    """
    def __init__(self, workers: int = None):
        if workers is None:
            workers = getattr(settings, 'QFI_SWEEP_WORKERS', 1)
        self.workers = max(1, int(workers))

    def _log_action(self, action: str, **kwargs):
        """Log estruturado das ações do service"""
        logger.info(action, extra={'action': action, **kwargs})


class PointService(BaseService):
    """
    Avaliação completa de um único ponto do espaço de parâmetros
    """

    def evaluate(self, params: ModelParams, levels=LEVELS, probes=PROBES,
                 shots: int = 1, phi_dot: float = None, margin_target: float = None) -> Dict:
        """
        Invariantes espectrais, coeficientes por nível, QFIs com o limite de
        Cramér-Rao para ``shots`` repetições e, opcionalmente, o relatório adiabático.
        """
        invariants = spectral_invariants(params)
        result = {
            'params': params.as_dict(),
            'invariants': {
                'abs_d_sq': invariants.abs_d_sq,
                'xi_norm_sq': invariants.xi_norm_sq,
                'xi': list(invariants.xi),
                'min_gap': invariants.min_gap,
            },
            'levels': {},
            'qfi': {},
            'cramer_rao': {},
            'fallback': False,
        }

        for j in levels:
            result['levels'][str(j)] = self._level_summary(params, j)

        for probe in probes:
            for j in levels:
                value = qfi(params, j, probe)
                key = column_name(probe, j)
                result['qfi'][key] = {'value': value.value, 'method': value.method}
                result['cramer_rao'][key] = cramer_rao(value.value, shots)
                result['fallback'] = result['fallback'] or value.fallback

        if phi_dot is not None:
            result['adiabatic'] = adiabatic_margin(params, phi_dot, margin_target).as_dict()

        self._log_action('point', params=params.as_dict())
        return result

    def _level_summary(self, params, j):
        try:
            level = analytic_level(params, j)
        except DegenerateCoefficients as exc:
            return {'xi': spectral_invariants(params).xi[j - 1], 'source': 'numeric-fallback',
                    'reason': str(exc)}
        return {
            'xi': level.xi_j,
            'source': level.source,
            'f': [level.f.real, level.f.imag],
            'm': [level.m.real, level.m.imag],
            'g': [level.g.real, level.g.imag],
            'P': [level.P.real, level.P.imag],
            'N': level.N,
        }


class SweepService(BaseService):
    """
    Service para varreduras de QFI sobre uma grade de parâmetros
    """

    def run_sweep(self, spec: SweepSpec) -> List[SweepRecord]:
        """
        Um registro por ponto, ordenado pela série e depois por sweep_value.

        Os pontos são independentes; o pool preserva a ordem da grade, logo a
        saída não depende do número de workers.
        """
        started = time.monotonic()
        tasks = [
            (series_value, float(value))
            for series_value in spec.series_values()
            for value in spec.grid()
        ]

        if self.workers == 1:
            records = [self._evaluate_point(spec, s, v) for s, v in tasks]
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                records = list(pool.map(lambda task: self._evaluate_point(spec, *task), tasks))

        degenerate = sum(1 for record in records if record.degenerate)
        if degenerate:
            logger.warning(
                '%d pontos com espectro degenerado na varredura de %s', degenerate, spec.sweep_param,
                extra={'action': 'sweep', 'points': len(records)},
            )
        performance_logger.log_sweep_time(
            spec.sweep_param, len(records), time.monotonic() - started, preset=spec.preset_name,
        )
        return records

    def _point_params(self, spec, series_value, sweep_value):
        changes = {spec.sweep_param: sweep_value}
        if spec.series_param is not None and series_value is not None:
            changes[spec.series_param] = series_value
        return spec.base.with_changes(**changes)

    def _evaluate_point(self, spec: SweepSpec, series_value, sweep_value) -> SweepRecord:
        record = SweepRecord(
            sweep_param=spec.sweep_param,
            sweep_value=sweep_value,
            series_param=spec.series_param,
            series_value=series_value,
        )
        params = self._point_params(spec, series_value, sweep_value)
        try:
            for probe in spec.probes:
                for j in spec.levels:
                    value = qfi(params, j, probe)
                    key = column_name(probe, j)
                    record.values[key] = value.value
                    record.methods[key] = value.method
                    record.fallback = record.fallback or value.fallback
        except DegenerateSpectrum as exc:
            record.values = {column_name(p, j): None for p in spec.probes for j in spec.levels}
            record.methods = {}
            record.degenerate = True
            record.error = str(exc)
        return record
