"""
Bateria de propriedades com gerador semeado.

Verificações ``hard`` (identidades exatas, oráculos) derrubam o comando;
verificações ``soft`` reproduzem afirmações qualitativas das figuras e só
geram aviso. O relatório é determinístico para uma semente fixa.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional
import logging
import math
import time

import numpy as np

from .eigensystem import analytic_level, numeric_level, spectral_invariants
from .exceptions import DegenerateCoefficients, DegenerateSpectrum
from .logging_config import performance_logger
from .metrology import (
    CLOSED_FORM, qfi, qfi_one_qubit, qfi_pure_oracle, qfi_pure_state, qfi_spectral,
    qfi_two_qubit, reduce,
)
from .models import ModelParams, build_hamiltonian
from .presets import figure_preset
from .validators import LEVELS, PROBES

logger = logging.getLogger(__name__)

HARD = 'hard'
SOFT = 'soft'

MIN_DRAWS = 100
REGIME_DRAWS = 200
THETA_GRID_POINTS = 50

SYMMETRY_TOLERANCE = 1e-9
ORACLE_TOLERANCE = 1e-6
EIGEN_TOLERANCE = 1e-10


def relative_residual(a, b):
    """|a − b| / max(1, |a|, |b|)"""
    return abs(a - b) / max(1.0, abs(a), abs(b))


@dataclass
class CheckResult:
    """Resíduo máximo de uma verificação e quantas amostras a violaram"""
    name: str
    kind: str
    tolerance: float
    description: str = ''
    worst_residual: float = 0.0
    worst_params: Optional[Dict] = None
    samples: int = 0
    skipped: int = 0
    failures: int = 0

    def record(self, residual, params: ModelParams = None):
        self.samples += 1
        if self.samples == 1 or residual > self.worst_residual:
            self.worst_residual = float(residual)
            self.worst_params = params.as_dict() if params is not None else None
        if residual > self.tolerance:
            self.failures += 1

    def skip(self):
        self.skipped += 1

    @property
    def status(self):
        if self.failures == 0:
            return 'pass'
        return 'fail' if self.kind == HARD else 'warn'

    def as_dict(self):
        return {
            'name': self.name,
            'kind': self.kind,
            'status': self.status,
            'description': self.description,
            'tolerance': self.tolerance,
            'worst_residual': self.worst_residual,
            'worst_params': self.worst_params,
            'samples': self.samples,
            'skipped': self.skipped,
            'failures': self.failures,
        }


@dataclass
class VerificationReport:
    seed: int
    draws: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self):
        return not any(check.status == 'fail' for check in self.checks)

    def as_dict(self):
        return {
            'seed': self.seed,
            'draws': self.draws,
            'passed': self.passed,
            'checks': [check.as_dict() for check in self.checks],
        }

    def to_text(self):
        lines = [f'verify seed={self.seed} draws={self.draws}']
        for check in self.checks:
            lines.append(
                f'{check.status.upper():<5} [{check.kind}] {check.name:<36} '
                f'worst={check.worst_residual:.3e} tol={check.tolerance:.1e} '
                f'samples={check.samples} skipped={check.skipped}'
            )
        lines.append('RESULT: ' + ('PASS' if self.passed else 'FAIL'))
        return '\n'.join(lines) + '\n'


def random_params(rng, coupling=5.0, theta_margin=0.1):
    """J, D, B₁, B₂ uniformes em [−coupling, coupling], θ ∈ [margem, π − margem], φ ∈ [0, 2π)"""
    J, D, B1, B2 = rng.uniform(-coupling, coupling, 4)
    theta = rng.uniform(theta_margin, math.pi - theta_margin)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    return ModelParams(J=J, D=D, B1=B1, B2=B2, theta=theta, phi=phi)


def _numeric_family(params, j):
    # autovetor de H(φ) diagonalizado de novo em cada φ: não usa a covariância
    return lambda phi: numeric_level(params.with_changes(phi=phi), j).vector


class VerificationService:
    """
    Executa a bateria de propriedades com ``draws`` sorteios semeados por ``seed``.
    """

    def __init__(self, seed: int = 7, draws: int = 500):
        from django.core.exceptions import ValidationError

        if isinstance(draws, bool) or int(draws) != draws or draws < MIN_DRAWS:
            raise ValidationError(f'draws deve ser inteiro ≥ {MIN_DRAWS} (recebido {draws!r}).')
        self.seed = int(seed)
        self.draws = int(draws)
        children = np.random.SeedSequence(self.seed).spawn(4)
        self._streams = [np.random.default_rng(child) for child in children]

    def verify(self) -> VerificationReport:
        started = time.monotonic()
        report = VerificationReport(seed=self.seed, draws=self.draws)
        samples = self._draw_samples()

        report.checks.extend(self._random_draw_checks(samples))
        report.checks.extend(self._trivial_laws(samples))
        report.checks.extend(self._regime_checks())
        report.checks.append(self._saturation_check())
        report.checks.append(self._near_degeneracy_check())
        report.checks.append(self._one_qubit_level_spread())
        report.checks.extend(self._figure_shape_checks())

        for check in report.checks:
            if check.status != 'pass':
                logger.warning(
                    'Verificação %s: %s (pior resíduo %.3e)', check.name, check.status,
                    check.worst_residual, extra={'action': 'verify', 'seed': self.seed},
                )
        performance_logger.log_verify_time(self.seed, self.draws, time.monotonic() - started)
        return report

    # ------------------------------------------------------------------
    # Sorteios aleatórios
    # ------------------------------------------------------------------

    def _draw_samples(self):
        rng = self._streams[0]
        return [random_params(rng) for _ in range(self.draws)]

    def _random_draw_checks(self, samples):
        eigen = CheckResult('eigensystem_oracle', HARD, EIGEN_TOLERANCE,
                            'analytic vs numeric eigenvalues and eigenvector overlaps')
        two_oracle = CheckResult('two_qubit_closed_form_vs_oracle', HARD, ORACLE_TOLERANCE,
                                 'closed-form two-qubit QFI vs fidelity susceptibility')
        one_oracle = CheckResult('one_qubit_closed_form_vs_spectral', HARD, ORACLE_TOLERANCE,
                                 'closed-form qfiA/qfiB vs spectral QFI of the reduced state')
        variance = CheckResult('two_qubit_closed_form_vs_variance', HARD, SYMMETRY_TOLERANCE,
                               'closed-form two-qubit QFI vs 4 Var(G)')
        exchange = CheckResult('exchange_symmetry_J_D', HARD, SYMMETRY_TOLERANCE,
                               'QFI invariant under J <-> D')
        sign_j = CheckResult('sign_symmetry_J', HARD, SYMMETRY_TOLERANCE,
                             'QFI invariant under J -> -J')
        sign_d = CheckResult('sign_symmetry_D', HARD, SYMMETRY_TOLERANCE,
                             'QFI invariant under D -> -D')
        reflection = CheckResult('field_reflection_symmetry', HARD, SYMMETRY_TOLERANCE,
                                 'QFI invariant under (B1, theta) -> (-B1, pi - theta)')
        monotone = CheckResult('partial_trace_monotonicity', HARD, SYMMETRY_TOLERANCE,
                               'two-qubit QFI >= max(qfiA, qfiB)')
        bound = CheckResult('pure_state_bound', HARD, SYMMETRY_TOLERANCE,
                            'two-qubit QFI <= 4')
        phi_free = CheckResult('azimuth_independence', HARD, SYMMETRY_TOLERANCE,
                               'QFI does not depend on phi')

        for params in samples:
            try:
                self._check_eigensystem(params, eigen)
                self._check_oracles(params, two_oracle, one_oracle, variance)
                values = self._closed_form_values(params)
                self._check_symmetry(params, values, params.with_changes(J=params.D, D=params.J), exchange)
                self._check_symmetry(params, values, params.with_changes(J=-params.J), sign_j)
                self._check_symmetry(params, values, params.with_changes(D=-params.D), sign_d)
                self._check_symmetry(
                    params, values,
                    params.with_changes(B1=-params.B1, theta=math.pi - params.theta), reflection,
                )
                self._check_symmetry(params, values, params.with_changes(phi=params.phi + 0.37), phi_free)
            except DegenerateSpectrum:
                for check in (eigen, two_oracle, one_oracle, variance, exchange, sign_j, sign_d, reflection,
                              phi_free):
                    check.skip()
                continue

            for j in LEVELS:
                two = values.get(('two-qubit', j))
                a, b = values.get(('A', j)), values.get(('B', j))
                if two is None or a is None or b is None:
                    monotone.skip()
                    bound.skip()
                    continue
                monotone.record(max(0.0, max(a, b) - two), params)
                bound.record(max(0.0, two - 4.0), params)

        return [eigen, two_oracle, one_oracle, variance, exchange, sign_j, sign_d, reflection,
                monotone, bound, phi_free]

    def _check_eigensystem(self, params, check):
        invariants = spectral_invariants(params)
        numeric = np.linalg.eigvalsh(build_hamiltonian(params))
        analytic = np.sort(np.array(invariants.xi))
        check.record(float(np.max(np.abs(numeric - analytic))) / params.scale, params)
        for j in LEVELS:
            try:
                level = analytic_level(params, j)
            except DegenerateCoefficients:
                check.skip()
                continue
            overlap = abs(np.vdot(level.vector, numeric_level(params, j).vector))
            check.record(max(0.0, 1.0 - overlap), params)

    def _check_oracles(self, params, two_check, one_check, variance_check):
        for j in LEVELS:
            closed = qfi_two_qubit(params, j)
            if closed.method != CLOSED_FORM:
                two_check.skip()
                one_check.skip()
                variance_check.skip()
                continue
            family = _numeric_family(params, j)
            oracle = qfi_pure_oracle(family, params.phi)
            two_check.record(relative_residual(closed.value, oracle), params)
            exact = qfi_pure_state(analytic_level(params, j).vector)
            variance_check.record(relative_residual(closed.value, exact), params)
            for probe in ('A', 'B'):
                reduced = qfi_one_qubit(params, j, probe)
                spectral = qfi_spectral(lambda phi: reduce(family(phi), probe), params.phi)
                one_check.record(relative_residual(reduced.value, spectral), params)

    def _closed_form_values(self, params):
        values = {}
        for probe in PROBES:
            for j in LEVELS:
                value = qfi(params, j, probe)
                if value.method == CLOSED_FORM:
                    values[(probe, j)] = value.value
        return values

    def _check_symmetry(self, params, values, image, check):
        try:
            image_values = self._closed_form_values(image)
        except DegenerateSpectrum:
            check.skip()
            return
        for key, value in values.items():
            if key not in image_values:
                check.skip()
                continue
            check.record(relative_residual(value, image_values[key]), params)

    # ------------------------------------------------------------------
    # Leis triviais
    # ------------------------------------------------------------------

    def _trivial_laws(self, samples):
        zero_theta = CheckResult('zero_polar_angle_vanishes', HARD, 1e-12,
                                 'theta = 0 gives zero QFI for every probe and level')
        free_two = CheckResult('uncoupled_two_qubit_sin_sq', HARD, 1e-8,
                               'J = D = 0 gives two-qubit QFI = sin^2 theta')
        free_a = CheckResult('uncoupled_qubit_a_vanishes', HARD, 1e-12,
                             'J = D = 0 gives qfiA = 0')

        for params in samples[:20]:
            at_zero = params.with_changes(theta=0.0)
            try:
                for probe in PROBES:
                    for j in LEVELS:
                        zero_theta.record(abs(qfi(at_zero, j, probe).value), at_zero)
            except DegenerateSpectrum:
                zero_theta.skip()

        for theta in np.linspace(0.0, math.pi, THETA_GRID_POINTS):
            params = ModelParams(J=0.0, D=0.0, B1=1.0, B2=2.0, theta=float(theta))
            expected = math.sin(theta) ** 2
            for j in LEVELS:
                free_two.record(abs(qfi(params, j, 'two-qubit').value - expected), params)
                free_a.record(abs(qfi(params, j, 'A').value), params)

        return [zero_theta, free_two, free_a]

    # ------------------------------------------------------------------
    # Regimes qualitativos dos qubits isolados
    # ------------------------------------------------------------------

    def _regime_draws(self):
        return min(self.draws, REGIME_DRAWS)

    def _regime_checks(self):
        rng = self._streams[1]
        count = self._regime_draws()

        zero_b1 = CheckResult('qubit_a_dominates_at_zero_b1', SOFT, SYMMETRY_TOLERANCE,
                              'B1 = 0 gives qfiA >= qfiB for every level')
        strong_j = CheckResult('qubit_a_dominates_at_large_j', SOFT, SYMMETRY_TOLERANCE,
                               'J = 20 with other scales <= 2 gives qfiA >= qfiB')
        strong_d = CheckResult('qubit_a_dominates_at_large_d', SOFT, SYMMETRY_TOLERANCE,
                               'D = 20 with other scales <= 2 gives qfiA >= qfiB')
        equal_fields_j = CheckResult('equal_fields_zero_j_ordering', SOFT, SYMMETRY_TOLERANCE,
                                     'J = 0, B1 = B2: qfiB >= qfiA for j in {1,2}, reverse for {3,4}')
        equal_fields_d = CheckResult('equal_fields_zero_d_ordering', SOFT, SYMMETRY_TOLERANCE,
                                     'D = 0, B1 = B2: qfiB >= qfiA for j in {1,2}, reverse for {3,4}')

        for _ in range(count):
            params = random_params(rng)
            self._record_a_over_b(params.with_changes(B1=0.0), zero_b1, LEVELS)

            small = random_params(rng, coupling=2.0)
            self._record_a_over_b(small.with_changes(J=20.0), strong_j, LEVELS)
            self._record_a_over_b(small.with_changes(D=20.0), strong_d, LEVELS)

            equal = params.with_changes(B2=params.B1)
            self._record_a_over_b(equal.with_changes(J=0.0), equal_fields_j, (3, 4))
            self._record_b_over_a(equal.with_changes(J=0.0), equal_fields_j, (1, 2))
            self._record_a_over_b(equal.with_changes(D=0.0), equal_fields_d, (3, 4))
            self._record_b_over_a(equal.with_changes(D=0.0), equal_fields_d, (1, 2))

        return [zero_b1, strong_j, strong_d, equal_fields_j, equal_fields_d]

    def _record_a_over_b(self, params, check, levels):
        self._record_order(params, check, levels, 'A', 'B')

    def _record_b_over_a(self, params, check, levels):
        self._record_order(params, check, levels, 'B', 'A')

    def _record_order(self, params, check, levels, larger, smaller):
        for j in levels:
            try:
                big = qfi(params, j, larger).value
                small = qfi(params, j, smaller).value
            except DegenerateSpectrum:
                check.skip()
                continue
            check.record(max(0.0, small - big), params)

    # ------------------------------------------------------------------
    # Afirmações das figuras
    # ------------------------------------------------------------------

    def _saturation_check(self):
        check = CheckResult('two_qubit_saturation_at_right_angle', SOFT, 0.01,
                            'theta = pi/2: QFI_1 changes by <= 1% between B2 = 40 and B2 = 80')
        base = ModelParams(J=1.3, D=0.0, B1=1.0, B2=40.0, theta=math.pi / 2)
        near = qfi(base, 1, 'two-qubit').value
        far_params = base.with_changes(B2=80.0)
        far = qfi(far_params, 1, 'two-qubit').value
        check.record(abs(near - far) / far if far > 0.0 else math.inf, far_params)
        return check

    def _preset_points(self, names):
        for name in names:
            spec = figure_preset(name)
            for series_value in spec.series_values():
                for value in spec.grid():
                    changes = {spec.sweep_param: float(value)}
                    if series_value is not None:
                        changes[spec.series_param] = series_value
                    yield spec.base.with_changes(**changes)

    def _near_degeneracy_check(self):
        check = CheckResult('two_qubit_level_pairs_close', SOFT, 0.1,
                            '|QFI_1 - QFI_2| and |QFI_3 - QFI_4| on the two-qubit figure grids')
        for params in self._preset_points(('fig1', 'fig2a', 'fig2b', 'fig3')):
            try:
                values = [qfi(params, j, 'two-qubit').value for j in LEVELS]
            except DegenerateSpectrum:
                check.skip()
                continue
            check.record(max(abs(values[0] - values[1]), abs(values[2] - values[3])), params)
        return check

    def _one_qubit_level_spread(self):
        check = CheckResult('qubit_a_levels_close', SOFT, 0.1,
                            'max spread of qfiA_1..qfiA_4 on the one-qubit figure grids')
        for params in self._preset_points(('fig4', 'fig5', 'fig6a', 'fig6b', 'fig7')):
            try:
                values = [qfi(params, j, 'A').value for j in LEVELS]
            except DegenerateSpectrum:
                check.skip()
                continue
            check.record(max(values) - min(values), params)
        return check

    def _argmax(self, params, sweep_param, grid, j, probe):
        values = []
        for value in grid:
            try:
                values.append(qfi(params.with_changes(**{sweep_param: float(value)}), j, probe).value)
            except DegenerateSpectrum:
                values.append(-math.inf)
        index = int(np.argmax(values))
        return float(grid[index]), values

    def _figure_shape_checks(self):
        grid = np.linspace(-2.0, 2.0, 81)
        step = float(grid[1] - grid[0])
        large_j = CheckResult('large_j_optimum_at_zero_d', SOFT, step / 2.0,
                              'J = 20: the optimum of qfiA_1 over D sits at D = 0')
        base = ModelParams(J=20.0, D=0.0, B1=1.0, B2=1.5, theta=math.pi / 4)
        optimum, _ = self._argmax(base, 'D', grid, 1, 'A')
        large_j.record(abs(optimum), base)

        b1_grid = np.linspace(-5.0, 5.0, 201)
        b1_step = float(b1_grid[1] - b1_grid[0])
        weak = CheckResult('weak_field_optimum_off_zero_b1', SOFT, 0.0,
                           'B2 = 1: the optimum of qfiA_1 over B1 is away from B1 = 0')
        strong = CheckResult('strong_field_optimum_at_zero_b1', SOFT, b1_step / 2.0,
                             'B2 = 5: the optimum of qfiA_1 over B1 sits at B1 = 0')
        fig7 = figure_preset('fig7').base
        optimum, _ = self._argmax(fig7, 'B1', b1_grid, 1, 'A')
        weak.record(max(0.0, b1_step - abs(optimum)), fig7)
        strong_base = fig7.with_changes(B2=5.0)
        optimum, _ = self._argmax(strong_base, 'B1', b1_grid, 1, 'A')
        strong.record(abs(optimum), strong_base)

        rise_fall = CheckResult('level_three_rises_then_falls_with_b2', SOFT, 0.0,
                                'D = 0, theta = pi/4: QFI_3 has an interior maximum over B2')
        fig3 = figure_preset('fig3')
        _, values = self._argmax(fig3.base, 'B2', fig3.grid(), 3, 'two-qubit')
        peak = max(values)
        finite = [v for v in values if v != -math.inf]
        margin = min(peak - finite[0], peak - finite[-1]) if finite else 0.0
        rise_fall.record(max(0.0, 1e-3 - margin), fig3.base)

        return [large_j, weak, strong, rise_fall]
