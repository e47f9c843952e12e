import math

from django.core.management.base import BaseCommand

from core.adiabatic import adiabatic_margin
from core.dynamics import default_steps, evolve, state_qfis
from core.eigensystem import spectral_invariants
from core.management.arguments import (
    INPUT_ERRORS, add_model_arguments, add_output_arguments, emit, invalid_input,
    params_from_options,
)
from core.metrology import qfi
from core.serializers import to_json
from core.validators import LEVELS, validate_positive_value

DEFAULT_OMEGA_FRACTION = 1e-3


class Command(BaseCommand):
    help = 'Integra a dinâmica com o campo girando e compara com o autoestado instantâneo'

    def add_arguments(self, parser):
        add_model_arguments(parser)
        parser.add_argument(
            '--omega',
            type=float,
            help='Velocidade angular do campo (padrão: 1e-3 · min_gap)'
        )
        parser.add_argument(
            '--revolutions',
            type=float,
            default=1.0,
            help='Número de voltas do campo (padrão: 1)'
        )
        parser.add_argument(
            '--level',
            type=int,
            choices=LEVELS,
            default=1,
            help='Nível adiabático inicial (padrão: 1)'
        )
        parser.add_argument(
            '--steps',
            type=int,
            help='Passos RK4 (padrão: |dt|·ξ₁ ≤ 0.05 e QFI_STEPS_PER_REVOLUTION por volta)'
        )
        add_output_arguments(parser, formats=('text', 'json'), default='text')

    def handle(self, *args, **options):
        params = params_from_options(options)
        try:
            result = self.run(params, options)
        except INPUT_ERRORS as exc:
            raise invalid_input(exc)

        if options['format'] == 'json':
            emit(self, to_json(result), options['out'])
        else:
            emit(self, self.as_text(result), options['out'])

    def run(self, params, options):
        omega = options['omega']
        omega_source = 'argument'
        if omega is None:
            omega = DEFAULT_OMEGA_FRACTION * spectral_invariants(params).min_gap
            omega_source = 'default: 1e-3 * min_gap'
        if omega == 0.0:
            raise invalid_input('omega deve ser diferente de zero para completar voltas.')
        revolutions = validate_positive_value(options['revolutions'], 'revolutions')

        t_final = revolutions * 2.0 * math.pi / abs(omega)
        steps = options['steps'] or default_steps(params, omega, t_final)
        level = options['level']

        margin = adiabatic_margin(params, abs(omega))
        trajectory = evolve(params, omega, t_final, steps, level)
        phi_final = params.phi + omega * t_final
        two_qubit, qubit_a, qubit_b = state_qfis(trajectory.final_state, phi_final)

        return {
            'params': params.as_dict(),
            'level': level,
            'omega': omega,
            'omega_source': omega_source,
            't_final': t_final,
            'steps': steps,
            'min_fidelity': trajectory.min_fidelity,
            'final_fidelity': float(trajectory.fidelities[-1]),
            'max_renormalization': trajectory.max_renormalization,
            'adiabatic': dict(margin.as_dict(), is_adiabatic=margin.is_adiabatic),
            'trajectory_qfi': {'two-qubit': two_qubit, 'A': qubit_a, 'B': qubit_b},
            'closed_form_qfi': {
                probe: qfi(params, level, probe).value for probe in ('two-qubit', 'A', 'B')
            },
        }

    def as_text(self, result):
        lines = [
            f"level              {result['level']}",
            f"omega              {result['omega']:.6g} ({result['omega_source']})",
            f"t_final            {result['t_final']:.6g}",
            f"steps              {result['steps']}",
            f"min_fidelity       {result['min_fidelity']:.12f}",
            f"final_fidelity     {result['final_fidelity']:.12f}",
            f"max_renormalization {result['max_renormalization']:.3e}",
            f"adiabatic_margin   {result['adiabatic']['margin']:.6g}",
        ]
        for probe, value in result['trajectory_qfi'].items():
            closed = result['closed_form_qfi'][probe]
            lines.append(f'qfi[{probe}]  trajectory={value:.10g}  closed_form={closed:.10g}')
        return '\n'.join(lines) + '\n'
