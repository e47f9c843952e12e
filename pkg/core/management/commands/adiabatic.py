from django.core.management.base import BaseCommand

from core.adiabatic import adiabatic_margin
from core.management.arguments import (
    INPUT_ERRORS, add_model_arguments, add_output_arguments, emit, invalid_input,
    params_from_options,
)
from core.serializers import to_json


class Command(BaseCommand):
    help = 'Verifica a condição adiabática para uma taxa de rotação do campo'

    def add_arguments(self, parser):
        add_model_arguments(parser)
        parser.add_argument(
            '--phi-dot',
            type=float,
            required=True,
            help='Taxa de rotação do azimute'
        )
        parser.add_argument(
            '--margin-target',
            type=float,
            help='Margem exigida (padrão: QFI_MARGIN_TARGET)'
        )
        add_output_arguments(parser, formats=('text', 'json'), default='text')

    def handle(self, *args, **options):
        params = params_from_options(options)
        try:
            report = adiabatic_margin(params, options['phi_dot'], options['margin_target'])
        except INPUT_ERRORS as exc:
            raise invalid_input(exc)

        if options['format'] == 'json':
            payload = report.as_dict()
            payload['is_adiabatic'] = report.is_adiabatic
            emit(self, to_json(payload), options['out'])
            return

        verdict = 'ADIABÁTICO' if report.is_adiabatic else 'NÃO ADIABÁTICO'
        lines = [
            f'phi_dot            {report.phi_dot:.6g}',
            f'min_gap            {report.min_gap:.6g}',
            f'max_coupling_ratio {report.max_coupling_ratio:.6g}',
            f'margin             {report.margin:.6g} (alvo {report.margin_target:.6g})',
            f'max_phi_dot        {report.max_phi_dot:.6g}',
            verdict,
            report.note,
        ]
        emit(self, '\n'.join(lines) + '\n', options['out'])
