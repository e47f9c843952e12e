from django.core.management.base import BaseCommand

from core.management.arguments import (
    INPUT_ERRORS, add_model_arguments, add_output_arguments, emit, invalid_input,
    params_from_options,
)
from core.serializers import point_to_csv, to_json
from core.services import PointService
from core.validators import LEVELS, PROBES


class Command(BaseCommand):
    help = 'Calcula todas as QFIs pedidas em um ponto do espaço de parâmetros'

    def add_arguments(self, parser):
        add_model_arguments(parser)
        parser.add_argument(
            '--levels',
            type=int,
            nargs='+',
            choices=LEVELS,
            default=list(LEVELS),
            help='Níveis adiabáticos (padrão: 1 2 3 4)'
        )
        parser.add_argument(
            '--probes',
            nargs='+',
            choices=PROBES,
            default=list(PROBES),
            help='Sondas: two-qubit, A, B (padrão: todas)'
        )
        parser.add_argument(
            '--shots',
            type=int,
            default=1,
            help='Repetições N no limite de Cramér-Rao (padrão: 1)'
        )
        parser.add_argument(
            '--phi-dot',
            type=float,
            help='Inclui o relatório adiabático para esta taxa de rotação'
        )
        parser.add_argument(
            '--margin-target',
            type=float,
            help='Margem adiabática exigida (padrão: QFI_MARGIN_TARGET)'
        )
        add_output_arguments(parser)

    def handle(self, *args, **options):
        params = params_from_options(options)
        try:
            result = PointService().evaluate(
                params,
                levels=options['levels'],
                probes=options['probes'],
                shots=options['shots'],
                phi_dot=options['phi_dot'],
                margin_target=options['margin_target'],
            )
        except INPUT_ERRORS as exc:
            raise invalid_input(exc)

        if options['format'] == 'json':
            text = to_json(result)
        else:
            text = point_to_csv(result)
        emit(self, text, options['out'])
