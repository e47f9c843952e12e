import json

from django.core.management.base import BaseCommand

from core.management.arguments import INPUT_ERRORS, add_output_arguments, emit, invalid_input
from core.presets import FIGURE_PRESETS, figure_preset
from core.serializers import load_sweep_spec, records_to_csv, records_to_json
from core.services import SweepService


class Command(BaseCommand):
    help = 'Varre a QFI sobre um preset de figura ou um arquivo de especificação JSON'

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument(
            '--preset',
            help=f'Preset de figura ({", ".join(FIGURE_PRESETS)})'
        )
        source.add_argument(
            '--spec',
            help='Arquivo JSON com a especificação (docs/sweep_spec.schema.json)'
        )
        parser.add_argument(
            '--points',
            type=int,
            help='Sobrescreve o número de pontos da grade'
        )
        parser.add_argument(
            '--workers',
            type=int,
            help='Threads do pool (padrão: QFI_SWEEP_WORKERS)'
        )
        add_output_arguments(parser)

    def handle(self, *args, **options):
        try:
            spec = self.load_spec(options)
            if options['points'] is not None:
                spec = spec.with_points(options['points'])
            records = SweepService(workers=options['workers']).run_sweep(spec)
        except INPUT_ERRORS as exc:
            raise invalid_input(exc)

        if options['format'] == 'json':
            text = records_to_json(spec, records)
        else:
            text = records_to_csv(spec, records)
        emit(self, text, options['out'])

    def load_spec(self, options):
        """SweepSpec a partir do preset ou do arquivo JSON"""
        if options['preset']:
            return figure_preset(options['preset'])
        try:
            with open(options['spec'], encoding='utf-8') as handle:
                payload = json.load(handle)
        except (OSError, ValueError) as exc:
            raise invalid_input(f'Não foi possível ler {options["spec"]}: {exc}')
        return load_sweep_spec(payload)
