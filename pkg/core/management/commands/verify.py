from django.core.management.base import BaseCommand, CommandError

from core.management.arguments import (
    HARD_FAILURE, INPUT_ERRORS, add_output_arguments, emit, invalid_input,
)
from core.serializers import to_json
from core.verification import VerificationService


class Command(BaseCommand):
    help = 'Executa a bateria de propriedades (simetrias, oráculos, regimes das figuras)'

    def add_arguments(self, parser):
        parser.add_argument(
            '--seed',
            type=int,
            default=7,
            help='Semente do gerador (padrão: 7)'
        )
        parser.add_argument(
            '--draws',
            type=int,
            default=500,
            help='Sorteios aleatórios, mínimo 100 (padrão: 500)'
        )
        add_output_arguments(parser, formats=('text', 'json'), default='text')

    def handle(self, *args, **options):
        try:
            report = VerificationService(seed=options['seed'], draws=options['draws']).verify()
        except INPUT_ERRORS as exc:
            raise invalid_input(exc)

        if options['format'] == 'json':
            emit(self, to_json(report.as_dict()), options['out'])
        else:
            emit(self, report.to_text(), options['out'])

        if not report.passed:
            failed = [check.name for check in report.checks if check.status == 'fail']
            raise CommandError(
                f'Verificações obrigatórias falharam: {", ".join(failed)}',
                returncode=HARD_FAILURE,
            )
