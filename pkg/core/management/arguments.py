"""
Argumentos e saída compartilhados pelos comandos de gerenciamento.
"""
from django.core.exceptions import ValidationError
from django.core.management.base import CommandError
from rest_framework import serializers

from core.exceptions import (
    DegenerateCoefficients, DegenerateSpectrum, NonNormalizedInput, NotAdiabatic, StepTooCoarse,
    UnknownPreset, ZeroSupportDerivative,
)
from core.models import ModelParams

INVALID_INPUT = 2
HARD_FAILURE = 1


def add_model_arguments(parser):
    """Os seis parâmetros do modelo (φ opcional)"""
    group = parser.add_argument_group('parâmetros do modelo')
    group.add_argument('--J', type=float, required=True, help='Acoplamento XX')
    group.add_argument('--D', type=float, required=True, help='Interação DM ao longo de z')
    group.add_argument('--B1', type=float, required=True, help='Campo estático no spin 1')
    group.add_argument('--B2', type=float, required=True, help='Amplitude do campo girante')
    group.add_argument('--theta', type=float, required=True, help='Ângulo polar em [0, π]')
    group.add_argument('--phi', type=float, default=0.0, help='Azimute inicial (padrão: 0)')


def add_output_arguments(parser, formats=('csv', 'json'), default='csv'):
    parser.add_argument(
        '--format',
        choices=formats,
        default=default,
        help=f'Formato da saída (padrão: {default})'
    )
    parser.add_argument(
        '--out',
        help='Arquivo de saída (padrão: stdout)'
    )


def params_from_options(options) -> ModelParams:
    try:
        return ModelParams(
            J=options['J'], D=options['D'], B1=options['B1'], B2=options['B2'],
            theta=options['theta'], phi=options['phi'],
        )
    except ValidationError as exc:
        raise invalid_input(exc)


def invalid_input(exc) -> CommandError:
    """CommandError com código de saída 2"""
    if isinstance(exc, ValidationError):
        message = '; '.join(exc.messages)
    elif isinstance(exc, serializers.ValidationError):
        message = str(exc.detail)
    else:
        message = str(exc)
    return CommandError(message, returncode=INVALID_INPUT)


# RadicandNegative fica de fora: é defeito de implementação, não entrada inválida
INPUT_ERRORS = (
    ValidationError, serializers.ValidationError, DegenerateCoefficients, DegenerateSpectrum,
    NonNormalizedInput, ZeroSupportDerivative, StepTooCoarse, NotAdiabatic, UnknownPreset,
)


def emit(command, text, path=None):
    """Escreve em ``path`` ou no stdout do comando"""
    if path:
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
        command.stderr.write(f'Saída gravada em {path}')
    else:
        command.stdout.write(text, ending='')
