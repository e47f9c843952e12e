from django.core.exceptions import ValidationError
import math

LEVELS = (1, 2, 3, 4)
PROBES = ('two-qubit', 'A', 'B')
SWEEP_PARAMS = ('J', 'D', 'B1', 'B2', 'theta')


def validate_finite(value, name='valor'):
    """
    Valida se o valor é um número real finito
    """
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f'{name} deve ser numérico.')
    if not math.isfinite(number):
        raise ValidationError(f'{name} deve ser finito (recebido {value!r}).')
    return number


def validate_polar_angle(value):
    """
    Valida θ ∈ [0, π]
    """
    theta = validate_finite(value, 'theta')
    if theta < 0.0 or theta > math.pi:
        raise ValidationError(f'theta deve estar em [0, π] (recebido {theta}).')
    return theta


def wrap_azimuth(value):
    """
    Valida φ e devolve o representante canônico em [0, 2π)
    """
    phi = validate_finite(value, 'phi')
    wrapped = math.fmod(phi, 2.0 * math.pi)
    if wrapped < 0.0:
        wrapped += 2.0 * math.pi
    # fmod de valores logo abaixo de 0 pode arredondar para 2π
    if wrapped >= 2.0 * math.pi:
        wrapped = 0.0
    return wrapped


def validate_level(value):
    """
    Valida índice de nível adiabático j ∈ {1, 2, 3, 4}
    """
    try:
        level = int(value)
    except (TypeError, ValueError):
        raise ValidationError(f'Nível inválido: {value!r}.')
    if isinstance(value, float) and value != level:
        raise ValidationError(f'Nível deve ser inteiro (recebido {value!r}).')
    if level not in LEVELS:
        raise ValidationError(f'Nível deve ser 1, 2, 3 ou 4 (recebido {value!r}).')
    return level


def validate_probe(value):
    """
    Valida o nome da sonda: two-qubit, A ou B
    """
    if value not in PROBES:
        raise ValidationError(f'Sonda desconhecida: {value!r}. Use two-qubit, A ou B.')
    return value


def validate_keep(value):
    """
    Valida o qubit mantido no traço parcial
    """
    if value not in ('A', 'B'):
        raise ValidationError(f'Qubit mantido deve ser A ou B (recebido {value!r}).')
    return value


def validate_sweep_param(value):
    """
    Valida o parâmetro varrido
    """
    if value not in SWEEP_PARAMS:
        raise ValidationError(
            f'Parâmetro de varredura inválido: {value!r}. Use um de {", ".join(SWEEP_PARAMS)}.'
        )
    return value


def validate_positive_value(value, name='valor'):
    """
    Valida se o valor é positivo
    """
    number = validate_finite(value, name)
    if number <= 0:
        raise ValidationError(f'{name} deve ser maior que zero.')
    return number


def validate_non_negative(value, name='valor'):
    """
    Valida se o valor é não negativo
    """
    number = validate_finite(value, name)
    if number < 0:
        raise ValidationError(f'{name} não pode ser negativo.')
    return number
