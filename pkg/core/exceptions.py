"""
Erros de domínio das rotinas numéricas.

Entradas inválidas (parâmetros não finitos, θ fora de [0, π], nível ou sonda
desconhecidos) usam ``django.core.exceptions.ValidationError`` via
``core.validators``; as classes abaixo sinalizam regimes em que uma fórmula
ou um oráculo deixa de valer.
"""


class QFIError(Exception):
    """Base para todos os erros do projeto"""


class RadicandNegative(QFIError):
    """Radicando de |ξ|² ou de ξ₁,₃ abaixo de -1e-12 (indica defeito de implementação)."""


class DegenerateCoefficients(QFIError):
    """Coeficientes analíticos f, m, g mal condicionados; usar o caminho numérico."""


class DegenerateSpectrum(QFIError):
    """Dois níveis com o mesmo autovalor: rotulação adiabática indefinida."""


class NonNormalizedInput(QFIError):
    """Vetor de estado com norma diferente de 1 além da tolerância."""


class ZeroSupportDerivative(QFIError):
    """∂ρ com componente fora do suporte de ρ; QFI formalmente divergente."""


class StepTooCoarse(QFIError):
    """Passo do RK4 grande demais: deriva da norma acima do limite por passo."""


class NotAdiabatic(QFIError):
    """Taxa de rotação viola a margem adiabática pedida."""


class UnknownPreset(QFIError):
    """Nome de figura sem preset correspondente."""
