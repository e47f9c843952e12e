"""
Django settings for adiabatic_qfi project.

O projeto nao serve paginas: o Django hospeda os comandos de gerenciamento
(``manage.py point|sweep|adiabatic|evolve|verify``), o logging estruturado e
o executor de testes.
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='adiabatic-qfi-local-only-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'rest_framework',
    'core',
]

# Nenhuma persistencia: o banco existe apenas para o executor de testes
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Limiares numericos (relativos a potencias de scale = max(|J|,|D|,|B1|,|B2|,1))
QFI_EPS_P = config('QFI_EPS_P', default=1e-8, cast=float)
QFI_EPS_C = config('QFI_EPS_C', default=1e-10, cast=float)
QFI_EPS_GAP = config('QFI_EPS_GAP', default=1e-9, cast=float)
QFI_EPS_SLD = config('QFI_EPS_SLD', default=1e-12, cast=float)

# Passo das diferencas finitas dos oraculos (com um passo de Richardson)
QFI_FD_DELTA = config('QFI_FD_DELTA', default=1e-4, cast=float)

# Condicao adiabatica: "<<" lido como duas ordens de grandeza
QFI_MARGIN_TARGET = config('QFI_MARGIN_TARGET', default=100.0, cast=float)

# Varreduras
QFI_SWEEP_POINTS = config('QFI_SWEEP_POINTS', default=201, cast=int)
QFI_SWEEP_WORKERS = config('QFI_SWEEP_WORKERS', default=4, cast=int)

# Integrador RK4
QFI_STEPS_PER_REVOLUTION = config('QFI_STEPS_PER_REVOLUTION', default=10000, cast=int)


# Configuração de Logging Estruturado
QFI_LOG_LEVEL = config('QFI_LOG_LEVEL', default='INFO')
QFI_LOG_DIR = config('QFI_LOG_DIR', default='')

from core.logging_config import setup_logging
LOGGING = setup_logging(base_dir=str(BASE_DIR), log_dir=QFI_LOG_DIR or None, level=QFI_LOG_LEVEL)
