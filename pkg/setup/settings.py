"""
Django settings for the geotom project.

O projeto não tem banco de dados nem camada web: o Django é usado para
configuração, linha de comando (management commands), validação de
descritores (forms) e execução dos testes.

Os parâmetros numéricos ficam no dicionário GEOTOM, lido através de
tomography.conf.geotom_setting().
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'geotom-local-only')

DEBUG = False

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    'tomography',
]

# Sem banco: os testes usam SimpleTestCase
DATABASES = {}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'pt-br'

TIME_ZONE = 'America/Sao_Paulo'

USE_I18N = True

USE_TZ = True


# Logging: um único handler no stderr; stdout fica reservado aos relatórios
GEOTOM_LOG_LEVEL = os.environ.get('GEOTOM_LOG_LEVEL', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'stderr': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'tomography': {
            'handlers': ['stderr'],
            'level': GEOTOM_LOG_LEVEL,
            'propagate': False,
        },
    },
}


# Parâmetros numéricos (resoluções, tolerâncias, paralelismo)
GEOTOM = {
    'SPHERE_RESOLUTION': 64,
    'GREAT_CIRCLE_NODES': 256,
    'MC_SAMPLES': 200_000,
    'INVERSION_RESOLUTION': 96,
    'EQ1_THETA_NODES': 128,
    'EQ1_PHI_NODES': 64,
    'ABEL_LEVELS': 5,
    'ABEL_FIRST_LEVEL': 4,
    'ABEL_STEP': 1e-5,
    'ABEL_NODES': 96,
    'ABEL_TOL': 1e-4,
    'FD_STEP': 1e-5,
    'SLICE_RAYS': 256,
    'SYMMETRAL_GRID': 65,
    'THREADS': int(os.environ.get('GEOTOM_THREADS', os.cpu_count() or 1)),
}
