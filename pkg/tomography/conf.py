"""Leitura dos parâmetros numéricos do projeto.

Os valores vêm de settings.GEOTOM quando o Django está configurado
(manage.py, testes); fora dele valem os padrões abaixo, o que permite
usar os módulos numéricos como biblioteca.
"""
import os

from django.conf import settings


DEFAULTS = {
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


def geotom_setting(name):
    """Retorna o parâmetro `name` de settings.GEOTOM ou o padrão do módulo."""
    if name not in DEFAULTS:
        raise KeyError(f'Parâmetro desconhecido: {name}')
    if settings.configured:
        return getattr(settings, 'GEOTOM', {}).get(name, DEFAULTS[name])
    return DEFAULTS[name]


def all_settings():
    """Dicionário completo dos parâmetros efetivos (vai para os relatórios)."""
    return {name: geotom_setting(name) for name in DEFAULTS}
