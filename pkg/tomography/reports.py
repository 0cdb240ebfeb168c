"""Serialização dos relatórios da linha de comando."""
import json

import numpy as np
from django.core.serializers.json import DjangoJSONEncoder

from .conf import all_settings


class ReportEncoder(DjangoJSONEncoder):
    """DjangoJSONEncoder que também entende escalares e vetores do numpy."""

    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, tuple):
            return list(o)
        return super().default(o)


def with_parameters(report, **arguments):
    """
    Anexa ao relatório o bloco "parameters": todos os parâmetros efetivos de
    settings.GEOTOM mais os argumentos da chamada.
    """
    payload = dict(report)
    payload['parameters'] = {'settings': all_settings(), 'arguments': arguments}
    return payload


def to_json(report):
    # sort_keys: mesmos argumentos, mesmos bytes
    return json.dumps(report, cls=ReportEncoder, sort_keys=True)
