"""Erros do toolkit.

Cada erro carrega o código de saída usado pela linha de comando e sabe se
descrever como uma linha de JSON (diagnóstico no stderr).
"""
import json


class GeotomError(Exception):
    kind = 'error'
    exit_code = 2

    def __init__(self, message, **extra):
        super().__init__(message)
        self.message = message
        self.extra = extra

    def as_dict(self):
        payload = {'error': self.kind, 'message': self.message}
        payload.update(self.extra)
        return payload

    def as_json(self):
        # default=float cobre escalares do numpy
        return json.dumps(self.as_dict(), default=float)


class InvalidParameter(GeotomError, ValueError):
    kind = 'invalid-parameter'


class DescriptorParseError(InvalidParameter):
    """Descritor de corpo fora do esquema; `path` aponta o campo culpado."""
    kind = 'parse-error'

    def __init__(self, message, path=''):
        super().__init__(message, path=path)
        self.path = path

    def __str__(self):
        return f'{self.path}: {self.message}' if self.path else self.message


class UnsupportedBody(GeotomError):
    kind = 'unsupported-body'


class NotEvenError(GeotomError):
    kind = 'not-even'


class NoConvergence(GeotomError):
    kind = 'no-convergence'
    exit_code = 3


class NotAnIntersectionBody(GeotomError):
    kind = 'not-an-intersection-body'
    exit_code = 4

    def __init__(self, message, margin, witness):
        super().__init__(message, margin=float(margin), witness=[float(c) for c in witness])
        self.margin = float(margin)
        self.witness = tuple(float(c) for c in witness)


class NegativeVerdict(GeotomError):
    """Resultado com veredito negativo; o relatório já foi emitido."""
    kind = 'negative-verdict'
    exit_code = 4

    def __init__(self, message, verdict):
        super().__init__(message, verdict=verdict)
        self.verdict = verdict
