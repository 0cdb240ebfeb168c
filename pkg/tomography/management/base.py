"""
Base dos comandos do geotom.

Os comandos compartilham a gramática

    geotom <subcomando> --body <arq> [--body2 <arq>] [--pole x,y,z] [--method ...]
        [--n <int>] [--seed <int>] [--resolution <int>] [--tol <float>]
        [--format json|csv] [--out <arq>]

e a política de saída: relatório no stdout (ou em --out), diagnóstico de uma
linha JSON no stderr e código de saída vindo do erro (2, 3 ou 4).
"""
import argparse
import sys
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError, handle_default_options

from tomography.exceptions import GeotomError, InvalidParameter, NegativeVerdict
from tomography.forms import parse_descriptor
from tomography.reports import to_json, with_parameters

# opções que o BaseCommand injeta em todo parser; não entram no relatório
DJANGO_OPTIONS = {'verbosity', 'settings', 'pythonpath', 'traceback', 'no_color', 'force_color', 'skip_checks'}


def pole_argument(text):
    """Converte 'x,y,z' numa tupla de floats (para o argparse)."""
    try:
        coords = tuple(float(c) for c in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError(f'polo inválido: {text!r} (esperado x,y,z)')
    if len(coords) < 2 or not any(coords):
        raise argparse.ArgumentTypeError(f'polo inválido: {text!r}')
    return coords


def load_body(path):
    """Lê e valida o descritor JSON em `path`."""
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as exc:
        raise InvalidParameter(f'Não foi possível ler {path}: {exc.strerror}.', path=str(path)) from exc
    return parse_descriptor(text)


class GeotomCommand(BaseCommand):
    requires_system_checks = []
    # --body obrigatório? --body2 aceito?
    body_required = True
    second_body = False

    def add_arguments(self, parser):
        parser.add_argument('--body', required=self.body_required, help='Descritor JSON do corpo.')
        if self.second_body:
            parser.add_argument('--body2', required=True, help='Descritor JSON do segundo corpo.')
        parser.add_argument('--pole', type=pole_argument, help='Direção x,y,z.')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--resolution', type=int, help='Linhas da grade de S² (ou tamanho da grade do perfil).')
        parser.add_argument('--tol', type=float)
        parser.add_argument('--format', choices=['json', 'csv'], default='json')
        parser.add_argument('--out', help='Arquivo de saída (padrão: stdout).')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def run_from_argv(self, argv):
        # sem _called_from_command_line o parser levanta CommandError em vez de sair
        parser = self.create_parser(argv[0], argv[1])
        try:
            options = parser.parse_args(argv[2:])
            cmd_options = vars(options)
            args = cmd_options.pop('args', ())
            handle_default_options(options)
            self.execute(*args, **cmd_options)
        except CommandError as exc:
            self.fail(InvalidParameter(str(exc)))
        except GeotomError as exc:
            self.fail(exc)

    def fail(self, exc):
        self.stderr.write(exc.as_json(), style_func=lambda text: text)
        sys.exit(exc.exit_code)

    def arguments(self, options):
        return {key: value for key, value in options.items()
                if key not in DJANGO_OPTIONS and key not in ('stdout', 'stderr')}

    def emit(self, report, options, csv_text=None):
        """Escreve o relatório (JSON com bloco de parâmetros, ou CSV) no stdout ou em --out."""
        if options['format'] == 'csv':
            if csv_text is None:
                raise InvalidParameter(f'O subcomando {self.subcommand} não tem saída csv.')
            text, ending = csv_text, ''
        else:
            text, ending = to_json(with_parameters(report, **self.arguments(options))), '\n'
        if options.get('out'):
            target = Path(options['out'])
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text + ending, encoding='utf-8')
        else:
            self.stdout.write(text, ending=ending)

    def negative(self, report, options, message, verdict, csv_text=None):
        """Emite o relatório e sinaliza o veredito negativo (código 4)."""
        self.emit(report, options, csv_text)
        raise NegativeVerdict(message, verdict)

    @property
    def subcommand(self):
        return type(self).__module__.rsplit('.', 1)[-1].replace('_', '-')
