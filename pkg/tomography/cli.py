"""
Ponto de entrada `geotom`.

Os subcomandos com hífen (intersection-test, bp-check, positivity-suite) são
os management commands com sublinhado; o resto da linha segue para o Django.
"""
import os

from django.core.management import execute_from_command_line

SUBCOMMANDS = (
    'volume', 'sections', 'radon', 'invert', 'intersection-test', 'symmetral', 'bp-check', 'counterexample',
    'positivity-suite', 'lutwak',
)


def command_name(subcommand):
    return subcommand.replace('-', '_')


def run(argv):
    """
    Executa `geotom <subcomando> ...` e devolve o código de saída.

    0 sucesso; 2 erro de parâmetro ou descritor; 3 não convergência;
    4 veredito negativo.
    """
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'setup.settings')

    argv = list(argv)
    if len(argv) > 1 and argv[1] in SUBCOMMANDS:
        argv[1] = command_name(argv[1])
    try:
        execute_from_command_line(argv)
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 1
    return 0
