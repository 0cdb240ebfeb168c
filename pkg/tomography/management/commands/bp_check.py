from tomography.bp_lab import CONSISTENT, bp_compare
from tomography.management.base import GeotomCommand, load_body


class Command(GeotomCommand):
    help = 'Compara seções e volumes de K₁ (--body) e K₂ (--body2); código 4 se o veredito não é consistent.'
    second_body = True

    def add_command_arguments(self, parser):
        parser.add_argument('--n', type=int, help='Número de direções sorteadas.')
        parser.add_argument('--samples', type=int, help='Amostras Monte Carlo por seção (n > 3).')

    def handle(self, *args, **options):
        first, second = load_body(options['body']), load_body(options['body2'])
        report = bp_compare(first, second, directions=options['n'], seed=options['seed'], tol=options['tol'],
                            samples=options['samples'])
        if report.verdict != CONSISTENT:
            self.negative(report.as_dict(), options, f'Veredito {report.verdict}.', report.verdict)
        self.emit(report.as_dict(), options)
