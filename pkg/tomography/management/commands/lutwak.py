from tomography.bp_lab import lutwak_check
from tomography.management.base import GeotomCommand, load_body


class Command(GeotomCommand):
    help = 'Teorema de Lutwak com L₁ = I(--body) e L₂ = --body2.'
    second_body = True

    def add_command_arguments(self, parser):
        parser.add_argument('--n', type=int, default=512, help='Número de direções sorteadas.')

    def handle(self, *args, **options):
        body, reference = load_body(options['body']), load_body(options['body2'])
        tol = 1e-6 if options['tol'] is None else options['tol']
        report = lutwak_check(body, reference, directions=options['n'], seed=options['seed'], tol=tol,
                              resolution=options['resolution'])
        if not report['passed']:
            self.negative(report, options, f"Margem {report['margin']:.6g} < −tol.", 'no')
        self.emit(report, options)
