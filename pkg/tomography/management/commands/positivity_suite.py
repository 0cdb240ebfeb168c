from tomography.bp_lab import e3_positivity_suite
from tomography.management.base import GeotomCommand


class Command(GeotomCommand):
    help = 'Roda is_intersection_body em --n corpos convexos aleatórios de R³.'
    body_required = False

    def add_command_arguments(self, parser):
        parser.add_argument('--n', type=int, default=100, help='Número de corpos.')

    def handle(self, *args, **options):
        tol = 1e-6 if options['tol'] is None else options['tol']
        suite = e3_positivity_suite(options['n'], seed=options['seed'], tol=tol, resolution=options['resolution'])
        if not suite.passed:
            self.negative(suite.as_dict(), options, f'Margem mínima {suite.min_margin:.6g} < −tol.', 'no',
                          suite.to_csv())
        self.emit(suite.as_dict(), options, suite.to_csv())
