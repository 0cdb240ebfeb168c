from tomography.bp_lab import COUNTEREXAMPLE, ball_counterexample
from tomography.management.base import GeotomCommand


class Command(GeotomCommand):
    help = 'Par cubo × bola em dimensão --n >= 10.'
    body_required = False

    def add_command_arguments(self, parser):
        parser.add_argument('--n', type=int, default=10, help='Dimensão (>= 10).')
        parser.add_argument('--directions', type=int, help='Número de direções sorteadas.')
        parser.add_argument('--samples', type=int, help='Amostras Monte Carlo por seção.')

    def handle(self, *args, **options):
        report = ball_counterexample(options['n'], seed=options['seed'], directions=options['directions'],
                                     samples=options['samples'], tol=options['tol'])
        if report['verdict'] != COUNTEREXAMPLE:
            self.negative(report, options, f"Veredito {report['verdict']}.", report['verdict'])
        self.emit(report, options)
