from tomography.bp_lab import sample_directions
from tomography.management.base import GeotomCommand, load_body
from tomography.radon import section_table


class Command(GeotomCommand):
    help = 'Volumes das seções centrais K ∩ u⊥ no polo dado ou em --n direções sorteadas.'

    def add_command_arguments(self, parser):
        parser.add_argument('--n', type=int, default=64, help='Número de direções sorteadas (sem --pole).')

    def handle(self, *args, **options):
        body = load_body(options['body'])
        if options['pole'] is not None:
            directions = [options['pole']]
        else:
            directions = sample_directions(body.dim, options['n'], options['seed'])
        table = section_table(body, directions, seed=options['seed'])
        report = table.as_dict()
        report['body'] = body.to_dict()
        self.emit(report, options, table.to_csv())
