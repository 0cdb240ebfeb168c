import csv
import io

from tomography.bp_lab import sample_directions
from tomography.exceptions import InvalidParameter
from tomography.management.base import GeotomCommand, load_body
from tomography.radon import radon_transform


class Command(GeotomCommand):
    help = 'Transformada de Radon esférica Rρ_K(u) da função radial de um corpo de R³.'

    def add_command_arguments(self, parser):
        parser.add_argument('--n', type=int, default=64, help='Número de direções sorteadas (sem --pole).')

    def handle(self, *args, **options):
        body = load_body(options['body'])
        if body.dim != 3:
            raise InvalidParameter('A transformada de Radon esférica é definida em S².')
        if options['pole'] is not None:
            directions = [options['pole']]
        else:
            directions = sample_directions(3, options['n'], options['seed'])
        values = radon_transform(body.radial, directions)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(['u_1', 'u_2', 'u_3', 'radon'])
        for u, value in zip(directions, values):
            writer.writerow([repr(float(c)) for c in u] + [repr(float(value))])
        report = {'body': body.to_dict(), 'directions': [list(map(float, u)) for u in directions],
                  'values': values.tolist()}
        self.emit(report, options, buffer.getvalue())
