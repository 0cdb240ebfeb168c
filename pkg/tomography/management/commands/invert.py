from tomography.management.base import GeotomCommand, load_body
from tomography.radon import invert


class Command(GeotomCommand):
    help = 'Inverte a transformada de Radon: g = R⁻¹ρ_K por abel, eq1 ou harmonic.'

    def add_command_arguments(self, parser):
        parser.add_argument('--method', choices=['abel', 'eq1', 'harmonic'], default='eq1')

    def handle(self, *args, **options):
        body = load_body(options['body'])
        result = invert(body, options['method'], pole=options['pole'], resolution=options['resolution'])
        report = result.as_dict()
        report['body'] = body.to_dict()
        if result.g_values.size == 1:
            report['g'] = result.value
        elif 'g_pole' in result.diagnostics:
            report['g'] = result.diagnostics['g_pole']
        self.emit(report, options)
