from tomography.management.base import GeotomCommand, load_body
from tomography.radon import volume_report


class Command(GeotomCommand):
    help = 'Volume λ_n(K) por quadratura esférica (Monte Carlo para n > 3).'

    def handle(self, *args, **options):
        body = load_body(options['body'])
        report = volume_report(body, resolution=options['resolution'], seed=options['seed'])
        report['body'] = body.to_dict()
        closed = '' if report['closed_form'] is None else repr(report['closed_form'])
        self.emit(report, options, f"volume,closed_form\n{report['volume']!r},{closed}\n")
