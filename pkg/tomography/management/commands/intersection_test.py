from tomography.management.base import GeotomCommand, load_body
from tomography.radon import is_intersection_body


class Command(GeotomCommand):
    help = 'Decide se K é corpo de interseção (min g >= −tol); código 4 quando não é.'

    def handle(self, *args, **options):
        body = load_body(options['body'])
        verdict = is_intersection_body(body, tol=options['tol'], resolution=options['resolution'],
                                       seed=options['seed'])
        report = verdict.as_dict()
        report['body'] = body.to_dict()
        if not verdict.is_intersection_body:
            self.negative(report, options, f'min g = {verdict.margin:.6g} < −tol.', verdict.verdict)
        self.emit(report, options)
