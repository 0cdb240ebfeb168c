from tomography.management.base import GeotomCommand, load_body
from tomography.symmetral import profile_volume, schwarz_symmetral, symmetral_invariance_gap, volume_gap


class Command(GeotomCommand):
    help = 'Simetral de Schwarz de K em torno de --pole (padrão e3); csv traz o perfil z,r.'

    def handle(self, *args, **options):
        body = load_body(options['body'])
        axis = options['pole'] or (0.0, 0.0, 1.0)
        profile = schwarz_symmetral(body, axis, grid_size=options['resolution'])
        report = {
            'body': body.to_dict(), 'profile': profile.to_descriptor(), 'volume': profile_volume(profile),
            'volume_gap': volume_gap(body, profile),
        }
        if body.is_smooth():
            report['invariance'] = symmetral_invariance_gap(body, axis, grid_size=options['resolution'])
        self.emit(report, options, profile.to_csv())
