from django.apps import AppConfig


class TomographyConfig(AppConfig):
    name = 'tomography'
    verbose_name = 'Geometric tomography toolkit'
