"""
Formulários de validação dos descritores de corpos.

Cada variante de corpo (ball, ellipsoid, box, ...) tem um forms.Form que
valida o objeto JSON já decodificado e constrói o StarBody correspondente
com build(). Os campos numéricos são estritos: strings e booleanos são
recusados mesmo quando o Django os converteria.

O primeiro campo com erro vira o `path` do DescriptorParseError, com índice
quando o erro está dentro de uma lista (ex.: half_sides[3]).
"""
import json
import math

from django import forms
from django.core.exceptions import ValidationError

from .exceptions import DescriptorParseError, InvalidParameter
from .star_body import (
    INTERPOLATIONS, SMOOTHNESS_ORDER, AxialRevolution, Ball, Box, CrossPolytope, Cylinder,
    Ellipsoid, PerturbedBall, PolarRevolution, Sampled,
)


def _strict_float(value, positive=False, min_value=None, suffix=''):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError('Informe um número.', code='invalid', params={'suffix': suffix})
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError('O número deve ser finito.', code='invalid', params={'suffix': suffix})
    if positive and value <= 0:
        raise ValidationError('O valor deve ser positivo.', code='min_value', params={'suffix': suffix})
    if min_value is not None and value < min_value:
        raise ValidationError(f'O valor deve ser >= {min_value}.', code='min_value', params={'suffix': suffix})
    return value


def _strict_int(value, min_value=None, suffix=''):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError('Informe um inteiro.', code='invalid', params={'suffix': suffix})
    if min_value is not None and value < min_value:
        raise ValidationError(f'O valor deve ser >= {min_value}.', code='min_value', params={'suffix': suffix})
    return value


class StrictFloatField(forms.Field):
    """Número JSON (int ou float, nunca string ou booleano)."""

    def __init__(self, *, positive=False, min_value=None, **kwargs):
        self.positive = positive
        self.min_value = min_value
        super().__init__(**kwargs)

    def to_python(self, value):
        if value is None:
            return None
        return _strict_float(value, self.positive, self.min_value)


class StrictIntegerField(forms.Field):

    def __init__(self, *, min_value=None, **kwargs):
        self.min_value = min_value
        super().__init__(**kwargs)

    def to_python(self, value):
        if value is None:
            return None
        return _strict_int(value, self.min_value)


class FloatListField(forms.Field):
    """Lista JSON de números; `length` fixa o tamanho, `min_length` o mínimo."""

    def __init__(self, *, positive=False, min_value=None, length=None, min_length=1, **kwargs):
        self.positive = positive
        self.min_value = min_value
        self.length = length
        self.min_length = min_length
        super().__init__(**kwargs)

    def to_python(self, value):
        if value is None:
            return None
        if not isinstance(value, list):
            raise ValidationError('Informe uma lista de números.', code='invalid')
        if self.length is not None and len(value) != self.length:
            raise ValidationError(f'A lista deve ter {self.length} elementos.', code='length')
        if len(value) < self.min_length:
            raise ValidationError(f'A lista deve ter pelo menos {self.min_length} elementos.', code='length')
        return [_strict_float(v, self.positive, self.min_value, suffix=f'[{i}]') for i, v in enumerate(value)]


class FloatMatrixField(forms.Field):
    """Matriz retangular (lista de listas) de números positivos."""

    def to_python(self, value):
        if value is None:
            return None
        if not isinstance(value, list) or not value:
            raise ValidationError('Informe uma matriz (lista de listas).', code='invalid')
        width = None
        rows = []
        for i, row in enumerate(value):
            if not isinstance(row, list):
                raise ValidationError('Cada linha deve ser uma lista.', code='invalid', params={'suffix': f'[{i}]'})
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ValidationError('A matriz deve ser retangular.', code='shape', params={'suffix': f'[{i}]'})
            rows.append([_strict_float(v, positive=True, suffix=f'[{i}][{j}]') for j, v in enumerate(row)])
        return rows


class CoefficientListField(forms.Field):
    """Lista de triplas [l, m, c] com l par, |m| <= l e índices sem repetição."""

    def to_python(self, value):
        if value is None:
            return None
        if not isinstance(value, list):
            raise ValidationError('Informe uma lista de triplas [l, m, c].', code='invalid')
        seen = set()
        triples = []
        for i, item in enumerate(value):
            suffix = f'[{i}]'
            if not isinstance(item, list) or len(item) != 3:
                raise ValidationError('Cada coeficiente é uma tripla [l, m, c].', code='invalid',
                                      params={'suffix': suffix})
            l = _strict_int(item[0], min_value=0, suffix=suffix + '[0]')
            m = _strict_int(item[1], suffix=suffix + '[1]')
            c = _strict_float(item[2], suffix=suffix + '[2]')
            if abs(m) > l:
                raise ValidationError('É preciso |m| <= l.', code='invalid', params={'suffix': suffix + '[1]'})
            if l % 2:
                raise ValidationError('Só graus pares mantêm o corpo centrado.', code='odd',
                                      params={'suffix': suffix + '[0]'})
            if (l, m) in seen:
                raise ValidationError('Índice (l, m) repetido.', code='duplicate', params={'suffix': suffix})
            seen.add((l, m))
            triples.append((l, m, c))
        return triples


class BallForm(forms.Form):
    n = StrictIntegerField(min_value=2)
    r = StrictFloatField(positive=True)

    def build(self):
        return Ball(self.cleaned_data['n'], self.cleaned_data['r'])


class EllipsoidForm(forms.Form):
    semi_axes = FloatListField(positive=True, min_length=2)

    def build(self):
        return Ellipsoid(tuple(self.cleaned_data['semi_axes']))


class BoxForm(forms.Form):
    n = StrictIntegerField(min_value=2)
    half_sides = FloatListField(positive=True, min_length=2)

    def clean(self):
        """Garante que half_sides tenha exatamente n elementos."""
        cleaned = super().clean()
        n = cleaned.get('n')
        sides = cleaned.get('half_sides')
        if n is not None and sides is not None and len(sides) != n:
            self.add_error('half_sides', ValidationError(
                f'half_sides tem {len(sides)} elementos, esperado n = {n}.', code='length'))
        return cleaned

    def build(self):
        return Box(tuple(self.cleaned_data['half_sides']))


class CrossPolytopeForm(forms.Form):
    n = StrictIntegerField(min_value=2)
    a = StrictFloatField(positive=True)

    def build(self):
        return CrossPolytope(self.cleaned_data['n'], self.cleaned_data['a'])


class CylinderForm(forms.Form):
    n = StrictIntegerField(min_value=2)
    r = StrictFloatField(positive=True)
    h = StrictFloatField(positive=True)

    def build(self):
        data = self.cleaned_data
        return Cylinder(data['n'], data['r'], data['h'])


class RevolutionForm(forms.Form):
    """
    Corpo de revolução em uma de duas formas:
    - polar: axis, phi, rho e smoothness (ρ(φ) em [0, π/2]);
    - por alturas: axis, z, r e interpolation (raio das seções r(z)).
    """
    axis = FloatListField(length=3)
    phi = FloatListField(required=False, min_value=0.0, min_length=4)
    rho = FloatListField(required=False, positive=True, min_length=4)
    smoothness = forms.ChoiceField(required=False, choices=[(s, s) for s in SMOOTHNESS_ORDER])
    z = FloatListField(required=False, min_length=5)
    r = FloatListField(required=False, min_value=0.0, min_length=5)
    interpolation = forms.ChoiceField(required=False, choices=[(i, i) for i in INTERPOLATIONS])

    def clean(self):
        """Exige exatamente uma das duas formas, com os campos pareados."""
        cleaned = super().clean()
        polar = [name for name in ('phi', 'rho', 'smoothness') if self.data.get(name) is not None]
        height = [name for name in ('z', 'r', 'interpolation') if self.data.get(name) is not None]
        if polar and height:
            self.add_error(height[0], ValidationError(
                'Não misture a forma polar (phi, rho) com a forma por alturas (z, r).', code='mixed'))
        elif polar:
            for name in ('phi', 'rho'):
                if self.data.get(name) is None:
                    self.add_error(name, ValidationError('Campo obrigatório na forma polar.', code='required'))
        elif height:
            for name in ('z', 'r'):
                if self.data.get(name) is None:
                    self.add_error(name, ValidationError('Campo obrigatório na forma por alturas.', code='required'))
        else:
            self.add_error('phi', ValidationError('Informe phi/rho ou z/r.', code='required'))
        return cleaned

    def build(self):
        data = self.cleaned_data
        axis = tuple(data['axis'])
        if data.get('phi') is not None:
            return PolarRevolution(axis, tuple(data['phi']), tuple(data['rho']), data.get('smoothness') or 'C1')
        return AxialRevolution(axis, tuple(data['z']), tuple(data['r']), data.get('interpolation') or 'chebyshev')


class PerturbedBallForm(forms.Form):
    r0 = StrictFloatField(positive=True)
    amplitude = StrictFloatField(min_value=0.0)
    coefficients = CoefficientListField()

    def build(self):
        data = self.cleaned_data
        return PerturbedBall(data['r0'], data['amplitude'], tuple(data['coefficients']))


class SampledForm(forms.Form):
    n = StrictIntegerField()
    values = FloatMatrixField()
    order = StrictIntegerField(required=False)

    def clean_n(self):
        n = self.cleaned_data.get('n')
        if n != 3:
            raise ValidationError('Corpos amostrados só existem em n = 3.', code='invalid')
        return n

    def clean_order(self):
        order = self.cleaned_data.get('order')
        if order is not None and order not in (1, 3):
            raise ValidationError('order deve ser 1 ou 3.', code='invalid')
        return order

    def build(self):
        data = self.cleaned_data
        values = tuple(tuple(row) for row in data['values'])
        return Sampled(values, data.get('order') or 3)


DESCRIPTOR_FORMS = {
    'ball': BallForm,
    'ellipsoid': EllipsoidForm,
    'box': BoxForm,
    'cross_polytope': CrossPolytopeForm,
    'cylinder': CylinderForm,
    'revolution': RevolutionForm,
    'perturbed_ball': PerturbedBallForm,
    'sampled': SampledForm,
}


def _first_error(form):
    errors = form.errors.as_data()
    for name in list(form.fields) + ['__all__']:
        if name in errors:
            error = errors[name][0]
            suffix = (error.params or {}).get('suffix', '')
            path = '' if name == '__all__' else f'{name}{suffix}'
            return DescriptorParseError(error.message, path=path)
    return DescriptorParseError('Descritor inválido.')


def descriptor_from_dict(payload):
    """Valida um descritor já decodificado e retorna o StarBody."""
    if not isinstance(payload, dict):
        raise DescriptorParseError('O descritor deve ser um objeto JSON.')
    kind = payload.get('type')
    form_class = DESCRIPTOR_FORMS.get(kind) if isinstance(kind, str) else None
    if form_class is None:
        raise DescriptorParseError(f'Tipo de corpo desconhecido: {kind!r}.', path='type')
    unknown = sorted(set(payload) - {'type'} - set(form_class.base_fields))
    if unknown:
        raise DescriptorParseError('Campo desconhecido.', path=unknown[0])
    form = form_class(data={key: value for key, value in payload.items() if key != 'type'})
    if not form.is_valid():
        raise _first_error(form)
    try:
        return form.build()
    except DescriptorParseError:
        raise
    except InvalidParameter as exc:
        raise DescriptorParseError(exc.message) from exc


def parse_descriptor(text):
    """
    Lê o texto JSON de um descritor.

    Parâmetros:
    - text: conteúdo JSON (str ou bytes).

    Retorna:
    - o StarBody descrito; erros de esquema viram DescriptorParseError com path.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorParseError(f'JSON inválido: {exc.msg}.', path=f'linha {exc.lineno}') from exc
    return descriptor_from_dict(payload)


def serialize(body):
    """Texto JSON do descritor; parse_descriptor(serialize(body)) == body."""
    return json.dumps(body.to_dict())
