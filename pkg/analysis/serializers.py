from rest_framework import serializers
import logging

from . import config
from .exceptions import InvalidToleranceError
from .profiles import PROFILE_KINDS
from .subspace_geometry import RankTolerance

logger = logging.getLogger(__name__)

FINITE_GROUP = 'finite-group'
REAL_LINE = 'real-line'


class ComplexField(serializers.Field):
    """Complex number written as a two-element array [re, im]."""

    default_error_messages = {
        'invalid': 'Expected a complex number as [re, im].',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool) or not isinstance(data, (list, tuple)) or len(data) != 2:
            self.fail('invalid')
        try:
            return complex(float(data[0]), float(data[1]))
        except (TypeError, ValueError):
            self.fail('invalid')

    def to_representation(self, value):
        return [value.real, value.imag]


class GroupSerializer(serializers.Serializer):
    N = serializers.IntegerField(min_value=1)
    M = serializers.IntegerField(min_value=1)

    def validate(self, data):
        if data['N'] % data['M']:
            raise serializers.ValidationError(f"M={data['M']} must divide N={data['N']}.")
        return data


class GridSerializer(serializers.Serializer):
    size = serializers.IntegerField(min_value=1)
    truncation = serializers.IntegerField(min_value=0, required=False, default=config.TRUNCATION)
    sampling = serializers.ChoiceField(choices=['midpoint', 'left'], required=False, default='midpoint')


class ToleranceSerializer(serializers.Serializer):
    rank = serializers.FloatField(required=False)
    intersect = serializers.FloatField(required=False)
    close = serializers.FloatField(required=False)

    def validate(self, data):
        try:
            RankTolerance().replace(
                relative_threshold=data.get('rank'),
                intersect_threshold=data.get('intersect'),
                close_threshold=data.get('close'),
            )
        except InvalidToleranceError as e:
            raise serializers.ValidationError(str(e))
        return data


class ProfileSpecSerializer(serializers.Serializer):
    """One real-line generator, named by profile kind."""

    REQUIRED = {
        'gaussian': (),
        'bspline': ('p',),
        'bandlimit': ('c', 'd'),
        'delta': (),
        'rotation': ('theta0', 'slope'),
        'custom-table': ('path',),
    }

    kind = serializers.ChoiceField(choices=sorted(PROFILE_KINDS))
    a = serializers.FloatField(required=False)
    p = serializers.IntegerField(required=False, min_value=0)
    c = serializers.FloatField(required=False)
    d = serializers.FloatField(required=False)
    theta0 = serializers.FloatField(required=False)
    slope = serializers.FloatField(required=False)
    path = serializers.CharField(required=False)
    scale = ComplexField(required=False)

    def validate(self, data):
        kind = data['kind']
        missing = [name for name in self.REQUIRED[kind] if name not in data]
        if missing:
            raise serializers.ValidationError(f"Profile '{kind}' needs {', '.join(missing)}.")
        allowed = set(self.REQUIRED[kind]) | {'kind', 'scale'} | ({'a'} if kind == 'gaussian' else set())
        extra = sorted(set(data) - allowed)
        if extra:
            raise serializers.ValidationError(f"Profile '{kind}' does not take {', '.join(extra)}.")
        if kind == 'gaussian' and data.get('a', 1.0) <= 0:
            raise serializers.ValidationError('gaussian needs a > 0.')
        if kind == 'bandlimit' and not data['c'] < data['d']:
            raise serializers.ValidationError('bandlimit needs c < d.')
        return data


class FiniteGeneratorSerializer(serializers.Serializer):
    """One finite-group generator: {"delta": k}, {"random": true} or {"values": [[re, im], ...]}.

    A bare list of [re, im] pairs is accepted as shorthand for "values".
    """

    values = serializers.ListField(child=ComplexField(), required=False, allow_empty=False)
    delta = serializers.IntegerField(required=False, min_value=0)
    coefficient = ComplexField(required=False)
    random = serializers.BooleanField(required=False)

    def to_internal_value(self, data):
        if isinstance(data, list):
            data = {'values': data}
        return super().to_internal_value(data)

    def validate(self, data):
        kinds = [k for k in ('values', 'delta', 'random') if k in data]
        if len(kinds) != 1:
            raise serializers.ValidationError('Give exactly one of a value list, "delta" or "random".')
        if 'random' in data and not data['random']:
            raise serializers.ValidationError('"random" must be true when present.')
        if 'coefficient' in data and 'delta' not in data:
            raise serializers.ValidationError('"coefficient" only applies to "delta" generators.')
        return data


class InstanceConfigSerializer(serializers.Serializer):
    """Validates an instance config document.

    Generator sets are validated against the realization; role keys
    (A, B, measuring, targets) must name declared sets.
    """

    realization = serializers.ChoiceField(choices=[FINITE_GROUP, REAL_LINE])
    group = GroupSerializer(required=False)
    grid = GridSerializer(required=False)
    sets = serializers.DictField(
        child=serializers.ListField(child=serializers.JSONField(), allow_empty=False),
        allow_empty=False,
    )
    A = serializers.CharField(required=False)
    B = serializers.CharField(required=False)
    measuring = serializers.CharField(required=False)
    targets = serializers.ListField(child=serializers.CharField(), required=False, allow_empty=False)
    tolerances = ToleranceSerializer(required=False)
    seed = serializers.IntegerField(required=False, min_value=0)

    def validate_sets(self, value):
        for name, generators in value.items():
            if len(generators) > config.MAX_GENERATORS:
                raise serializers.ValidationError(
                    f"Set '{name}' has {len(generators)} generators (limit {config.MAX_GENERATORS})."
                )
        return value

    def validate_targets(self, value):
        if len(value) > config.MAX_TARGETS:
            raise serializers.ValidationError(f'{len(value)} targets (limit {config.MAX_TARGETS}).')
        return value

    def validate(self, data):
        realization = data['realization']
        if realization == FINITE_GROUP and 'group' not in data:
            raise serializers.ValidationError({'group': 'Required for the finite-group realization.'})
        if realization == REAL_LINE and 'grid' not in data:
            raise serializers.ValidationError({'grid': 'Required for the real-line realization.'})

        spec_serializer = FiniteGeneratorSerializer if realization == FINITE_GROUP else ProfileSpecSerializer
        validated_sets, errors = {}, {}
        for name, generators in data['sets'].items():
            serializer = spec_serializer(data=generators, many=True)
            if serializer.is_valid():
                validated_sets[name] = serializer.validated_data
            else:
                errors[name] = serializer.errors
        if errors:
            raise serializers.ValidationError({'sets': errors})

        if realization == FINITE_GROUP:
            N = data['group']['N']
            for name, generators in validated_sets.items():
                for i, spec in enumerate(generators):
                    if 'values' in spec and len(spec['values']) != N:
                        errors.setdefault(name, []).append(
                            f"Generator {i} has {len(spec['values'])} values, expected N={N}."
                        )
                    if 'delta' in spec and spec['delta'] >= N:
                        errors.setdefault(name, []).append(f"Generator {i}: delta {spec['delta']} outside Z_{N}.")
            if errors:
                raise serializers.ValidationError({'sets': errors})
        data['sets'] = validated_sets

        referenced = [data[key] for key in ('A', 'B', 'measuring') if key in data] + data.get('targets', [])
        unknown = sorted({name for name in referenced if name not in validated_sets})
        if unknown:
            raise serializers.ValidationError(f"Unknown set names: {', '.join(unknown)}.")

        logger.debug('Validated %s config with sets %s', realization, sorted(validated_sets))
        return data
