import csv
import io
import json

from django.core.exceptions import ValidationError as DjangoValidationError
from rest_framework import serializers

from .models import ModelParams
from .presets import SweepSpec
from .services import column_name
from .validators import LEVELS, PROBES, SWEEP_PARAMS

FLOAT_FORMAT = '.17g'


def _django_errors(exc):
    return serializers.ValidationError(exc.messages)


class ModelParamsSerializer(serializers.Serializer):
    """Serializer para os parâmetros do modelo"""

    J = serializers.FloatField()
    D = serializers.FloatField()
    B1 = serializers.FloatField()
    B2 = serializers.FloatField()
    theta = serializers.FloatField()
    phi = serializers.FloatField(default=0.0)

    def validate(self, attrs):
        """Delegar as regras de domínio para ModelParams"""
        try:
            ModelParams(**attrs)
        except DjangoValidationError as exc:
            raise _django_errors(exc)
        return attrs

    def create(self, validated_data):
        return ModelParams(**validated_data)


class SweepSpecSerializer(serializers.Serializer):
    """
    Serializer para arquivos JSON de especificação de varredura
    (esquema em docs/sweep_spec.schema.json)
    """

    base = ModelParamsSerializer()
    sweep_param = serializers.ChoiceField(choices=SWEEP_PARAMS)
    start = serializers.FloatField()
    stop = serializers.FloatField()
    points = serializers.IntegerField(min_value=2, required=False)
    levels = serializers.ListField(
        child=serializers.ChoiceField(choices=LEVELS), allow_empty=False, default=list(LEVELS)
    )
    probes = serializers.ListField(
        child=serializers.ChoiceField(choices=PROBES), allow_empty=False, default=['two-qubit']
    )
    preset_name = serializers.CharField(required=False, allow_null=True, default=None)
    series_param = serializers.ChoiceField(
        choices=SWEEP_PARAMS, required=False, allow_null=True, default=None
    )
    series = serializers.ListField(child=serializers.FloatField(), default=list)

    def validate(self, attrs):
        """Validação cruzada via SweepSpec"""
        try:
            self._build(attrs)
        except DjangoValidationError as exc:
            raise _django_errors(exc)
        return attrs

    def _build(self, attrs):
        from django.conf import settings

        points = attrs.get('points') or getattr(settings, 'QFI_SWEEP_POINTS', 201)
        return SweepSpec(
            base=ModelParams(**attrs['base']),
            sweep_param=attrs['sweep_param'],
            start=attrs['start'],
            stop=attrs['stop'],
            points=points,
            levels=tuple(attrs['levels']),
            probes=tuple(attrs['probes']),
            preset_name=attrs.get('preset_name'),
            series_param=attrs.get('series_param'),
            series=tuple(attrs.get('series') or ()),
        )

    def create(self, validated_data):
        return self._build(validated_data)


class SweepRecordSerializer(serializers.Serializer):
    """Representação JSON de um ponto da varredura"""

    sweep_param = serializers.CharField()
    sweep_value = serializers.FloatField()
    series_param = serializers.CharField(allow_null=True)
    series_value = serializers.FloatField(allow_null=True)
    values = serializers.DictField(child=serializers.FloatField(allow_null=True))
    methods = serializers.DictField(child=serializers.CharField())
    fallback = serializers.BooleanField()
    degenerate = serializers.BooleanField()
    error = serializers.CharField(allow_null=True)


def load_sweep_spec(payload) -> SweepSpec:
    """
    SweepSpec a partir de um dict já decodificado; erros viram
    rest_framework.exceptions.ValidationError.
    """
    serializer = SweepSpecSerializer(data=payload)
    serializer.is_valid(raise_exception=True)
    return serializer.save()


def format_float(value):
    if value is None:
        return ''
    return format(value, FLOAT_FORMAT)


def sweep_columns(spec: SweepSpec):
    columns = ['sweep_param', 'sweep_value']
    if spec.series_param is not None:
        columns += ['series_param', 'series_value']
    columns += [column_name(probe, j) for probe in spec.probes for j in spec.levels]
    columns += ['fallback', 'degenerate']
    return columns


def records_to_csv(spec: SweepSpec, records) -> str:
    """
    CSV com cabeçalho e floats em 17 dígitos significativos; valores de
    pontos degenerados ficam vazios.
    """
    columns = sweep_columns(spec)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for record in records:
        row = [record.sweep_param, format_float(record.sweep_value)]
        if spec.series_param is not None:
            row += [record.series_param, format_float(record.series_value)]
        row += [format_float(record.values.get(key)) for key in columns if key.startswith('qfi_')]
        row += [int(record.fallback), int(record.degenerate)]
        writer.writerow(row)
    return buffer.getvalue()


def records_to_json(spec: SweepSpec, records) -> str:
    payload = {
        'preset': spec.preset_name,
        'base': spec.base.as_dict(),
        'sweep_param': spec.sweep_param,
        'series_param': spec.series_param,
        'levels': list(spec.levels),
        'probes': list(spec.probes),
        'records': SweepRecordSerializer(records, many=True).data,
    }
    return json.dumps(payload, indent=2, ensure_ascii=False) + '\n'


def point_to_csv(result) -> str:
    """Uma linha com os parâmetros do ponto e as QFIs pedidas"""
    params = result['params']
    columns = list(params) + list(result['qfi']) + ['fallback']
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    writer.writerow(
        [format_float(params[name]) for name in params]
        + [format_float(entry['value']) for entry in result['qfi'].values()]
        + [int(result['fallback'])]
    )
    return buffer.getvalue()


def to_json(payload) -> str:
    """JSON determinístico; infinitos viram null"""
    return json.dumps(_finite(payload), indent=2, sort_keys=True, ensure_ascii=False) + '\n'


def _finite(value):
    if isinstance(value, float) and (value != value or value in (float('inf'), float('-inf'))):
        return None
    if isinstance(value, dict):
        return {key: _finite(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(item) for item in value]
    return value
