from django.core.exceptions import ValidationError as DjangoValidationError
from django.db import transaction
from django.urls import reverse
from rest_framework import serializers

from .exceptions import ClarifyError, ColorSpaceError
from .geometry import GeomConfig
from .layout_io import edge_hex_colors
from .models import ColoringRun, EdgeColor, Palette
from .pipeline import OUTPUT_FORMATS, PipelineOptions, run_pipeline
from .validators import validate_lightness_range

BASE_SCHEMES = ("rgb", "lab", "gray")


def parse_lightness(value):
    """'MIN,MAX' -> (min, max)"""
    try:
        low, high = (float(part) for part in value.split(","))
    except ValueError:
        raise serializers.ValidationError("Lightness must be given as MIN,MAX.") from None
    try:
        validate_lightness_range(low, high)
    except DjangoValidationError as exc:
        raise serializers.ValidationError(exc.messages) from None
    return (low, high)


class ColoringOptionsSerializer(serializers.Serializer):
    """
    Options of one pipeline run, shared by the clarify command and the API.
    - color_scheme is rgb | lab | gray | palette:<name-or-file>
    - lightness ("MIN,MAX") only goes with the lab scheme
    - map mode writes dot or json
    """
    color_scheme = serializers.CharField(default="rgb")
    lightness = serializers.CharField(required=False, allow_null=True, allow_blank=True)
    epsilon = serializers.FloatField(default=1e-2)
    random_starts = serializers.IntegerField(required=False, allow_null=True, min_value=1)
    seed = serializers.IntegerField(default=0)
    small_angle = serializers.FloatField(default=15.0)
    straight_angle = serializers.FloatField(default=165.0)
    near_dist_frac = serializers.FloatField(default=0.01)
    parallel_angle = serializers.FloatField(default=1.0)
    enable_c3 = serializers.BooleanField(default=True)
    output = serializers.ChoiceField(choices=OUTPUT_FORMATS, default="dot")
    dash_styles = serializers.BooleanField(default=False)
    map_mode = serializers.BooleanField(default=False)
    palette_ordering = serializers.ChoiceField(choices=("tsp", "natural"), default="tsp")

    def validate_color_scheme(self, value):
        if value in BASE_SCHEMES:
            return value
        if value.startswith("palette:") and len(value) > len("palette:"):
            return value
        raise serializers.ValidationError("Use rgb, lab, gray or palette:<name-or-file>.")

    def validate_lightness(self, value):
        return parse_lightness(value) if value else None

    def validate_epsilon(self, value):
        if not value > 0:
            raise serializers.ValidationError("epsilon must be positive.")
        return value

    def validate(self, attrs):
        if attrs.get("lightness") and attrs["color_scheme"] != "lab":
            raise serializers.ValidationError({"lightness": "Lightness only applies to the lab color scheme."})
        if attrs["map_mode"] and attrs["output"] == "svg":
            raise serializers.ValidationError({"output": "Map mode writes dot or json."})
        try:
            attrs["geom"] = GeomConfig(
                small_angle_deg=attrs["small_angle"],
                straight_angle_deg=attrs["straight_angle"],
                near_dist_frac=attrs["near_dist_frac"],
                parallel_angle_deg=attrs["parallel_angle"],
                enable_c3=attrs["enable_c3"],
            )
        except DjangoValidationError as exc:
            raise serializers.ValidationError(exc.messages) from None
        return attrs

    def to_options(self, **overrides):
        data = self.validated_data
        options = dict(
            color_scheme=data["color_scheme"],
            lightness=data.get("lightness"),
            epsilon=data["epsilon"],
            random_starts=data.get("random_starts"),
            seed=data["seed"],
            geom=data["geom"],
            output=data["output"],
            dash_styles=data["dash_styles"],
            map_mode=data["map_mode"],
            palette_ordering=data["palette_ordering"],
        )
        options.update(overrides)
        return PipelineOptions(**options)


class ColoringReportSerializer(serializers.Serializer):
    """Schema of the run report written with --output=json."""
    nodes = serializers.IntegerField(min_value=0)
    edges = serializers.IntegerField(min_value=0)
    collisions = serializers.IntegerField(min_value=0)
    components = serializers.IntegerField(min_value=0)
    mindist = serializers.FloatField(allow_null=True, min_value=0)
    sumdist = serializers.FloatField(min_value=0)
    color_scheme = serializers.CharField()
    seed = serializers.IntegerField()
    timings = serializers.DictField(child=serializers.FloatField(min_value=0))

    def validate_timings(self, value):
        missing = {"parse", "collision", "space", "optimize", "emit"} - set(value)
        if missing:
            raise serializers.ValidationError(f"missing stage timings: {sorted(missing)}")
        return value


class EdgeColorSerializer(serializers.ModelSerializer):
    class Meta:
        model = EdgeColor
        fields = ["id", "edge_index", "source", "target", "color"]


class PaletteSerializer(serializers.ModelSerializer):
    class Meta:
        model = Palette
        fields = ["id", "name", "colors", "created_at"]
        read_only_fields = ["created_at"]


class ColoringRunSerializer(serializers.ModelSerializer):
    """
    Serializer for ColoringRun.
    - creating a run colors the posted layout straight away
    - palette_ordering and lightness are write-only run options
    - edges are listed as hyperlinks to the nested edge routes
    """
    lightness = serializers.CharField(write_only=True, required=False, allow_blank=True)
    palette_ordering = serializers.ChoiceField(choices=("tsp", "natural"), default="tsp", write_only=True)
    edges = serializers.SerializerMethodField()

    class Meta:
        model = ColoringRun
        fields = [
            "id", "created_at", "input_dot", "output_dot",
            "color_scheme", "lightness", "lightness_min", "lightness_max", "epsilon",
            "random_starts", "seed", "enable_c3", "palette_ordering",
            "node_count", "edge_count", "collision_count", "component_count",
            "mindist", "sumdist", "timings", "edges",
        ]
        read_only_fields = [
            "created_at", "output_dot", "lightness_min", "lightness_max",
            "node_count", "edge_count", "collision_count", "component_count",
            "mindist", "sumdist", "timings",
        ]

    def get_edges(self, run):
        request = self.context.get("request")
        path = reverse("run-edges-list", kwargs={"run_pk": run.pk})
        return request.build_absolute_uri(path) if request else path

    def validate(self, attrs):
        options = ColoringOptionsSerializer(data={
            "color_scheme": attrs.get("color_scheme", "rgb"),
            "lightness": attrs.get("lightness") or None,
            "epsilon": attrs.get("epsilon", 1e-2),
            "random_starts": attrs.get("random_starts"),
            "seed": attrs.get("seed", 0),
            "enable_c3": attrs.get("enable_c3", True),
            "palette_ordering": attrs.get("palette_ordering", "tsp"),
        })
        options.is_valid(raise_exception=True)
        attrs["options"] = options.to_options(allow_palette_files=False)
        return attrs

    @transaction.atomic
    def create(self, validated_data):
        options = validated_data.pop("options")
        validated_data.pop("lightness", None)
        validated_data.pop("palette_ordering", None)
        try:
            result = run_pipeline(options, text=validated_data["input_dot"])
        except ColorSpaceError as exc:
            raise serializers.ValidationError({"color_scheme": str(exc)}) from None
        except ClarifyError as exc:
            raise serializers.ValidationError({"input_dot": str(exc)}) from None
        run = ColoringRun(**validated_data)
        if options.lightness:
            run.lightness_min, run.lightness_max = options.lightness
        run.record(result)
        run.save()
        colors = edge_hex_colors(result.dual, result.assignment)
        EdgeColor.objects.bulk_create(
            EdgeColor(run=run, edge_index=e.id, source=e.source, target=e.target, color=colors[e.id])
            for e in sorted(result.layout.edges, key=lambda e: e.id)
        )
        return run
