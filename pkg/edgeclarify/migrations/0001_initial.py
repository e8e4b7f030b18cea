import django.core.validators
import django.db.models.deletion
from django.db import migrations, models

import edgeclarify.validators


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="ColoringRun",
            fields=[
                ("id", models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name="ID")),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                ("input_dot", models.TextField()),
                ("output_dot", models.TextField(blank=True, editable=False)),
                ("color_scheme", models.CharField(default="rgb", max_length=200)),
                ("lightness_min", models.FloatField(blank=True, null=True)),
                ("lightness_max", models.FloatField(blank=True, null=True)),
                ("epsilon", models.FloatField(default=0.01, validators=[django.core.validators.MinValueValidator(1e-09)])),
                ("random_starts", models.PositiveIntegerField(blank=True, null=True)),
                ("seed", models.IntegerField(default=0)),
                ("enable_c3", models.BooleanField(default=True)),
                ("node_count", models.PositiveIntegerField(default=0, editable=False)),
                ("edge_count", models.PositiveIntegerField(default=0, editable=False)),
                ("collision_count", models.PositiveIntegerField(default=0, editable=False)),
                ("component_count", models.PositiveIntegerField(default=0, editable=False)),
                ("mindist", models.FloatField(blank=True, editable=False, null=True)),
                ("sumdist", models.FloatField(default=0.0, editable=False)),
                ("timings", models.JSONField(blank=True, default=dict, editable=False)),
            ],
            options={
                "ordering": ["-created_at", "-id"],
            },
        ),
        migrations.CreateModel(
            name="Palette",
            fields=[
                ("id", models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name="ID")),
                ("name", models.CharField(max_length=100, unique=True)),
                ("colors", models.TextField(validators=[edgeclarify.validators.validate_palette_colors])),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "ordering": ["name"],
            },
        ),
        migrations.CreateModel(
            name="EdgeColor",
            fields=[
                ("id", models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name="ID")),
                ("edge_index", models.PositiveIntegerField()),
                ("source", models.CharField(max_length=200)),
                ("target", models.CharField(max_length=200)),
                ("color", models.CharField(max_length=7, validators=[edgeclarify.validators.validate_hex_color])),
                ("run", models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name="edges", to="edgeclarify.coloringrun")),
            ],
            options={
                "ordering": ["edge_index"],
                "constraints": [models.UniqueConstraint(fields=("run", "edge_index"), name="unique_edge_per_run")],
            },
        ),
    ]
