from django.core.validators import MinValueValidator
from django.db import models
from django.utils.translation import gettext_lazy as _

from .palettes import parse_palette_text
from .validators import validate_hex_color, validate_palette_colors


class Palette(models.Model):
    """
    A user palette, one #rrggbb color per line.
    Usable on the command line as palette:<name>.
    """
    name = models.CharField(max_length=100, unique=True)
    colors = models.TextField(validators=[validate_palette_colors])
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["name"]

    def save(self, *args, **kwargs):
        self.colors = "\n".join(line.strip().lower() for line in self.colors.splitlines() if line.strip())
        super().save(*args, **kwargs)

    def rgb_colors(self):
        return parse_palette_text(self.colors)

    def __str__(self):
        return self.name


class ColoringRun(models.Model):
    """A layout colored through the API, with its report."""
    created_at = models.DateTimeField(auto_now_add=True)
    input_dot = models.TextField()
    output_dot = models.TextField(blank=True, editable=False)

    color_scheme = models.CharField(max_length=200, default="rgb")
    lightness_min = models.FloatField(null=True, blank=True)
    lightness_max = models.FloatField(null=True, blank=True)
    epsilon = models.FloatField(default=1e-2, validators=[MinValueValidator(1e-9)])
    random_starts = models.PositiveIntegerField(null=True, blank=True)
    seed = models.IntegerField(default=0)
    enable_c3 = models.BooleanField(default=True)

    node_count = models.PositiveIntegerField(default=0, editable=False)
    edge_count = models.PositiveIntegerField(default=0, editable=False)
    collision_count = models.PositiveIntegerField(default=0, editable=False)
    component_count = models.PositiveIntegerField(default=0, editable=False)
    # null when no edge collides
    mindist = models.FloatField(null=True, blank=True, editable=False)
    sumdist = models.FloatField(default=0.0, editable=False)
    timings = models.JSONField(default=dict, blank=True, editable=False)

    class Meta:
        ordering = ["-created_at", "-id"]

    def record(self, result):
        """Copy a pipeline result's report onto this run."""
        report = result.report
        self.output_dot = result.output
        self.node_count = report["nodes"]
        self.edge_count = report["edges"]
        self.collision_count = report["collisions"]
        self.component_count = report["components"]
        self.mindist = report["mindist"]
        self.sumdist = report["sumdist"]
        self.timings = report["timings"]

    def __str__(self):
        return f"Run {self.pk} ({self.color_scheme}, {self.edge_count} edges)"


class EdgeColor(models.Model):
    run = models.ForeignKey(ColoringRun, on_delete=models.CASCADE, related_name="edges")
    edge_index = models.PositiveIntegerField()
    source = models.CharField(max_length=200)
    target = models.CharField(max_length=200)
    color = models.CharField(max_length=7, validators=[validate_hex_color])

    class Meta:
        constraints = [
            models.UniqueConstraint(fields=["run", "edge_index"], name="unique_edge_per_run"),
        ]
        ordering = ["edge_index"]

    def __str__(self):
        return _("%(source)s -- %(target)s: %(color)s") % {
            "source": self.source, "target": self.target, "color": self.color,
        }
