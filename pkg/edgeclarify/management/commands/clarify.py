import json
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from edgeclarify.exceptions import ClarifyError
from edgeclarify.pipeline import OUTPUT_FORMATS, run_pipeline
from edgeclarify.serializers import ColoringOptionsSerializer

LOG_LEVELS = {0: logging.WARNING, 1: logging.INFO}


def _flatten_errors(detail, prefix=""):
    if isinstance(detail, dict):
        for key, value in detail.items():
            name = "" if key == "non_field_errors" else f"{key}: "
            yield from _flatten_errors(value, prefix + name)
    elif isinstance(detail, list):
        for item in detail:
            yield from _flatten_errors(item, prefix)
    else:
        yield prefix + str(detail)


class Command(BaseCommand):
    help = "Color the edges of a laid-out graph so that colliding edges get distinct colors."

    def add_arguments(self, parser):
        parser.add_argument("--input", required=True, help="DOT layout, or region adjacency with --map-mode")
        parser.add_argument("--color-scheme", default="rgb", help="rgb | lab | gray | palette:<name-or-file>")
        parser.add_argument("--lightness", help="MIN,MAX lightness window for the lab scheme")
        parser.add_argument("--epsilon", type=float, default=1e-2)
        parser.add_argument("--random-starts", type=int)
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--small-angle", type=float, default=15.0)
        parser.add_argument("--straight-angle", type=float, default=165.0)
        parser.add_argument("--no-c3", dest="enable_c3", action="store_false")
        parser.add_argument("--near-dist-frac", type=float, default=0.01)
        parser.add_argument("--parallel-angle", type=float, default=1.0)
        parser.add_argument("--output", choices=OUTPUT_FORMATS, default="dot")
        parser.add_argument("--dash-styles", action="store_true", help="gray scheme: draw light edges dashed in svg")
        parser.add_argument("--map-mode", action="store_true", help="color regions of a map instead of edges")
        parser.add_argument("--report", metavar="PATH", help="also write the JSON run report to PATH")

    def handle(self, *args, **options):
        logging.getLogger("edgeclarify").setLevel(LOG_LEVELS.get(options["verbosity"], logging.DEBUG))

        serializer = ColoringOptionsSerializer(data={
            key: options[key] for key in (
                "color_scheme", "lightness", "epsilon", "random_starts", "seed",
                "small_angle", "straight_angle", "near_dist_frac", "parallel_angle",
                "enable_c3", "output", "dash_styles", "map_mode",
            )
        })
        try:
            serializer.is_valid(raise_exception=True)
            result = run_pipeline(serializer.to_options(input=options["input"]))
        except ValidationError as exc:
            raise CommandError("; ".join(_flatten_errors(exc.detail))) from None
        except ClarifyError as exc:
            raise CommandError(str(exc)) from None
        except OSError as exc:
            raise CommandError(f"cannot read {options['input']}: {exc.strerror}") from None

        if options["report"]:
            try:
                Path(options["report"]).write_text(json.dumps(result.report, indent=2, sort_keys=True) + "\n")
            except OSError as exc:
                raise CommandError(f"cannot write {options['report']}: {exc.strerror}") from None

        self.stdout.write(result.output, ending="")
