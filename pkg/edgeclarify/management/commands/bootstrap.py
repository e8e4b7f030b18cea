from django.core.management.base import BaseCommand

from edgeclarify.models import Palette
from edgeclarify.palettes import BUILTIN_PALETTES


class Command(BaseCommand):
    help = "Store the built-in palettes so they can be listed and edited through the API."

    def handle(self, *args, **options):
        created = 0
        for name, colors in BUILTIN_PALETTES.items():
            _, was_created = Palette.objects.get_or_create(name=name, defaults={"colors": "\n".join(colors)})
            created += was_created
        self.stdout.write(self.style.SUCCESS(f"{created} palettes added, {len(BUILTIN_PALETTES) - created} already present"))
