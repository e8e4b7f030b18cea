from django.contrib import admin
from .models import Palette, ColoringRun, EdgeColor

admin.site.register([Palette, ColoringRun, EdgeColor])
